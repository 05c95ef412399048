#include <gtest/gtest.h>

#include "lockbox/lbp.hpp"
#include "lockbox/search.hpp"

using namespace lockbox;
using namespace lockbox::lbp;

namespace {

// locations realising each (x==x1, x==x2, x1==x2) class
struct Case {
  Location x, x1, x2;
  std::int64_t serial;  // in units of s
  int value_if_b0, value_if_b1;
  bool flips;
  bool flip_throws;
};

const Case kPairTable[] = {
    {0, 0, 0, 1, 1, 2, true, false},   // all together
    {0, 0, 1, 1, 0, 0, true, false},   // at first only
    {1, 0, 1, 1, 0, 0, true, false},   // at second only
    {2, 0, 0, 0, 0, 0, false, true},   // elsewhere, halves together
    {2, 0, 1, 0, 0, 0, false, true},   // elsewhere, halves apart
};

}  // namespace

TEST(LbpPair, TruthTable) {
  for (const Case& c : kPairTable) {
    for (Bit b : {Bit{0}, Bit{1}}) {
      PairState st{b, 11, c.x1, c.x2};
      EXPECT_EQ(serial_op(st, c.x), 11 * c.serial);
      EXPECT_EQ(value_op(st, c.x), b ? c.value_if_b1 : c.value_if_b0);
      if (c.flip_throws) {
        EXPECT_THROW(flip_op(st, c.x), SimError);
        EXPECT_EQ(st.b, b);
      } else {
        flip_op(st, c.x);
        EXPECT_EQ(st.b, c.flips ? 1 - b : b);
      }
    }
  }
}

TEST(LbpLocal, TruthTable) {
  for (Bit bi : {Bit{0}, Bit{1}}) {
    for (Bit bj : {Bit{0}, Bit{1}}) {
      const BoxHalf at{bi, 5, 0}, other_here{bj, 5, 0}, other_away{bj, 5, 1};
      EXPECT_EQ(serial_op(at, 0), 5);
      EXPECT_EQ(serial_op(at, 1), 0);
      EXPECT_EQ(value_op(at, other_here, 0), 1 + (bi ^ bj));
      EXPECT_EQ(value_op(at, other_away, 0), 0);
      EXPECT_EQ(value_op(at, other_here, 1), 0);
      BoxHalf h = at;
      flip_op(h, 0);
      EXPECT_EQ(h.b, 1 - bi);
      flip_op(h, 1);
      EXPECT_EQ(h.b, 1 - bi);
    }
  }
}

TEST(LbpLocal, SplitIsUniformAndConsistent) {
  for (Bit b : {Bit{0}, Bit{1}}) {
    const PairState st{b, 3, 0, 1};
    const auto p = search::exact_probability([&](RandomSource& rng) { return to_local(st, rng).first.b == 1; });
    EXPECT_EQ(p, Rational(1, 2));
    const auto q = search::exact_probability([&](RandomSource& rng) {
      const auto lp = to_local(st, rng);
      return (lp.first.b ^ lp.second.b) == b;
    });
    EXPECT_EQ(q, 1);
  }
}

TEST(LbpPair, ReadOnceConsumes) {
  PairState st{1, 3, 0, 0};
  st.read_once = true;
  EXPECT_EQ(value_op(st, 0), 2);
  EXPECT_EQ(value_op(st, 0), 0);
}

TEST(LbpPair, EquivalenceSmall) {
  EXPECT_TRUE(equivalence_oracle(2, 3, 1));
  EXPECT_TRUE(equivalence_oracle(3, 2, 2));
}

TEST(LbpPair, NoSignaling) { EXPECT_TRUE(no_signaling_check(3, 3)); }

TEST(LbpPair, AlphabetSize) {
  // serial, value, flip at each x plus two moves to each x
  EXPECT_EQ(op_alphabet(3).size(), 15u);
}

TEST(LbpWorld, ValueNeedsBothHalvesAndReader) {
  World w(LocationGraph::path(4));
  w.place_party(Party::Alice, 0);
  w.place_party(Party::Bob, 3);
  const auto s = w.mint_serials(1, 0);
  create_pair(w, Party::Alice, s[0], 1);
  EXPECT_EQ(value_op(w, Party::Alice, s[0]), 2);
  EXPECT_EQ(serial_op(w, Party::Alice, s[0]), static_cast<std::int64_t>(s[0]));
  w.move_object(Party::Alice, {s[0], 1}, 1);
  EXPECT_EQ(value_op(w, Party::Alice, s[0]), 0);
  flip_op(w, Party::Alice, s[0]);
  EXPECT_EQ(pair_state(w, s[0]).b, 0);
  w.move_object(Party::Alice, {s[0], 1}, 0);
  EXPECT_EQ(value_op(w, Party::Alice, s[0]), 1);
}
