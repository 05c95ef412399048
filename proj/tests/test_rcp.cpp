#include <gtest/gtest.h>

#include "lockbox/rcp.hpp"
#include "lockbox/search.hpp"

using namespace lockbox;

TEST(Rcp, MembersAgreeAndAreUniform) {
  const auto agree = search::exact_probability([](RandomSource& rng) {
    RcpPayload p;
    const auto a = open_member(p, 0, rng);
    const auto b = open_member(p, 1, rng);
    return a && b && *a == *b;
  });
  EXPECT_EQ(agree, 1);
  const auto one = search::exact_probability([](RandomSource& rng) {
    RcpPayload p;
    return open_member(p, 1, rng) == Bit{1};
  });
  EXPECT_EQ(one, Rational(1, 2));
}

TEST(Rcp, ReadOnce) {
  SeededRandom rng(3);
  RcpPayload p;
  EXPECT_TRUE(open_member(p, 0, rng).has_value());
  EXPECT_FALSE(open_member(p, 0, rng).has_value());
  EXPECT_TRUE(open_member(p, 1, rng).has_value());
}

TEST(Rcp, ConsumeBoth) {
  SeededRandom rng(3);
  RcpPayload p;
  RcpConfig cfg{true};
  EXPECT_TRUE(open_member(p, 0, rng, cfg).has_value());
  EXPECT_FALSE(open_member(p, 1, rng, cfg).has_value());
}

TEST(Rcp, OpensWhenSeparated) {
  World w(LocationGraph::path(4));
  w.place_party(Party::Alice, 0);
  w.place_party(Party::Bob, 3);
  const auto s = w.mint_serials(1, 0);
  create_rcp(w, Party::Alice, s[0]);
  w.travel(Party::Alice, std::vector<ObjectRef>{{s[0], 1}}, 3);
  w.transfer_custody(Party::Alice, {s[0], 1}, Party::Bob);
  w.travel(Party::Alice, std::vector<ObjectRef>{}, 0);
  SeededRandom rng(1);
  const auto b = open_rcp(w, Party::Bob, {s[0], 1}, rng);
  const auto a = open_rcp(w, Party::Alice, {s[0], 0}, rng);
  EXPECT_EQ(a, b);
  EXPECT_THROW(open_rcp(w, Party::Alice, {s[0], 1}, rng), SimError);
}
