#include <gtest/gtest.h>

#include "lockbox/privacy.hpp"

using namespace lockbox;
using namespace lockbox::pa;

TEST(Privacy, OutputLength) {
  EXPECT_EQ(output_length(10, 3, 2), 5u);
  EXPECT_EQ(output_length(4, 3, 2), 0u);
}

TEST(Privacy, IdentityIsIdentity) {
  const BitString x{1, 0, 1, 1, 0};
  EXPECT_EQ(pa::apply(x, identity(5)), x);
}

TEST(Privacy, ParityRow) {
  HashSpec parity{4, 1, {1, 1, 1, 1}};
  EXPECT_EQ(pa::apply({1, 0, 1, 1}, parity), (BitString{1}));
  EXPECT_EQ(pa::apply({1, 0, 0, 1}, parity), (BitString{0}));
}

TEST(Privacy, Linearity) {
  SeededRandom rng(9);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng.choose(24);
    const std::size_t l = rng.choose(n + 1);
    const auto h = random_hash(rng, l, n);
    BitString x(n), y(n), z(n);
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = rng.bit();
      y[j] = rng.bit();
      z[j] = x[j] ^ y[j];
    }
    const auto hx = pa::apply(x, h), hy = pa::apply(y, h), hz = pa::apply(z, h);
    for (std::size_t j = 0; j < l; ++j) ASSERT_EQ(hz[j], hx[j] ^ hy[j]);
  }
}

TEST(Privacy, Dimensions) {
  SeededRandom rng(1);
  try {
    random_hash(rng, 5, 4);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), Errc::DimensionError);
  }
  EXPECT_THROW(pa::apply({1, 0}, identity(3)), SimError);
  HashSpec bad{3, 1, {1, 0}};
  EXPECT_THROW(validate(bad), SimError);
}

TEST(Privacy, HexRoundTrip) {
  SeededRandom rng(4);
  for (std::size_t n : {1u, 4u, 7u, 13u}) {
    const auto h = random_hash(rng, n / 2 + 1 > n ? n : n / 2 + 1, n);
    EXPECT_EQ(from_hex_rows(to_hex_rows(h), n), h);
  }
  HashSpec one{5, 1, {1, 0, 0, 0, 1}};
  EXPECT_EQ(to_hex_rows(one), (std::vector<std::string>{"88"}));
}

TEST(Privacy, UniformityExhaustive) {
  const auto r = uniformity_check(4, 2, 2);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.matrices, 256u);
  EXPECT_LE(to_double(r.worst_average_distance), r.bound);
  // 2^-(n - t - l) / 2 style bound is 1 here; the average distance itself is small
  EXPECT_LT(r.worst_average_distance, Rational(1, 2));
}
