#include <gtest/gtest.h>

#include "lockbox/search.hpp"

using namespace lockbox;
using namespace lockbox::search;

namespace {

Scenario kd_lbp2() {
  Scenario sc;
  sc.theory = Theory::Lbp;
  sc.protocol = KdLbp{2, 1};
  sc.privacy_amplification = false;
  return sc;
}

}  // namespace

TEST(Branching, ExactProbabilities) {
  EXPECT_EQ(exact_probability([](RandomSource& r) { return r.choose(3) == 0; }), Rational(1, 3));
  EXPECT_EQ(exact_probability([](RandomSource& r) { return r.bit() && r.bit(); }), Rational(1, 4));
  // adaptive branching: second draw only on one side
  EXPECT_EQ(exact_probability([](RandomSource& r) { return r.bit() ? r.choose(5) < 2 : true; }), Rational(7, 10));
}

TEST(Branching, SubsetIsUniform) {
  const auto p = exact_probability([](RandomSource& r) {
    const auto s = sample_subset(r, 5, 2);
    return s == std::vector<std::size_t>{1, 3};
  });
  EXPECT_EQ(p, Rational(1, 10));
}

TEST(Search, StrategyCountMatchesHandCount) {
  // d0 in {pass, flip, value, delay}: 4 * 31; d0 = substitute: 61; teleport: 1
  const ProtocolGame g(kd_lbp2(), Objective::KeyUndetected);
  EXPECT_EQ(count_strategies(g, 3), 186u);
}

TEST(Search, HorizonZeroIsPassive) {
  const ProtocolGame g(kd_lbp2(), Objective::KeyUndetected);
  EXPECT_EQ(count_strategies(g, 0), 1u);
  EXPECT_EQ(best_attack(g, 0).probability, 0);
}

TEST(Search, BudgetExceededNamesBound) {
  const ProtocolGame g(kd_lbp2(), Objective::KeyUndetected);
  try {
    count_strategies(g, 4, 100);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), Errc::BudgetExceeded);
    EXPECT_NE(std::string(e.what()).find(strategy_bound(g, 4).str()), std::string::npos);
  }
}

TEST(Search, BoundDominatesCount) {
  const ProtocolGame g(kd_lbp2(), Objective::KeyUndetected);
  for (std::size_t h = 0; h <= 3; ++h) EXPECT_GE(strategy_bound(g, h), BigInt(count_strategies(g, h)));
}

TEST(Search, MonotoneInHorizon) {
  Scenario sc;
  sc.theory = Theory::Lbp;
  sc.protocol = KsLbpPlain{2};
  sc.privacy_amplification = false;
  const ProtocolGame g(sc, Objective::UndetectedRead);
  Rational prev = 0;
  for (std::size_t h = 0; h <= 2; ++h) {
    const auto p = best_attack(g, h).probability;
    EXPECT_GE(p, prev);
    prev = p;
  }
  EXPECT_EQ(prev, 1);
}

TEST(Search, KdLbpFullKeyZero) {
  const ProtocolGame g(kd_lbp2(), Objective::KeyUndetected);
  EXPECT_EQ(best_attack(g, 4).probability, 0);
}

TEST(Search, LbpCommitGame) {
  const LbpCommitGame g(1);
  EXPECT_EQ(best_attack(g, 1).probability, 1);
}

TEST(Search, WitnessJsonShape) {
  const LbpCommitGame g(1);
  const auto a = best_attack(g, 1);
  const auto j = witness_json(a, "detection");
  EXPECT_EQ(j["probability"]["num"], "1");
  EXPECT_EQ(j["probability"]["den"], "1");
  EXPECT_TRUE(j.contains("strategy"));
  EXPECT_TRUE(j.contains("bounds"));
}

TEST(Search, ThreeSigma) {
  EXPECT_TRUE(within_three_sigma(Rational(1, 2), Estimate{5050, 10000}));
  EXPECT_FALSE(within_three_sigma(Rational(1, 2), Estimate{5300, 10000}));
  EXPECT_TRUE(within_three_sigma(0, Estimate{0, 10000}));
  EXPECT_FALSE(within_three_sigma(0, Estimate{1, 10000}));
}
