#include <gtest/gtest.h>

#include "lockbox/protocols.hpp"
#include "lockbox/search.hpp"

using namespace lockbox;
using K = EveAction::Kind;

namespace {

Scenario make(Theory t, ProtocolParams p) {
  Scenario sc;
  sc.theory = t;
  sc.protocol = p;
  return sc;
}

}  // namespace

TEST(Protocols, NamesRoundTrip) {
  for (Theory t : {Theory::Combination, Theory::Dual, Theory::Lbp, Theory::LbpReadOnce, Theory::Rcp, Theory::Trivial}) {
    EXPECT_EQ(theory_from_string(to_string(t)), t);
  }
  for (Behavior b : {Behavior::Honest, Behavior::OpenAs0, Behavior::OpenAs1, Behavior::ClaimFlip, Behavior::Fabricate,
                     Behavior::FabricateOne, Behavior::BruteForce, Behavior::Adversarial}) {
    EXPECT_EQ(behavior_from_string(to_string(b)), b);
  }
}

TEST(Protocols, ValidateRejectsWrongTheory) {
  EXPECT_THROW(validate(make(Theory::Rcp, KdLbp{})), SimError);
  EXPECT_THROW(validate(make(Theory::Lbp, KdLbp{4, 5})), SimError);
  EXPECT_NO_THROW(validate(make(Theory::Lbp, KdLbp{4, 2})));
}

TEST(Protocols, PassiveKdAgrees) {
  PassiveAdversary eve;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = run(make(Theory::Combination, KdCombination{8, 3}), eve, seed, false).outcome;
    EXPECT_TRUE(a.accepted());
    EXPECT_TRUE(a.keys_equal());
    const auto b = run(make(Theory::Lbp, KdLbp{8, 3}), eve, seed, false).outcome;
    EXPECT_TRUE(b.accepted());
    EXPECT_TRUE(b.keys_equal());
    EXPECT_EQ(b.key_length(), 5u);
  }
}

TEST(Protocols, KdLbpSubstitutionCaught) {
  ConstantEve eve({K::Substitute, 0});
  const auto o = run(make(Theory::Lbp, KdLbp{4, 1}), eve, 1, false).outcome;
  const auto* a = std::get_if<Abort>(&o.verdict);
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->reason, AbortReason::SerialMismatch);
}

TEST(Protocols, KdLbpValueLearnsNothing) {
  ConstantEve eve({K::Value, 0});
  const auto o = run(make(Theory::Lbp, KdLbp{6, 2}), eve, 4, false).outcome;
  EXPECT_TRUE(o.accepted());
  EXPECT_FALSE(o.eve_key.has_value());
}

TEST(Protocols, KdCombinationOpenAllMostlyDetected) {
  auto sc = make(Theory::Combination, KdCombination{10, 5});
  sc.lockbox.destroyed_returns_marker = true;
  ConstantEve eve({K::TryOpen, 0});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_TRUE(run(sc, eve, seed, false).outcome.detected());
  }
}

TEST(Protocols, BcSingleHonestOpens) {
  PassiveAdversary none;
  for (Bit b : {Bit{0}, Bit{1}}) {
    const auto o = run(make(Theory::Combination, BcSingle{b}), none, 3, false).outcome;
    const auto* c = std::get_if<CommitmentOpened>(&o.verdict);
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->bit, b);
  }
}

TEST(Protocols, BcSingleCheatGivesCoin) {
  auto sc = make(Theory::Combination, BcSingle{0});
  sc.lockbox.combo_length = 3;
  sc.alice = Behavior::OpenAs1;
  PassiveAdversary none;
  const auto p = search::exact_probability([&](RandomSource& rng) {
    const auto o = run(sc, none, rng, false).outcome;
    return std::get<CommitmentOpened>(o.verdict).bit == Bit{1};
  });
  EXPECT_EQ(p, Rational(1, 2));
}

TEST(Protocols, BcDualEquivocates) {
  PassiveAdversary none;
  for (Bit b : {Bit{0}, Bit{1}}) {
    for (auto beh : {Behavior::OpenAs0, Behavior::OpenAs1}) {
      auto sc = make(Theory::Dual, BcDual{b});
      sc.alice = beh;
      const auto o = run(sc, none, 5, false).outcome;
      EXPECT_EQ(std::get<CommitmentOpened>(o.verdict).bit, Bit{beh == Behavior::OpenAs1});
    }
  }
}

TEST(Protocols, HarrowHonestAndFlip) {
  PassiveAdversary none;
  for (std::size_t k = 1; k <= 4; ++k) {
    for (Bit v : {Bit{0}, Bit{1}}) {
      auto sc = make(Theory::Dual, BcHarrow{k, v});
      sc.lockbox.combo_length = 1;
      EXPECT_EQ(search::exact_probability([&](RandomSource& r) { return run(sc, none, r, false).outcome.accepted(); }),
                1);
      sc.alice = Behavior::ClaimFlip;
      EXPECT_EQ(search::exact_probability([&](RandomSource& r) { return run(sc, none, r, false).outcome.aborted(); }),
                1);
    }
  }
}

TEST(Protocols, KsPlainReadUndetected) {
  ConstantEve eve({K::Value, 0});
  const auto o = run(make(Theory::Lbp, KsLbpPlain{5}), eve, 2, false).outcome;
  EXPECT_TRUE(o.accepted());
  EXPECT_FALSE(o.detected());
  EXPECT_TRUE(o.eve_knows_sifted());
}

TEST(Protocols, KsSerialListCatchesRead) {
  for (std::size_t victim = 0; victim < 4; ++victim) {
    SubsetEve eve({K::Value, 0}, 1, 4);
    auto sc = make(Theory::LbpReadOnce, KsSerialList{4});
    EXPECT_TRUE(run(sc, eve, victim, false).outcome.detected());
  }
}

TEST(Protocols, KsRcpReadNullsThePair) {
  ConstantEve eve({K::OpenRcp, 0});
  auto sc = make(Theory::Rcp, KsRcp{4, 1.0});
  const auto o = run(sc, eve, 3, false).outcome;
  EXPECT_EQ(o.stats.at("discarded"), 4);
  EXPECT_TRUE(o.detected());
}

TEST(Protocols, KsRcpPassive) {
  PassiveAdversary none;
  auto sc = make(Theory::Rcp, KsRcp{6, 0.25});
  sc.privacy_amplification = false;
  const auto o = run(sc, none, 1, false).outcome;
  EXPECT_TRUE(o.accepted());
  EXPECT_TRUE(o.keys_equal());
  EXPECT_EQ(o.key_length(), 6u);
}

TEST(Protocols, LbpCommitmentSplitsAllBroken) {
  for (std::size_t n = 1; n <= 2; ++n) {
    const auto splits = bc_lbp_nogo(n, 1);
    EXPECT_EQ(splits.size(), std::size_t{1} << (2 * n));
    for (const auto& s : splits) EXPECT_NE(s.verdict, SplitVerdict::Intact) << s.witness;
  }
}

TEST(Protocols, TrivialKdImpossible) {
  const auto v = kd_trivial_impossible(1);
  EXPECT_TRUE(v.impossible);
  EXPECT_GT(v.correct_protocols, 0u);
  EXPECT_EQ(v.eve_successes, v.correct_protocols);
  EXPECT_FALSE(v.witness.empty());
}

TEST(Protocols, ReadOnceDetectionExact) {
  // Eve reads 2 of 6, 2 marked: detected unless both marks miss her reads
  auto sc = make(Theory::LbpReadOnce, KsReadOnce{6, 2, 0});
  sc.privacy_amplification = false;
  const auto p = search::exact_probability([&](RandomSource& r) {
    SubsetEve eve({K::Value, 0}, 2, 6);
    return run(sc, eve, r, false).outcome.detected();
  });
  EXPECT_EQ(p, Rational(3, 5));
}
