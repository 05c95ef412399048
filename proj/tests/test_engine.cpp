#include <gtest/gtest.h>

#include "lockbox/protocols.hpp"

using namespace lockbox;

namespace {

Scenario kd_lbp(std::size_t N, std::size_t m) {
  Scenario sc;
  sc.theory = Theory::Lbp;
  sc.protocol = KdLbp{N, m};
  return sc;
}

}  // namespace

TEST(Engine, ActionNamesRoundTrip) {
  using K = EveAction::Kind;
  for (K k : {K::Pass, K::Flip, K::Value, K::Substitute, K::Delay, K::OpenRcp, K::Teleport, K::RevealAnti}) {
    const EveAction a{k, 0};
    EXPECT_EQ(parse_action(to_string(a)), a);
  }
  EXPECT_EQ(parse_action("try_open:5"), (EveAction{K::TryOpen, 5}));
  EXPECT_THROW(parse_action("bogus"), SimError);
}

TEST(Engine, LayoutValidation) {
  Layout l;
  EXPECT_NO_THROW(validate_layout(l));
  l.eve_post = 0;
  EXPECT_THROW(validate_layout(l), SimError);
  Layout off;
  off.graph = LocationGraph::path(5);
  off.bob_lab = 2;
  off.eve_post = 3;
  EXPECT_THROW(validate_layout(off), SimError);
}

TEST(Engine, TeleportIsRuleViolationByEve) {
  ConstantEve eve({EveAction::Kind::Teleport, 0});
  const auto r = run(kd_lbp(4, 1), eve, 3);
  const auto* a = std::get_if<Abort>(&r.outcome.verdict);
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->reason, AbortReason::RuleViolation);
  EXPECT_EQ(a->offender, Party::Eve);
  EXPECT_FALSE(r.outcome.detected());
}

TEST(Engine, OffMenuActionIsRuleViolation) {
  ConstantEve eve({EveAction::Kind::OpenRcp, 0});
  const auto r = run(kd_lbp(4, 1), eve, 3);
  EXPECT_TRUE(r.outcome.rule_violation());
}

TEST(Engine, TranscriptTicksAreMonotone) {
  PassiveAdversary eve;
  const auto r = run(kd_lbp(4, 1), eve, 5);
  ASSERT_FALSE(r.transcript.empty());
  std::uint64_t last = 0;
  for (const auto& e : r.transcript.events()) {
    EXPECT_GE(e.tick, last);
    last = e.tick;
  }
  ASSERT_NE(r.transcript.outcome(), nullptr);
  EXPECT_EQ(r.transcript.events().back().kind, "outcome");
}

TEST(Engine, EveViewHidesLabInternals) {
  PassiveAdversary eve;
  const auto r = run(kd_lbp(4, 1), eve, 5);
  const auto view = r.transcript.eve_view();
  EXPECT_LT(view.size(), r.transcript.size());
  for (const auto& e : view) {
    EXPECT_TRUE(e.eve_visible);
    EXPECT_NE(e.kind, "outcome");
  }
  bool saw_msg = false;
  for (const auto& e : view) saw_msg |= e.kind == "msg";
  EXPECT_TRUE(saw_msg);
}

TEST(Engine, JsonlRoundTrip) {
  PassiveAdversary eve;
  const auto r = run(kd_lbp(3, 1), eve, 2);
  const auto text = r.transcript.to_jsonl();
  EXPECT_EQ(Transcript::from_jsonl(text).to_jsonl(), text);
}

TEST(Engine, EveHoldsEveryShippedHalf) {
  struct Recorder final : Adversary {
    std::size_t decisions = 0;
    std::vector<std::string> last;
    EveAction decide(const EveView& v) override {
      ++decisions;
      last = v.history;
      return {};
    }
  } eve;
  const auto r = run(kd_lbp(3, 1), eve, 2);
  EXPECT_EQ(eve.decisions, 6u);
  std::size_t holds = 0;
  for (const auto& h : eve.last) holds += h.starts_with("hold:");
  EXPECT_EQ(holds, 6u);
  EXPECT_TRUE(r.outcome.accepted());
}

TEST(Engine, OutcomeJsonFields) {
  PassiveAdversary eve;
  const auto r = run(kd_lbp(6, 2), eve, 2);
  const auto j = to_json(r.outcome);
  EXPECT_EQ(j["verdict"], "KeyAgreed");
  EXPECT_TRUE(j["keys_equal"].get<bool>());
  EXPECT_EQ(j["alice_key"], j["bob_key"]);
  EXPECT_FALSE(j["detected"].get<bool>());
}
