#include <gtest/gtest.h>

#include <mutex>

#include "lockbox/trials.hpp"

using namespace lockbox;

namespace {

Scenario flip_scenario() {
  Scenario sc;
  sc.theory = Theory::Lbp;
  sc.protocol = KdLbp{10, 5};
  return sc;
}

EveFactory flip2() {
  return [] { return std::make_unique<SubsetEve>(EveAction{EveAction::Kind::Flip, 0}, 2, 10, 2); };
}

}  // namespace

TEST(Trials, SerialEqualsParallel) {
  const auto a = run_trials_serial(flip_scenario(), flip2(), 11, 500);
  const auto b = run_trials_parallel(flip_scenario(), flip2(), 11, 500);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.trials, 500u);
}

TEST(Trials, MergeIsAssociative) {
  const auto a = run_trials_serial(flip_scenario(), flip2(), 1, 50);
  const auto b = run_trials_serial(flip_scenario(), flip2(), 2, 50);
  const auto c = run_trials_serial(flip_scenario(), flip2(), 3, 50);
  TrialSummary left = a, bc = b, right = a;
  left.merge(b);
  left.merge(c);
  bc.merge(c);
  right.merge(bc);
  EXPECT_EQ(left, right);
}

TEST(Trials, SummaryFromTranscripts) {
  std::vector<Transcript> ts(200);
  std::mutex mu;
  const auto direct = run_trials_parallel(flip_scenario(), flip2(), 5, ts.size(), [&](std::size_t i, const RunResult& r) {
    std::lock_guard lock(mu);
    ts[i] = Transcript::from_jsonl(r.transcript.to_jsonl());
  });
  EXPECT_EQ(summarize(ts), direct);
}

TEST(Trials, SameSeedSameBytes) {
  std::vector<std::string> a(20), b(20);
  run_trials_parallel(flip_scenario(), flip2(), 8, 20, [&](std::size_t i, const RunResult& r) { a[i] = r.transcript.to_jsonl(); });
  run_trials_serial(flip_scenario(), flip2(), 8, 20, [&](std::size_t i, const RunResult& r) { b[i] = r.transcript.to_jsonl(); });
  EXPECT_EQ(a, b);
}

TEST(Trials, JsonHasDetectionInterval) {
  const auto s = run_trials_serial(flip_scenario(), flip2(), 1, 100);
  const auto j = to_json(s);
  ASSERT_TRUE(j.contains("detection_rate"));
  ASSERT_TRUE(j.contains("detection_wilson95"));
  EXPECT_LE(j["detection_wilson95"][0].get<double>(), s.detection_rate());
  EXPECT_GE(j["detection_wilson95"][1].get<double>(), s.detection_rate());
}
