#include "lockbox/trials.hpp"

#include <omp.h>

#include <vector>

namespace lockbox {

void TrialSummary::add(const ProtocolOutcome& o) {
  ++trials;
  accepted += o.accepted();
  aborted += o.aborted();
  detected += o.detected();
  rule_violations += o.rule_violation();
  if (o.accepted()) {
    keys_equal += o.keys_equal();
    key_bits += o.key_length();
  }
  eve_knows_key += o.accepted() && o.key_length() > 0 && o.eve_key.has_value();
  ++verdicts[o.verdict_name()];
}

void TrialSummary::add(const ordered_json& o) {
  const bool acc = o.at("accepted").get<bool>();
  const std::size_t len = o.at("key_length").get<std::size_t>();
  ++trials;
  accepted += acc;
  aborted += o.contains("reason");
  detected += o.at("detected").get<bool>();
  rule_violations += o.value("reason", "") == "RuleViolation";
  if (acc) {
    keys_equal += o.at("keys_equal").get<bool>();
    key_bits += len;
  }
  eve_knows_key += acc && len > 0 && o.at("eve_knows_key").get<bool>();
  ++verdicts[o.at("verdict").get<std::string>()];
}

TrialSummary summarize(const std::vector<Transcript>& transcripts) {
  TrialSummary s;
  for (const auto& t : transcripts) {
    const auto* e = t.outcome();
    if (!e) throw SimError(Errc::InvalidArgument, "transcript has no outcome event");
    s.add(e->payload);
  }
  return s;
}

void TrialSummary::merge(const TrialSummary& other) {
  trials += other.trials;
  accepted += other.accepted;
  aborted += other.aborted;
  detected += other.detected;
  rule_violations += other.rule_violations;
  keys_equal += other.keys_equal;
  eve_knows_key += other.eve_knows_key;
  key_bits += other.key_bits;
  for (const auto& [k, v] : other.verdicts) verdicts[k] += v;
}

ordered_json to_json(const TrialSummary& s) {
  ordered_json j;
  j["trials"] = s.trials;
  j["acceptance_rate"] = s.acceptance_rate();
  j["abort_rate"] = s.rate(s.aborted);
  j["detection_rate"] = s.detection_rate();
  const auto [lo, hi] = wilson_interval(s.detected, s.trials);
  j["detection_wilson95"] = {lo, hi};
  j["rule_violations"] = s.rule_violations;
  j["key_agreement_rate"] = s.accepted ? static_cast<double>(s.keys_equal) / static_cast<double>(s.accepted) : 0.0;
  j["mean_key_length"] = s.mean_key_length();
  j["eve_knows_key"] = s.eve_knows_key;
  ordered_json v = ordered_json::object();
  for (const auto& [k, n] : s.verdicts) v[k] = n;
  j["verdicts"] = v;
  return j;
}

namespace {

TrialSummary one_trial(const Scenario& sc, const EveFactory& eve, std::uint64_t seed, std::size_t i,
                       const TrialSink& sink) {
  auto adversary = eve();
  const auto r = run(sc, *adversary, derive_seed(seed, i), static_cast<bool>(sink));
  if (sink) sink(i, r);
  TrialSummary s;
  s.add(r.outcome);
  return s;
}

}  // namespace

TrialSummary run_trials_serial(const Scenario& sc, const EveFactory& eve, std::uint64_t seed, std::size_t trials,
                               const TrialSink& sink) {
  validate(sc);
  TrialSummary total;
  for (std::size_t i = 0; i < trials; ++i) total.merge(one_trial(sc, eve, seed, i, sink));
  return total;
}

TrialSummary run_trials_parallel(const Scenario& sc, const EveFactory& eve, std::uint64_t seed, std::size_t trials,
                                 const TrialSink& sink) {
  validate(sc);
  std::vector<TrialSummary> partial(static_cast<std::size_t>(omp_get_max_threads()));
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel
  {
    TrialSummary& mine = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) mine.merge(one_trial(sc, eve, seed, static_cast<std::size_t>(i), sink));
  }
  TrialSummary total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace lockbox
