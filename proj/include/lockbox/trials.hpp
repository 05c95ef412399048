#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lockbox/protocols.hpp"

namespace lockbox {

/// Associative per-trial tally; merging in any order gives the same result.
struct TrialSummary {
  std::size_t trials = 0;
  std::size_t accepted = 0;
  std::size_t aborted = 0;
  std::size_t detected = 0;
  std::size_t rule_violations = 0;
  std::size_t keys_equal = 0;
  std::size_t eve_knows_key = 0;
  std::size_t key_bits = 0;
  std::map<std::string, std::size_t> verdicts;

  void add(const ProtocolOutcome& o);
  /// Same tally from the payload of a transcript's outcome event.
  void add(const ordered_json& outcome);
  void merge(const TrialSummary& other);

  double rate(std::size_t count) const { return trials ? static_cast<double>(count) / static_cast<double>(trials) : 0; }
  double acceptance_rate() const { return rate(accepted); }
  double detection_rate() const { return rate(detected); }
  double mean_key_length() const { return rate(key_bits); }

  friend bool operator==(const TrialSummary&, const TrialSummary&) = default;
};

ordered_json to_json(const TrialSummary& s);

/// Rebuilds a summary from transcripts alone. A transcript without an
/// outcome event throws.
TrialSummary summarize(const std::vector<Transcript>& transcripts);

using EveFactory = std::function<std::unique_ptr<Adversary>()>;
/// Called once per trial with its index; must be safe to call from
/// several threads at once when used with the parallel runner.
using TrialSink = std::function<void(std::size_t index, const RunResult& result)>;

/// Trial i runs with seed derive_seed(seed, i), so both runners see
/// identical trials.
TrialSummary run_trials_serial(const Scenario& sc, const EveFactory& eve, std::uint64_t seed, std::size_t trials,
                               const TrialSink& sink = {});
TrialSummary run_trials_parallel(const Scenario& sc, const EveFactory& eve, std::uint64_t seed, std::size_t trials,
                                 const TrialSink& sink = {});

}  // namespace lockbox
