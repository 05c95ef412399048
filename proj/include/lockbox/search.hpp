#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lockbox/engine.hpp"
#include "lockbox/protocols.hpp"
#include "lockbox/stats.hpp"

namespace lockbox::search {

/// Drives a run down one randomness branch at a time. Choices beyond the
/// replayed prefix start at 0; advance() moves to the next branch in
/// odometer order.
class BranchingRandom final : public RandomSource {
 public:
  std::uint64_t choose(std::uint64_t n) override;
  void rewind() { pos_ = 0; }
  /// False when every branch has been visited.
  bool advance();
  /// Probability of the branch just played.
  Rational probability() const;
  std::size_t depth() const { return path_.size(); }

 private:
  std::vector<std::pair<std::uint64_t, std::uint64_t>> path_;  // (choice, arity)
  std::size_t pos_ = 0;
};

/// Exact probability that `play` returns true, summed over every branch.
Rational exact_probability(const std::function<bool(RandomSource&)>& play);

class Game {
 public:
  virtual ~Game() = default;
  virtual std::string name() const = 0;
  /// Largest menu offered at any decision.
  virtual std::vector<EveAction> menu() const = 0;
  /// Upper bound on the distinct observations an action can produce.
  virtual std::size_t observation_arity(const EveAction& a) const;
  virtual bool play(RandomSource& rng, Adversary& adversary) const = 0;
};

/// A deterministic reduced strategy: one action per information set the
/// strategy reaches, in discovery order.
struct Strategy {
  struct Choice {
    std::string infoset;
    std::size_t index = 0;
    std::vector<EveAction> menu;
  };
  std::vector<Choice> choices;

  const Choice* find(const std::string& key) const;
};

/// Plays a Strategy. Decisions at or past the horizon take Pass (or the
/// first menu entry when Pass is not offered). Unknown information sets
/// get index 0 and are appended when discovery is on.
class TableAdversary final : public Adversary {
 public:
  TableAdversary(Strategy& strategy, std::size_t horizon, bool discover);
  EveAction decide(const EveView& view) override;

 private:
  Strategy& strategy_;
  std::size_t horizon_;
  bool discover_;
};

inline constexpr std::size_t kDefaultCap = 10'000'000;

/// Σ_a U(h-1)^arity(a) with U(0) = 1: an upper bound on reduced strategies.
BigInt strategy_bound(const Game& game, std::size_t horizon);

/// Visits every reduced strategy with its exact success probability.
/// Throws BudgetExceeded once more than `cap` strategies have been seen.
std::size_t for_each_strategy(const Game& game, std::size_t horizon, std::size_t cap,
                              const std::function<void(const Strategy&, const Rational&)>& visit);

std::size_t count_strategies(const Game& game, std::size_t horizon, std::size_t cap = kDefaultCap);

struct Attack {
  std::string game;
  std::size_t horizon = 0;
  std::size_t cap = 0;
  std::size_t strategies = 0;
  Strategy best;
  Rational probability;
};

Attack best_attack(const Game& game, std::size_t horizon, std::size_t cap = kDefaultCap);

struct Estimate {
  std::size_t successes = 0;
  std::size_t samples = 0;
  double mean() const { return samples ? static_cast<double>(successes) / static_cast<double>(samples) : 0.0; }
};

/// Replays a fixed strategy with seeded randomness.
Estimate monte_carlo(const Game& game, const Strategy& strategy, std::size_t horizon, std::size_t samples,
                     std::uint64_t seed);

/// |p̂ - p| <= 3σ with σ = sqrt(p(1-p)/n); degenerate p needs p̂ == p.
bool within_three_sigma(const Rational& p, const Estimate& e);

ordered_json witness_json(const Attack& a, std::string_view objective);

enum class Objective : std::uint8_t { KeyUndetected, Equivocation, Concealment, UndetectedRead, Detection };

std::string_view to_string(Objective o);
Objective objective_from_string(std::string_view s);

bool objective_met(Objective o, const ProtocolOutcome& out);

/// A protocol run scored by an objective; the adversary plays Eve, or the
/// cheating party when the scenario marks one as Adversarial.
class ProtocolGame final : public Game {
 public:
  ProtocolGame(Scenario sc, Objective objective) : sc_(std::move(sc)), objective_(objective) {}
  std::string name() const override;
  std::vector<EveAction> menu() const override;
  std::size_t observation_arity(const EveAction& a) const override;
  bool play(RandomSource& rng, Adversary& adversary) const override;
  const Scenario& scenario() const { return sc_; }

 private:
  Scenario sc_;
  Objective objective_;
};

/// Lockbox-pair commitment over a uniformly chosen possession split of n
/// pairs. The cheater sees the split and picks Value (Bob reads) or Flip
/// (Alice flips); success means the commitment is broken.
class LbpCommitGame final : public Game {
 public:
  explicit LbpCommitGame(std::size_t n) : n_(n) {}
  std::string name() const override { return "bc_lbp_nogo"; }
  std::vector<EveAction> menu() const override;
  bool play(RandomSource& rng, Adversary& adversary) const override;

 private:
  std::size_t n_;
};

struct CannedSearch {
  std::string name;
  std::string objective;
  std::shared_ptr<const Game> game;
  std::size_t horizon = 0;
  /// Exact value the claim predicts, or an upper bound when `is_bound`.
  Rational expected;
  bool is_bound = false;
};

std::vector<CannedSearch> canned_searches();

}  // namespace lockbox::search
