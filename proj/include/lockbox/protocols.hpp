#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "lockbox/engine.hpp"
#include "lockbox/stats.hpp"

namespace lockbox {

enum class Theory : std::uint8_t { Combination, Dual, Lbp, LbpReadOnce, Rcp, Trivial };

std::string_view to_string(Theory t);
Theory theory_from_string(std::string_view s);

/// How an honest-or-not protocol party behaves where the protocol gives it
/// a choice. `Adversarial` hands the choice to the Adversary passed to run().
enum class Behavior : std::uint8_t {
  Honest,
  OpenAs0,
  OpenAs1,
  ClaimFlip,
  Fabricate,
  FabricateOne,
  BruteForce,
  Adversarial,
};

std::string_view to_string(Behavior b);
Behavior behavior_from_string(std::string_view s);

struct KdCombination {
  std::size_t N = 8;
  std::size_t m = 3;
};

struct KdLbp {
  std::size_t N = 8;
  std::size_t m = 3;
};

struct BcSingle {
  Bit bit = 0;
};

struct BcDual {
  Bit bit = 0;
};

struct BcHarrow {
  std::size_t k = 3;
  Bit v = 0;
};

struct KsLbpPlain {
  std::size_t n = 5;
};

struct KsReadOnce {
  std::size_t n = 20;
  std::size_t w = 5;
  std::size_t sigma = 0;
};

struct KsSerialList {
  std::size_t n = 5;
};

struct KsRcp {
  std::size_t n = 5;
  double max_discard_fraction = 0.25;
};

using ProtocolParams =
    std::variant<KdCombination, KdLbp, BcSingle, BcDual, BcHarrow, KsLbpPlain, KsReadOnce, KsSerialList, KsRcp>;

std::string protocol_name(const ProtocolParams& p);
/// Theories a protocol can run on.
std::vector<Theory> supported_theories(const ProtocolParams& p);

struct Scenario {
  Layout layout;
  Theory theory = Theory::Combination;
  LockboxConfig lockbox;
  RcpConfig rcp;
  ProtocolParams protocol = KdCombination{};
  Behavior alice = Behavior::Honest;
  Behavior bob = Behavior::Honest;
  bool privacy_amplification = true;
  std::size_t pa_sigma = 0;
  LeakMethod leak = LeakMethod::PlugIn;
  double confidence = 0.95;
  /// Stand-in objects Eve prepares at her post (0 = one per protocol object).
  std::size_t eve_stock = 0;
  std::uint64_t mint_seed = 0;
};

/// Throws InvalidArgument for impossible parameter combinations.
void validate(const Scenario& sc);

struct RunResult {
  Transcript transcript;
  ProtocolOutcome outcome;
};

/// Runs one instance. All randomness (Alice's bits, combinations, test
/// choices, hashes, destroyed-box coins) is drawn from `rng`.
RunResult run(const Scenario& sc, Adversary& eve, RandomSource& rng, bool record_transcript = true);
RunResult run(const Scenario& sc, Adversary& eve, std::uint64_t seed, bool record_transcript = true);

/// Eve's action menu at each object decision for the scenario.
std::vector<EveAction> eve_menu(const Scenario& sc);

// Scripted adversaries for Monte Carlo runs.

/// Applies `action` to a uniformly random k-subset of `total` items; an
/// item is `stride` consecutive decisions and only its first is acted on.
/// TryOpen guesses are drawn uniformly from the combination space.
class SubsetEve final : public Adversary {
 public:
  SubsetEve(EveAction action, std::size_t k, std::size_t total, std::size_t stride = 1, unsigned combo_length = 0);
  EveAction decide(const EveView& view) override;

 private:
  EveAction action_;
  std::size_t remaining_;
  std::size_t items_left_;
  std::size_t stride_;
  unsigned combo_length_;
};

/// Uses `action` on every decision.
class ConstantEve final : public Adversary {
 public:
  explicit ConstantEve(EveAction action) : action_(action) {}
  EveAction decide(const EveView&) override { return action_; }

 private:
  EveAction action_;
};

// Two-party analyses that do not go through the transit channel.

enum class SplitVerdict : std::uint8_t { ConcealmentBroken, BindingBroken, Intact };

std::string_view to_string(SplitVerdict v);

struct SplitResult {
  std::vector<Party> holders;  // holder of half (2i) and (2i+1) of pair i
  SplitVerdict verdict = SplitVerdict::Intact;
  std::string witness;
};

/// Commit-phase possession `holders` for n = holders.size()/2 pairs holding
/// bit `b`. Bob tries to read; otherwise Alice flips every pair she touches
/// and opens, and Bob must accept the flipped bit.
SplitResult bc_lbp_split(const std::vector<Party>& holders, Bit b, std::uint64_t seed);
/// Bob tries value_op on every pair he fully holds; true when a read
/// gives the committed bit.
bool lbp_bob_reads(const std::vector<Party>& holders, Bit b, std::uint64_t seed, std::string* witness = nullptr);
/// Alice flips every pair at a half she holds, then hands her halves over;
/// true when Bob's serial checks pass and every pair opens to 1 - b.
bool lbp_alice_flips(const std::vector<Party>& holders, Bit b, std::uint64_t seed, std::string* witness = nullptr);
/// All 2^(2n) splits.
std::vector<SplitResult> bc_lbp_nogo(std::size_t n, std::uint64_t seed);

struct TrivialProtocol {
  /// Per round: Alice sends a classical bit g(r, p0, p1) (kind 0..4 =
  /// 0, 1, r, not r, parity of box 0's serial) or ships box 0/1 (kind 5, 6).
  std::vector<int> moves;
  /// Bob's key: truth table over his view (one bit per round).
  std::uint32_t bob_table = 0;
  /// Alice's key: truth table over (r, p0, p1).
  std::uint32_t alice_table = 0;
  std::string describe() const;
};

struct TrivialVerdict {
  bool impossible = false;
  std::size_t protocols_enumerated = 0;
  std::size_t correct_protocols = 0;
  std::size_t eve_successes = 0;
  /// Eve's rule, shared by every correct protocol: apply Bob's key table
  /// to the Eve-visible transcript.
  std::string witness;
  std::vector<TrivialProtocol> counterexamples;
};

/// Enumerates every protocol with `rounds` non-adaptive Alice moves over
/// two trivial boxes, keeps those where Alice and Bob always agree on a
/// one-bit key, and replays each through the engine with a passive Eve.
TrivialVerdict kd_trivial_impossible(std::size_t rounds);

}  // namespace lockbox
