#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lockbox/lockbox.hpp"
#include "lockbox/random.hpp"
#include "lockbox/rcp.hpp"
#include "lockbox/transcript.hpp"
#include "lockbox/world.hpp"

namespace lockbox {

/// One entry of an adversary's action menu. `guess` is the combination
/// tried (TryOpen) or announced (cheating committer).
struct EveAction {
  enum class Kind : std::uint8_t { Pass, TryOpen, Flip, Value, Substitute, Delay, OpenRcp, Teleport, RevealAnti };
  Kind kind = Kind::Pass;
  std::uint32_t guess = 0;

  friend bool operator==(const EveAction&, const EveAction&) = default;
};

std::string to_string(const EveAction& a);
EveAction parse_action(std::string_view text);

/// Everything an adversary may condition on at a decision point.
struct EveView {
  const std::vector<std::string>& history;
  std::span<const EveAction> menu;
  std::size_t decision_index;
  RandomSource& rng;
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual EveAction decide(const EveView& view) = 0;
};

class PassiveAdversary final : public Adversary {
 public:
  EveAction decide(const EveView&) override { return {}; }
};

/// Thrown when a party breaks a physical rule; the run ends with an
/// Abort naming the offender.
class RuleViolation : public std::runtime_error {
 public:
  RuleViolation(Party offender, const std::string& what)
      : std::runtime_error(what), offender_(offender) {}
  Party offender() const noexcept { return offender_; }

 private:
  Party offender_;
};

enum class AbortReason : std::uint8_t {
  TestFailed,
  SerialMismatch,
  OpenRejected,
  AllMarkedConsumed,
  TamperDetected,
  RuleViolation,
};

std::string_view to_string(AbortReason r);

struct KeyAgreed {
  BitString alice_key;
  BitString bob_key;
  std::size_t leak_bound = 0;
};

struct Abort {
  AbortReason reason = AbortReason::TestFailed;
  std::optional<Party> offender;
  std::string detail;
};

struct CommitmentOpened {
  std::optional<Bit> bit;
  bool accepted = false;
};

struct StorageVerified {
  BitString key;
  BitString partner_key;  // empty for single-lab protocols
  std::size_t leak_bound = 0;
};

struct Inconclusive {};

using Verdict = std::variant<KeyAgreed, Abort, CommitmentOpened, StorageVerified, Inconclusive>;

struct ProtocolOutcome {
  Verdict verdict = Inconclusive{};
  /// Pre-hash key material, and what Eve knows of Alice's with certainty.
  BitString sifted_alice;
  BitString sifted_bob;
  std::vector<std::optional<Bit>> eve_sifted;
  /// Eve's reconstruction of the final key, when she knows all of it.
  std::optional<BitString> eve_key;
  std::map<std::string, std::int64_t> stats;

  bool aborted() const { return std::holds_alternative<Abort>(verdict); }
  bool rule_violation() const;
  /// Aborted for a reason other than a rule violation, or finished with
  /// the `tamper_evidence` counter set.
  bool detected() const;
  bool accepted() const;
  std::size_t key_length() const;
  bool keys_equal() const;
  bool eve_knows_sifted() const;
  std::string verdict_name() const;
};

ordered_json to_json(const ProtocolOutcome& o);

/// Where the parties live. Eve's post must be an interior node of the
/// shortest path between the two labs.
struct Layout {
  LocationGraph graph = LocationGraph::path(4);
  Location alice_lab = 0;
  Location eve_post = 1;
  Location bob_lab = 3;
};

void validate_layout(const Layout& layout);

/// Runs one protocol instance: owns the world, the transcript and Eve's
/// bookkeeping, and routes every physical transfer between the labs
/// through Eve's custody.
class Engine {
 public:
  Engine(Layout layout, LockboxConfig lockbox, RcpConfig rcp, RandomSource& rng, Adversary& eve,
         bool record_transcript = true);

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  World& world() { return world_; }
  const World& world() const { return world_; }
  RandomSource& rng() { return rng_; }
  const Layout& layout() const { return layout_; }
  const LockboxConfig& lockbox_config() const { return lockbox_; }
  const RcpConfig& rcp_config() const { return rcp_; }
  const Transcript& transcript() const { return transcript_; }
  Transcript take_transcript() { return std::move(transcript_); }

  /// Mints every serial the scenario will ever use and places the parties.
  std::vector<Serial> init(std::size_t serial_count, std::uint64_t mint_seed);

  /// Authenticated classical message; Eve receives a copy.
  void send(Party from, Party to, ordered_json payload);

  /// Moves objects from one party's lab to the other's through Eve's
  /// post. Eve takes custody there and gets one decision per object.
  /// Returns what the receiver actually got, in order.
  std::vector<ObjectRef> ship(Party from, Party to, std::span<const ObjectRef> objects,
                              std::span<const EveAction> menu);

  /// Walks objects over without passing through Eve (two-party protocols).
  void hand_over(Party from, Party to, std::span<const ObjectRef> objects);

  /// Eve is let into `owner`'s lab: she takes custody of everything there
  /// and gets one decision per serial, then hands custody back.
  void intrusion(Party owner, std::span<const EveAction> menu);

  /// Cheating-party decision used by two-party protocols.
  EveAction cheater_decide(std::vector<std::string> history, std::span<const EveAction> menu);

  void record_op(Party actor, std::string op, ordered_json payload, bool eve_visible = false);
  void finish(const ProtocolOutcome& outcome);

  /// Stock of objects Eve prepared at scenario start, for substitution.
  void add_eve_stock(ObjectRef ref, std::optional<Bit> known_bit);
  /// Bits Eve learned with certainty, keyed by serial.
  const std::map<Serial, Bit>& eve_knowledge() const { return eve_knowledge_; }
  const std::vector<std::string>& eve_history() const { return eve_history_; }
  std::size_t eve_decisions() const { return eve_decisions_; }

  Location lab_of(Party p) const;
  Party last_actor() const { return last_actor_; }

 private:
  void on_world_event(const WorldEvent& e);
  std::size_t canonical(Serial s);
  EveAction decide(std::span<const EveAction> menu);
  void apply_transit(ObjectRef& target, const EveAction& action, Party receiver);
  void apply_intrusion(Serial target, const EveAction& action, std::vector<Serial>& lab);
  std::optional<ObjectRef> take_stock(Serial original, std::uint8_t part, std::string_view kind);

  Layout layout_;
  LockboxConfig lockbox_;
  RcpConfig rcp_;
  RandomSource& rng_;
  Adversary& eve_;
  bool record_;
  World world_;
  Transcript transcript_;
  Party last_actor_ = Party::Alice;

  std::vector<std::string> eve_history_;
  std::map<Serial, std::size_t> canonical_;
  std::size_t eve_decisions_ = 0;
  std::vector<Serial> eve_stock_;
  std::map<Serial, Serial> stock_for_;  // original serial -> Eve's stand-in
  std::map<Serial, Bit> eve_knowledge_;
};

}  // namespace lockbox
