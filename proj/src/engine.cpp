#include "lockbox/engine.hpp"

#include <algorithm>

#include "lockbox/lbp.hpp"

namespace lockbox {

std::string to_string(const EveAction& a) {
  switch (a.kind) {
    case EveAction::Kind::Pass: return "pass";
    case EveAction::Kind::TryOpen: return "try_open:" + std::to_string(a.guess);
    case EveAction::Kind::Flip: return "flip";
    case EveAction::Kind::Value: return "value";
    case EveAction::Kind::Substitute: return "substitute";
    case EveAction::Kind::Delay: return "delay";
    case EveAction::Kind::OpenRcp: return "open_rcp";
    case EveAction::Kind::Teleport: return "teleport";
    case EveAction::Kind::RevealAnti: return "reveal_anti";
  }
  return "?";
}

EveAction parse_action(std::string_view text) {
  using K = EveAction::Kind;
  if (text.starts_with("try_open:")) {
    return {K::TryOpen, static_cast<std::uint32_t>(std::stoul(std::string(text.substr(9))))};
  }
  static const std::pair<std::string_view, K> names[] = {
      {"try_open", K::TryOpen},  // guess 0; SubsetEve draws its own
      {"pass", K::Pass},         {"flip", K::Flip},   {"value", K::Value},       {"substitute", K::Substitute},
      {"delay", K::Delay},       {"open_rcp", K::OpenRcp}, {"teleport", K::Teleport}, {"reveal_anti", K::RevealAnti},
  };
  for (const auto& [name, kind] : names) {
    if (text == name) return {kind, 0};
  }
  throw SimError(Errc::InvalidArgument, "unknown action '" + std::string(text) + "'");
}

std::string_view to_string(AbortReason r) {
  switch (r) {
    case AbortReason::TestFailed: return "TestFailed";
    case AbortReason::SerialMismatch: return "SerialMismatch";
    case AbortReason::OpenRejected: return "OpenRejected";
    case AbortReason::AllMarkedConsumed: return "AllMarkedConsumed";
    case AbortReason::TamperDetected: return "TamperDetected";
    case AbortReason::RuleViolation: return "RuleViolation";
  }
  return "?";
}

bool ProtocolOutcome::rule_violation() const {
  const auto* a = std::get_if<Abort>(&verdict);
  return a && a->reason == AbortReason::RuleViolation;
}

bool ProtocolOutcome::detected() const {
  if (aborted()) return !rule_violation();
  const auto it = stats.find("tamper_evidence");
  return it != stats.end() && it->second > 0;
}

bool ProtocolOutcome::accepted() const {
  if (std::holds_alternative<KeyAgreed>(verdict) || std::holds_alternative<StorageVerified>(verdict)) return true;
  if (const auto* c = std::get_if<CommitmentOpened>(&verdict)) return c->accepted;
  return false;
}

std::size_t ProtocolOutcome::key_length() const {
  if (const auto* k = std::get_if<KeyAgreed>(&verdict)) return k->alice_key.size();
  if (const auto* s = std::get_if<StorageVerified>(&verdict)) return s->key.size();
  return 0;
}

bool ProtocolOutcome::keys_equal() const {
  if (const auto* k = std::get_if<KeyAgreed>(&verdict)) return k->alice_key == k->bob_key;
  if (const auto* s = std::get_if<StorageVerified>(&verdict)) {
    return s->partner_key.empty() || s->partner_key == s->key;
  }
  return false;
}

bool ProtocolOutcome::eve_knows_sifted() const {
  if (eve_sifted.size() != sifted_alice.size()) return false;
  for (std::size_t i = 0; i < eve_sifted.size(); ++i) {
    if (!eve_sifted[i] || *eve_sifted[i] != sifted_alice[i]) return false;
  }
  return true;
}

std::string ProtocolOutcome::verdict_name() const {
  struct V {
    std::string operator()(const KeyAgreed&) const { return "KeyAgreed"; }
    std::string operator()(const Abort&) const { return "Abort"; }
    std::string operator()(const CommitmentOpened&) const { return "CommitmentOpened"; }
    std::string operator()(const StorageVerified&) const { return "StorageVerified"; }
    std::string operator()(const Inconclusive&) const { return "Inconclusive"; }
  };
  return std::visit(V{}, verdict);
}

ordered_json to_json(const ProtocolOutcome& o) {
  ordered_json j;
  j["verdict"] = o.verdict_name();
  if (const auto* a = std::get_if<Abort>(&o.verdict)) {
    j["reason"] = to_string(a->reason);
    if (a->offender) j["offender"] = to_string(*a->offender);
    if (!a->detail.empty()) j["detail"] = a->detail;
  }
  j["accepted"] = o.accepted();
  j["detected"] = o.detected();
  j["key_length"] = o.key_length();
  j["keys_equal"] = o.keys_equal();
  if (const auto* k = std::get_if<KeyAgreed>(&o.verdict)) {
    j["alice_key"] = bits_to_string(k->alice_key);
    j["bob_key"] = bits_to_string(k->bob_key);
    j["leak_bound"] = k->leak_bound;
  }
  if (const auto* s = std::get_if<StorageVerified>(&o.verdict)) {
    j["key"] = bits_to_string(s->key);
    if (!s->partner_key.empty()) j["partner_key"] = bits_to_string(s->partner_key);
    j["leak_bound"] = s->leak_bound;
  }
  if (const auto* c = std::get_if<CommitmentOpened>(&o.verdict)) {
    if (c->bit) j["opened_bit"] = *c->bit;
  }
  j["eve_knows_key"] = o.eve_key.has_value();
  ordered_json stats = ordered_json::object();
  for (const auto& [k, v] : o.stats) stats[k] = v;
  j["stats"] = stats;
  return j;
}

void validate_layout(const Layout& layout) {
  const auto& g = layout.graph;
  for (Location x : {layout.alice_lab, layout.eve_post, layout.bob_lab}) {
    if (!g.contains(x)) throw SimError(Errc::InvalidArgument, "layout location " + std::to_string(x) + " is off-graph");
  }
  if (layout.alice_lab == layout.bob_lab) throw SimError(Errc::InvalidArgument, "Alice and Bob need separate labs");
  if (layout.eve_post == layout.alice_lab || layout.eve_post == layout.bob_lab) {
    throw SimError(Errc::InvalidArgument, "Eve's post must be a transit node, not a lab");
  }
  const auto path = g.shortest_path(layout.alice_lab, layout.bob_lab);
  if (path.empty()) throw SimError(Errc::InvalidArgument, "labs are not connected");
  if (std::find(path.begin() + 1, path.end() - 1, layout.eve_post) == path.end() - 1) {
    throw SimError(Errc::InvalidArgument, "Eve's post is not on the shortest path between the labs");
  }
}

Engine::Engine(Layout layout, LockboxConfig lockbox, RcpConfig rcp, RandomSource& rng, Adversary& eve,
               bool record_transcript)
    : layout_(std::move(layout)),
      lockbox_(lockbox),
      rcp_(rcp),
      rng_(rng),
      eve_(eve),
      record_(record_transcript),
      world_(layout_.graph) {
  validate_layout(layout_);
  if (record_) {
    world_.set_event_sink([this](const WorldEvent& e) { on_world_event(e); });
  }
}

Location Engine::lab_of(Party p) const {
  switch (p) {
    case Party::Alice: return layout_.alice_lab;
    case Party::Bob: return layout_.bob_lab;
    case Party::Eve: return layout_.eve_post;
  }
  return layout_.eve_post;
}

std::vector<Serial> Engine::init(std::size_t serial_count, std::uint64_t mint_seed) {
  auto serials = world_.mint_serials(serial_count, mint_seed);
  world_.place_party(Party::Alice, layout_.alice_lab);
  world_.place_party(Party::Bob, layout_.bob_lab);
  world_.place_party(Party::Eve, layout_.eve_post);
  if (record_) {
    transcript_.append(world_.clock(), "world", "init",
                       {{"serials", serial_count}, {"first_serial", serials.front()}}, true);
  }
  return serials;
}

void Engine::on_world_event(const WorldEvent& e) {
  auto is_lab = [this](Location x) { return x == layout_.alice_lab || x == layout_.bob_lab; };
  const bool eve_involved = e.actor == Party::Eve || (e.receiver && *e.receiver == Party::Eve);
  const bool visible = eve_involved || !is_lab(e.from) || !is_lab(e.to);
  ordered_json p;
  std::string kind;
  switch (e.kind) {
    case WorldEvent::Kind::PartyMove:
      kind = "walk";
      p["from"] = e.from;
      p["to"] = e.to;
      break;
    case WorldEvent::Kind::Move:
      kind = "move";
      p["serial"] = e.object->serial;
      p["part"] = e.object->part;
      p["from"] = e.from;
      p["to"] = e.to;
      break;
    case WorldEvent::Kind::Custody:
      kind = "custody";
      p["serial"] = e.object->serial;
      p["part"] = e.object->part;
      p["to"] = to_string(*e.receiver);
      p["at"] = e.from;
      break;
  }
  transcript_.append(e.tick, std::string(to_string(e.actor)), std::move(kind), std::move(p), visible);
}

std::size_t Engine::canonical(Serial s) {
  auto [it, inserted] = canonical_.try_emplace(s, canonical_.size());
  return it->second;
}

void Engine::send(Party from, Party to, ordered_json payload) {
  last_actor_ = from;
  world_.tick();
  ordered_json seen = payload;
  if (seen.contains("serials")) {
    for (auto& s : seen["serials"]) s = canonical(s.get<Serial>());
  }
  eve_history_.push_back("msg:" + std::string(to_string(from)) + ">" + std::string(to_string(to)) + ":" +
                         seen.dump());
  if (record_) {
    ordered_json p;
    p["to"] = to_string(to);
    p["body"] = std::move(payload);
    transcript_.append(world_.clock(), std::string(to_string(from)), "msg", std::move(p), true);
  }
}

EveAction Engine::decide(std::span<const EveAction> menu) {
  const EveView view{eve_history_, menu, eve_decisions_, rng_};
  EveAction a = eve_.decide(view);
  ++eve_decisions_;
  const bool offered = std::any_of(menu.begin(), menu.end(), [&](const EveAction& m) { return m.kind == a.kind; });
  if (!offered) throw RuleViolation(Party::Eve, "action " + to_string(a) + " is not available here");
  return a;
}

EveAction Engine::cheater_decide(std::vector<std::string> history, std::span<const EveAction> menu) {
  const EveView view{history, menu, eve_decisions_, rng_};
  EveAction a = eve_.decide(view);
  ++eve_decisions_;
  if (std::find(menu.begin(), menu.end(), a) == menu.end()) {
    throw SimError(Errc::InvalidArgument, "cheater chose an action outside the menu");
  }
  return a;
}

void Engine::add_eve_stock(ObjectRef ref, std::optional<Bit> known_bit) {
  if (std::find(eve_stock_.begin(), eve_stock_.end(), ref.serial) == eve_stock_.end()) {
    eve_stock_.push_back(ref.serial);
  }
  if (known_bit) eve_knowledge_[ref.serial] = *known_bit;
}

std::optional<ObjectRef> Engine::take_stock(Serial original, std::uint8_t part, std::string_view kind) {
  if (auto it = stock_for_.find(original); it != stock_for_.end()) return ObjectRef{it->second, part};
  for (Serial s : eve_stock_) {
    const bool used = std::any_of(stock_for_.begin(), stock_for_.end(), [&](const auto& kv) { return kv.second == s; });
    if (!used && payload_kind(world_.payload(s)) == kind) {
      stock_for_[original] = s;
      return ObjectRef{s, part};
    }
  }
  return std::nullopt;
}

void Engine::record_op(Party actor, std::string op, ordered_json payload, bool eve_visible) {
  last_actor_ = actor;
  if (!record_) return;
  ordered_json p;
  p["op"] = std::move(op);
  for (auto& [k, v] : payload.items()) p[k] = v;
  transcript_.append(world_.clock(), std::string(to_string(actor)), "op", std::move(p), eve_visible);
}

void Engine::finish(const ProtocolOutcome& outcome) {
  if (record_) transcript_.append(world_.clock(), "harness", "outcome", to_json(outcome), false);
}

namespace {

std::string outcome_token(const std::optional<Bit>& v) { return v ? std::to_string(*v) : "x"; }

}  // namespace

void Engine::apply_transit(ObjectRef& target, const EveAction& action, Party receiver) {
  using K = EveAction::Kind;
  const Serial s = target.serial;
  std::string result = "ok";
  try {
    switch (action.kind) {
      case K::Pass: break;
      case K::Delay: world_.tick(); break;
      case K::TryOpen: {
        const Combination guess{action.guess, lockbox_.combo_length};
        OpenResult r;
        if (std::holds_alternative<DualLockbox>(world_.payload(s))) {
          r = try_open_dual(world_, Party::Eve, s, guess, rng_, lockbox_);
        } else {
          r = try_open(world_, Party::Eve, s, guess, rng_, lockbox_);
        }
        if (r.tag == OpenTag::Revealed) eve_knowledge_[s] = *r.value;
        result = outcome_token(r.value);
        record_op(Party::Eve, "try_open", {{"serial", s}, {"guess", guess.str()}}, true);
        break;
      }
      case K::Flip: {
        lbp::flip_op(world_, Party::Eve, s);
        if (auto it = eve_knowledge_.find(s); it != eve_knowledge_.end()) it->second ^= 1;
        record_op(Party::Eve, "flip", {{"serial", s}}, true);
        break;
      }
      case K::Value: {
        const int v = lbp::value_op(world_, Party::Eve, s);
        if (v > 0) eve_knowledge_[s] = static_cast<Bit>(v - 1);
        result = std::to_string(v);
        record_op(Party::Eve, "value", {{"serial", s}}, true);
        break;
      }
      case K::OpenRcp: {
        const auto r = open_rcp(world_, Party::Eve, target, rng_, rcp_);
        if (r) eve_knowledge_[s] = *r;
        result = outcome_token(r);
        record_op(Party::Eve, "open_rcp", {{"serial", s}, {"part", target.part}}, true);
        break;
      }
      case K::Substitute: {
        const auto stand_in = take_stock(s, target.part, payload_kind(world_.payload(s)));
        if (!stand_in) {
          result = "none";
          break;
        }
        target = *stand_in;
        record_op(Party::Eve, "substitute", {{"serial", s}, {"with", stand_in->serial}}, true);
        break;
      }
      case K::Teleport: {
        const ObjectRef refs[] = {target};
        world_.carry(Party::Eve, refs, lab_of(receiver));
        break;
      }
      case K::RevealAnti:
        throw RuleViolation(Party::Eve, "reveal_anti is not an in-transit action");
    }
  } catch (const SimError& e) {
    throw RuleViolation(Party::Eve, e.what());
  }
  eve_history_.push_back("act:" + to_string(action) + "=" + result);
}

std::vector<ObjectRef> Engine::ship(Party from, Party to, std::span<const ObjectRef> objects,
                                    std::span<const EveAction> menu) {
  const Location post = layout_.eve_post;
  const Location dest = lab_of(to);
  const auto route = world_.graph().shortest_path(post, dest);
  if (route.size() < 2) throw SimError(Errc::InvalidArgument, "no route from Eve's post to the receiver");
  const Location pickup = route[route.size() - 2];

  last_actor_ = from;
  world_.travel(from, objects, post);
  for (const ObjectRef& r : objects) world_.transfer_custody(from, r, Party::Eve);
  world_.travel(from, {}, lab_of(from));

  std::vector<ObjectRef> delivered(objects.begin(), objects.end());
  for (ObjectRef& r : delivered) {
    eve_history_.push_back("hold:" + std::to_string(canonical(r.serial)) + "." + std::to_string(r.part) + ":" +
                           std::string(payload_kind(world_.payload(r.serial))));
    last_actor_ = Party::Eve;
    const EveAction a = decide(menu);
    apply_transit(r, a, to);
  }

  last_actor_ = Party::Eve;
  try {
    world_.travel(Party::Eve, delivered, pickup);
  } catch (const SimError& e) {
    throw RuleViolation(Party::Eve, e.what());
  }
  last_actor_ = to;
  world_.travel(to, {}, pickup);
  for (const ObjectRef& r : delivered) {
    last_actor_ = Party::Eve;
    world_.transfer_custody(Party::Eve, r, to);
  }
  last_actor_ = to;
  world_.travel(to, delivered, dest);
  last_actor_ = Party::Eve;
  world_.travel(Party::Eve, {}, post);
  return delivered;
}

void Engine::hand_over(Party from, Party to, std::span<const ObjectRef> objects) {
  last_actor_ = from;
  world_.travel(from, objects, world_.party_location(to));
  for (const ObjectRef& r : objects) world_.transfer_custody(from, r, to);
  world_.travel(from, {}, lab_of(from));
}

void Engine::apply_intrusion(Serial s, const EveAction& action, std::vector<Serial>& lab) {
  using K = EveAction::Kind;
  std::string result = "ok";
  const std::string kind(payload_kind(world_.payload(s)));
  auto parts_here = [&](Serial ser) {
    std::vector<ObjectRef> out;
    for (std::uint8_t p = 0; p < world_.part_count(ser); ++p) {
      if (world_.holds(Party::Eve, {ser, p})) out.push_back({ser, p});
    }
    return out;
  };
  try {
    switch (action.kind) {
      case K::Pass: break;
      case K::Delay: world_.tick(); break;
      case K::Value: {
        const int v = lbp::value_op(world_, Party::Eve, s);
        if (v > 0) eve_knowledge_[s] = static_cast<Bit>(v - 1);
        result = std::to_string(v);
        record_op(Party::Eve, "value", {{"serial", s}}, true);
        break;
      }
      case K::Flip: {
        lbp::flip_op(world_, Party::Eve, s);
        if (auto it = eve_knowledge_.find(s); it != eve_knowledge_.end()) it->second ^= 1;
        record_op(Party::Eve, "flip", {{"serial", s}}, true);
        break;
      }
      case K::TryOpen: {
        const Combination guess{action.guess, lockbox_.combo_length};
        const auto r = std::holds_alternative<DualLockbox>(world_.payload(s))
                           ? try_open_dual(world_, Party::Eve, s, guess, rng_, lockbox_)
                           : try_open(world_, Party::Eve, s, guess, rng_, lockbox_);
        if (r.tag == OpenTag::Revealed) eve_knowledge_[s] = *r.value;
        result = outcome_token(r.value);
        record_op(Party::Eve, "try_open", {{"serial", s}, {"guess", guess.str()}}, true);
        break;
      }
      case K::OpenRcp: {
        std::string acc;
        for (const ObjectRef& r : parts_here(s)) {
          const auto bit = open_rcp(world_, Party::Eve, r, rng_, rcp_);
          if (bit) eve_knowledge_[s] = *bit;
          acc += outcome_token(bit);
          record_op(Party::Eve, "open_rcp", {{"serial", s}, {"part", r.part}}, true);
        }
        result = acc;
        break;
      }
      case K::Substitute: {
        // read first when the theory lets her, so the stand-in can carry the same bit
        const auto mine = parts_here(s);
        const std::uint8_t part = mine.empty() ? 0 : mine.front().part;
        const auto stand_in = take_stock(s, part, kind);
        if (!stand_in) {
          result = "none";
          break;
        }
        if (std::holds_alternative<LbpPayload>(world_.payload(s))) {
          const int v = lbp::value_op(world_, Party::Eve, s);
          if (v > 0) {
            const Bit b = static_cast<Bit>(v - 1);
            eve_knowledge_[s] = b;
            const auto known = eve_knowledge_.find(stand_in->serial);
            if (known != eve_knowledge_.end() && known->second != b) {
              lbp::flip_op(world_, Party::Eve, stand_in->serial);
              known->second = b;
            }
          }
          result = std::to_string(v);
        }
        std::replace(lab.begin(), lab.end(), s, stand_in->serial);
        record_op(Party::Eve, "substitute", {{"serial", s}, {"with", stand_in->serial}}, true);
        break;
      }
      case K::Teleport:
      case K::RevealAnti:
        throw RuleViolation(Party::Eve, to_string(action) + " is not an intrusion action");
    }
  } catch (const SimError& e) {
    throw RuleViolation(Party::Eve, e.what());
  }
  eve_history_.push_back("act:" + to_string(action) + "=" + result);
}

void Engine::intrusion(Party owner, std::span<const EveAction> menu) {
  const Location lab_loc = lab_of(owner);
  last_actor_ = Party::Eve;
  const auto kit = world_.held_here(Party::Eve);
  try {
    world_.travel(Party::Eve, kit, lab_loc);
  } catch (const SimError& e) {
    throw RuleViolation(Party::Eve, e.what());
  }
  const auto contents = world_.held_here(owner);
  std::vector<Serial> lab_serials;
  for (const ObjectRef& r : contents) {
    if (lab_serials.empty() || lab_serials.back() != r.serial) lab_serials.push_back(r.serial);
  }
  last_actor_ = owner;
  for (const ObjectRef& r : contents) world_.transfer_custody(owner, r, Party::Eve);
  if (record_) transcript_.append(world_.clock(), "Eve", "intrusion", {{"lab", to_string(owner)}}, true);

  std::vector<Serial> lab = lab_serials;
  for (Serial s : lab_serials) {
    eve_history_.push_back("lab:" + std::to_string(canonical(s)) + ":" +
                           std::string(payload_kind(world_.payload(s))));
    last_actor_ = Party::Eve;
    const EveAction a = decide(menu);
    apply_intrusion(s, a, lab);
  }

  // what goes back: untouched contents, plus stand-ins in the same slots
  last_actor_ = Party::Eve;
  for (const ObjectRef& c : contents) {
    ObjectRef back = c;
    if (std::find(lab.begin(), lab.end(), c.serial) == lab.end()) {
      back.serial = stock_for_.at(c.serial);
    }
    if (world_.holds(Party::Eve, back)) world_.transfer_custody(Party::Eve, back, owner);
  }
  const auto leftovers = world_.held_here(Party::Eve);
  world_.travel(Party::Eve, leftovers, layout_.eve_post);
}

}  // namespace lockbox
