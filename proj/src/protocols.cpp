#include "lockbox/protocols.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lockbox/lbp.hpp"
#include "lockbox/privacy.hpp"

namespace lockbox {

std::string_view to_string(Theory t) {
  switch (t) {
    case Theory::Combination: return "combination";
    case Theory::Dual: return "dual";
    case Theory::Lbp: return "lbp";
    case Theory::LbpReadOnce: return "lbp_read_once";
    case Theory::Rcp: return "rcp";
    case Theory::Trivial: return "trivial";
  }
  return "?";
}

Theory theory_from_string(std::string_view s) {
  for (Theory t : {Theory::Combination, Theory::Dual, Theory::Lbp, Theory::LbpReadOnce, Theory::Rcp, Theory::Trivial}) {
    if (to_string(t) == s) return t;
  }
  throw SimError(Errc::InvalidArgument, "unknown theory '" + std::string(s) + "'");
}

namespace {
constexpr std::pair<Behavior, std::string_view> kBehaviors[] = {
    {Behavior::Honest, "honest"},         {Behavior::OpenAs0, "open_as_0"},
    {Behavior::OpenAs1, "open_as_1"},     {Behavior::ClaimFlip, "claim_flip"},
    {Behavior::Fabricate, "fabricate"},   {Behavior::FabricateOne, "fabricate_one"},
    {Behavior::BruteForce, "brute_force"}, {Behavior::Adversarial, "adversarial"},
};
}  // namespace

std::string_view to_string(Behavior b) {
  for (const auto& [k, name] : kBehaviors) {
    if (k == b) return name;
  }
  return "?";
}

Behavior behavior_from_string(std::string_view s) {
  for (const auto& [k, name] : kBehaviors) {
    if (name == s) return k;
  }
  throw SimError(Errc::InvalidArgument, "unknown behavior '" + std::string(s) + "'");
}

std::string protocol_name(const ProtocolParams& p) {
  struct V {
    std::string operator()(const KdCombination&) const { return "kd_combination"; }
    std::string operator()(const KdLbp&) const { return "kd_lbp"; }
    std::string operator()(const BcSingle&) const { return "bc_single"; }
    std::string operator()(const BcDual&) const { return "bc_dual_equivocation"; }
    std::string operator()(const BcHarrow&) const { return "bc_harrow"; }
    std::string operator()(const KsLbpPlain&) const { return "ks_lbp_plain"; }
    std::string operator()(const KsReadOnce&) const { return "ks_readonce"; }
    std::string operator()(const KsSerialList&) const { return "ks_serial_list"; }
    std::string operator()(const KsRcp&) const { return "ks_rcp"; }
  };
  return std::visit(V{}, p);
}

std::vector<Theory> supported_theories(const ProtocolParams& p) {
  struct V {
    std::vector<Theory> operator()(const KdCombination&) const { return {Theory::Combination}; }
    std::vector<Theory> operator()(const KdLbp&) const { return {Theory::Lbp, Theory::LbpReadOnce}; }
    std::vector<Theory> operator()(const BcSingle&) const { return {Theory::Combination}; }
    std::vector<Theory> operator()(const BcDual&) const { return {Theory::Dual}; }
    std::vector<Theory> operator()(const BcHarrow&) const { return {Theory::Dual}; }
    std::vector<Theory> operator()(const KsLbpPlain&) const { return {Theory::Lbp}; }
    std::vector<Theory> operator()(const KsReadOnce&) const { return {Theory::LbpReadOnce}; }
    std::vector<Theory> operator()(const KsSerialList&) const { return {Theory::LbpReadOnce}; }
    std::vector<Theory> operator()(const KsRcp&) const { return {Theory::Rcp}; }
  };
  return std::visit(V{}, p);
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw SimError(Errc::InvalidArgument, what);
}

bool is_two_party(const ProtocolParams& p) {
  return std::holds_alternative<BcSingle>(p) || std::holds_alternative<BcDual>(p) ||
         std::holds_alternative<BcHarrow>(p);
}

}  // namespace

void validate(const Scenario& sc) {
  validate_layout(sc.layout);
  const auto ok = supported_theories(sc.protocol);
  require(std::find(ok.begin(), ok.end(), sc.theory) != ok.end(),
          protocol_name(sc.protocol) + " does not run on theory " + std::string(to_string(sc.theory)));
  require(sc.lockbox.combo_length >= 1 && sc.lockbox.combo_length <= 16, "combo_length must be in [1, 16]");
  require(sc.confidence > 0 && sc.confidence < 1, "confidence must be in (0, 1)");
  if (const auto* p = std::get_if<KdCombination>(&sc.protocol)) require(p->N > p->m && p->m >= 1, "need N > m >= 1");
  if (const auto* p = std::get_if<KdLbp>(&sc.protocol)) require(p->N > p->m && p->m >= 1, "need N > m >= 1");
  if (const auto* p = std::get_if<BcSingle>(&sc.protocol)) require(p->bit <= 1, "bit must be 0 or 1");
  if (const auto* p = std::get_if<BcDual>(&sc.protocol)) require(p->bit <= 1, "bit must be 0 or 1");
  if (const auto* p = std::get_if<BcHarrow>(&sc.protocol)) {
    require(p->k >= 1 && p->v <= 1, "need k >= 1 and v in {0, 1}");
    require(sc.lockbox.combo_length >= 2 || (sc.alice != Behavior::Fabricate && sc.alice != Behavior::FabricateOne),
            "fabricated combinations need combo_length >= 2");
  }
  if (const auto* p = std::get_if<KsReadOnce>(&sc.protocol)) require(p->w <= p->n, "need w <= n");
  if (const auto* p = std::get_if<KsRcp>(&sc.protocol)) {
    require(p->max_discard_fraction >= 0 && p->max_discard_fraction <= 1, "max_discard_fraction must be in [0, 1]");
  }
  if (!is_two_party(sc.protocol)) {
    require(sc.alice == Behavior::Honest && sc.bob == Behavior::Honest,
            protocol_name(sc.protocol) + " has honest parties only");
  }
}

std::vector<EveAction> eve_menu(const Scenario& sc) {
  using K = EveAction::Kind;
  std::vector<EveAction> menu{{K::Pass, 0}};
  struct V {
    const Scenario& sc;
    std::vector<EveAction>& m;
    void operator()(const KdCombination&) const {
      for (std::uint32_t g = 0; g < (1u << sc.lockbox.combo_length); ++g) m.push_back({K::TryOpen, g});
      m.push_back({K::Delay, 0});
      m.push_back({K::Teleport, 0});
    }
    void operator()(const KdLbp&) const {
      m.insert(m.end(), {{K::Flip, 0}, {K::Value, 0}, {K::Substitute, 0}, {K::Delay, 0}, {K::Teleport, 0}});
    }
    void operator()(const BcSingle&) const {}
    void operator()(const BcDual&) const {}
    void operator()(const BcHarrow&) const {}
    void operator()(const KsLbpPlain&) const { storage(); }
    void operator()(const KsReadOnce&) const { storage(); }
    void operator()(const KsSerialList&) const { storage(); }
    void operator()(const KsRcp&) const { m.insert(m.end(), {{K::OpenRcp, 0}, {K::Substitute, 0}, {K::Delay, 0}}); }
    void storage() const { m.insert(m.end(), {{K::Value, 0}, {K::Flip, 0}, {K::Substitute, 0}, {K::Delay, 0}}); }
  };
  std::visit(V{sc, menu}, sc.protocol);
  return menu;
}

namespace {

struct Ctx {
  const Scenario& sc;
  Engine& e;
  RandomSource& rng;
  World& w;
};

ordered_json to_array(const std::vector<std::size_t>& v) {
  ordered_json a = ordered_json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

ordered_json to_array(const BitString& v) {
  ordered_json a = ordered_json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

/// Hashing step shared by every key-producing protocol. `eve` holds Eve's
/// certain knowledge of each sifted bit of Alice's.
void finish_key(Ctx& c, ProtocolOutcome& out, const BitString& alice, const BitString& bob,
                const std::vector<std::optional<Bit>>& eve, std::size_t leak, bool storage) {
  const std::size_t l = pa::output_length(alice.size(), leak, c.sc.pa_sigma);
  BitString ka, kb;
  std::optional<BitString> eve_key;
  const bool eve_all = std::all_of(eve.begin(), eve.end(), [](const auto& b) { return b.has_value(); });
  BitString eve_bits;
  if (eve_all) {
    for (const auto& b : eve) eve_bits.push_back(*b);
  }
  if (c.sc.privacy_amplification) {
    const auto h = pa::random_hash(c.rng, l, alice.size());
    ordered_json rows = ordered_json::array();
    for (auto& r : pa::to_hex_rows(h)) rows.push_back(r);
    if (storage && bob.empty()) {
      c.e.record_op(Party::Alice, "hash", {{"n", alice.size()}, {"rows", rows}});
    } else {
      c.e.send(Party::Alice, Party::Bob, {{"n", alice.size()}, {"hash_rows", rows}});
    }
    ka = pa::apply(alice, h);
    if (!bob.empty() || !storage) kb = pa::apply(bob, h);
    if (eve_all) eve_key = pa::apply(eve_bits, h);
  } else {
    ka.assign(alice.begin(), alice.begin() + static_cast<std::ptrdiff_t>(l));
    if (!bob.empty() || !storage) kb.assign(bob.begin(), bob.begin() + static_cast<std::ptrdiff_t>(l));
    if (eve_all) eve_key = BitString(eve_bits.begin(), eve_bits.begin() + static_cast<std::ptrdiff_t>(l));
  }
  out.sifted_alice = alice;
  out.sifted_bob = bob;
  out.eve_sifted = eve;
  out.eve_key = eve_key;
  out.stats["leak_bound"] = static_cast<std::int64_t>(leak);
  if (storage) {
    out.verdict = StorageVerified{ka, kb, leak};
  } else {
    out.verdict = KeyAgreed{ka, kb, leak};
  }
}

std::optional<Bit> known(const Engine& e, Serial s) {
  const auto& k = e.eve_knowledge();
  if (auto it = k.find(s); it != k.end()) return it->second;
  return std::nullopt;
}

Abort abort_with(AbortReason r, std::string detail = {}) { return Abort{r, std::nullopt, std::move(detail)}; }

/// Public test on a random m-subset; returns the number of mismatches and
/// leaves the untested positions in `rest`.
std::size_t public_test(Ctx& c, const BitString& alice, const BitString& bob, std::size_t m,
                        std::vector<std::size_t>& rest) {
  const auto test = sample_subset(c.rng, alice.size(), m);
  BitString shown;
  for (auto i : test) shown.push_back(alice[i]);
  c.e.send(Party::Alice, Party::Bob, {{"test", to_array(test)}, {"bits", to_array(shown)}});
  std::size_t bad = 0;
  for (auto i : test) bad += alice[i] != bob[i];
  c.e.send(Party::Bob, Party::Alice, {{"test_ok", bad == 0}});
  std::set<std::size_t> tested(test.begin(), test.end());
  rest.clear();
  for (std::size_t i = 0; i < alice.size(); ++i) {
    if (!tested.contains(i)) rest.push_back(i);
  }
  return bad;
}

std::size_t stock_size(const Scenario& sc, std::size_t objects) { return sc.eve_stock ? sc.eve_stock : objects; }

ProtocolOutcome kd_combination(Ctx& c, const KdCombination& p) {
  ProtocolOutcome out;
  const auto serials = c.e.init(p.N, c.sc.mint_seed);
  const unsigned len = c.sc.lockbox.combo_length;
  BitString bits(p.N);
  std::vector<Combination> combos(p.N);
  std::vector<ObjectRef> boxes;
  for (std::size_t i = 0; i < p.N; ++i) {
    bits[i] = c.rng.bit();
    combos[i] = random_combination(c.rng, len);
    create_lockbox(c.w, Party::Alice, serials[i], bits[i], combos[i], c.sc.lockbox);
    boxes.push_back({serials[i], 0});
  }
  c.e.record_op(Party::Alice, "prepare", {{"boxes", p.N}});
  const auto menu = eve_menu(c.sc);
  const auto got = c.e.ship(Party::Alice, Party::Bob, boxes, menu);
  c.e.send(Party::Bob, Party::Alice, {{"received", got.size()}});
  ordered_json shown = ordered_json::array();
  for (const auto& k : combos) shown.push_back(k.str());
  c.e.send(Party::Alice, Party::Bob, {{"combinations", shown}});

  BitString bob(p.N, 0);
  std::size_t markers = 0;
  for (std::size_t i = 0; i < p.N; ++i) {
    const auto r = try_open(c.w, Party::Bob, got[i].serial, combos[i], c.rng, c.sc.lockbox);
    c.e.record_op(Party::Bob, "open", {{"serial", got[i].serial}});
    if (r.value) bob[i] = *r.value;
    else ++markers;
  }
  std::int64_t destroyed = 0;
  for (const auto& g : got) {
    destroyed += std::get<CombinationLockbox>(c.w.payload(g.serial)).status == BoxStatus::Destroyed;
  }
  out.stats["destroyed"] = destroyed;
  if (markers > 0) {
    c.e.send(Party::Bob, Party::Alice, {{"destroyed_seen", markers}});
    out.verdict = abort_with(AbortReason::TamperDetected, std::to_string(markers) + " boxes report destruction");
    return out;
  }
  std::vector<std::size_t> rest;
  const std::size_t bad = public_test(c, bits, bob, p.m, rest);
  out.stats["tests_failed"] = static_cast<std::int64_t>(bad);
  if (bad > 0) {
    out.verdict = abort_with(AbortReason::TestFailed, std::to_string(bad) + " tested bits differ");
    return out;
  }
  BitString a, b;
  std::vector<std::optional<Bit>> eve;
  for (auto i : rest) {
    a.push_back(bits[i]);
    b.push_back(bob[i]);
    eve.push_back(known(c.e, serials[i]));
  }
  finish_key(c, out, a, b, eve, leak_upper_bound(p.N, p.m, 0, c.sc.confidence, c.sc.leak), false);
  return out;
}

ProtocolOutcome kd_lbp(Ctx& c, const KdLbp& p) {
  ProtocolOutcome out;
  const bool read_once = c.sc.theory == Theory::LbpReadOnce;
  const std::size_t stock = stock_size(c.sc, p.N);
  const auto serials = c.e.init(p.N + stock, c.sc.mint_seed);
  BitString bits(p.N);
  for (std::size_t i = 0; i < p.N; ++i) {
    bits[i] = c.rng.bit();
    lbp::create_pair(c.w, Party::Alice, serials[i], bits[i], read_once);
  }
  for (std::size_t j = 0; j < stock; ++j) {
    lbp::create_pair(c.w, Party::Eve, serials[p.N + j], 0, read_once);
    c.e.add_eve_stock({serials[p.N + j], 0}, Bit{0});
  }
  c.e.record_op(Party::Alice, "prepare", {{"pairs", p.N}});
  const auto menu = eve_menu(c.sc);
  std::vector<std::pair<ObjectRef, ObjectRef>> received;
  for (std::size_t i = 0; i < p.N; ++i) {
    const ObjectRef h0{serials[i], 0}, h1{serials[i], 1};
    const auto g0 = c.e.ship(Party::Alice, Party::Bob, std::span(&h0, 1), menu)[0];
    c.e.send(Party::Bob, Party::Alice, {{"ack", i}});
    const auto g1 = c.e.ship(Party::Alice, Party::Bob, std::span(&h1, 1), menu)[0];
    received.emplace_back(g0, g1);
  }

  BitString bob(p.N, 0);
  std::size_t nulls = 0, mismatches = 0;
  ordered_json announced = ordered_json::array();
  for (std::size_t i = 0; i < p.N; ++i) announced.push_back(serials[i]);
  c.e.send(Party::Alice, Party::Bob, {{"serials", announced}});
  for (std::size_t i = 0; i < p.N; ++i) {
    const auto [g0, g1] = received[i];
    const auto s0 = lbp::half_serial(c.w, Party::Bob, g0);
    const auto s1 = lbp::half_serial(c.w, Party::Bob, g1);
    const auto want = static_cast<std::int64_t>(serials[i]);
    if (s0 != want || s1 != want) {
      ++mismatches;
      continue;
    }
    const int v = lbp::value_op(c.w, Party::Bob, serials[i]);
    c.e.record_op(Party::Bob, "value", {{"serial", serials[i]}});
    if (v == 0) ++nulls;
    else bob[i] = static_cast<Bit>(v - 1);
  }
  out.stats["serial_mismatches"] = static_cast<std::int64_t>(mismatches);
  out.stats["null_reads"] = static_cast<std::int64_t>(nulls);
  if (mismatches > 0) {
    c.e.send(Party::Bob, Party::Alice, {{"serials_ok", false}});
    out.verdict = abort_with(AbortReason::SerialMismatch, std::to_string(mismatches) + " pairs carry foreign serials");
    return out;
  }
  if (nulls > 0) {
    c.e.send(Party::Bob, Party::Alice, {{"reads_ok", false}});
    out.verdict = abort_with(AbortReason::TamperDetected, std::to_string(nulls) + " pairs were already read");
    return out;
  }
  c.e.send(Party::Bob, Party::Alice, {{"serials_ok", true}});
  std::vector<std::size_t> rest;
  const std::size_t bad = public_test(c, bits, bob, p.m, rest);
  out.stats["tests_failed"] = static_cast<std::int64_t>(bad);
  if (bad > 0) {
    out.verdict = abort_with(AbortReason::TestFailed, std::to_string(bad) + " tested bits differ");
    return out;
  }
  BitString a, b;
  std::vector<std::optional<Bit>> eve;
  for (auto i : rest) {
    a.push_back(bits[i]);
    b.push_back(bob[i]);
    eve.push_back(known(c.e, serials[i]));
  }
  finish_key(c, out, a, b, eve, leak_upper_bound(p.N, p.m, 0, c.sc.confidence, c.sc.leak), false);
  return out;
}

std::vector<EveAction> combination_menu(std::initializer_list<Combination> combos) {
  std::vector<EveAction> m;
  for (const auto& k : combos) m.push_back({EveAction::Kind::TryOpen, k.value});
  return m;
}

/// Bob's optional peek at a committed box before the reveal.
void bob_peek(Ctx& c, ProtocolOutcome& out, Serial s, Bit b, bool dual) {
  if (c.sc.bob != Behavior::BruteForce && c.sc.bob != Behavior::Adversarial) return;
  const unsigned len = c.sc.lockbox.combo_length;
  Combination guess;
  if (c.sc.bob == Behavior::BruteForce) {
    guess = random_combination(c.rng, len);
  } else {
    std::vector<EveAction> menu{{EveAction::Kind::Pass, 0}};
    for (std::uint32_t g = 0; g < (1u << len); ++g) menu.push_back({EveAction::Kind::TryOpen, g});
    const auto a = c.e.cheater_decide({"peek"}, menu);
    if (a.kind == EveAction::Kind::Pass) return;
    guess = Combination{a.guess, len};
  }
  const auto r = dual ? try_open_dual(c.w, Party::Bob, s, guess, c.rng, c.sc.lockbox)
                      : try_open(c.w, Party::Bob, s, guess, c.rng, c.sc.lockbox);
  c.e.record_op(Party::Bob, "peek", {{"serial", s}, {"guess", guess.str()}});
  out.stats["bob_peeked"] = 1;
  out.stats["bob_learned_bit"] = r.tag == OpenTag::Revealed || r.tag == OpenTag::RevealedComplement;
  out.stats["bob_destroyed"] = r.tag == OpenTag::Garbled || r.tag == OpenTag::Marker;
  (void)b;
}

ProtocolOutcome bc_single(Ctx& c, const BcSingle& p) {
  ProtocolOutcome out;
  const auto serials = c.e.init(1, c.sc.mint_seed);
  const Serial s = serials[0];
  const unsigned len = c.sc.lockbox.combo_length;
  const Combination combo = random_combination(c.rng, len);
  create_lockbox(c.w, Party::Alice, s, p.bit, combo, c.sc.lockbox);
  c.e.record_op(Party::Alice, "commit", {{"serial", s}});
  const ObjectRef ref{s, 0};
  c.e.hand_over(Party::Alice, Party::Bob, std::span(&ref, 1));
  c.e.send(Party::Alice, Party::Bob, {{"committed", s}});
  out.stats["committed_bit"] = p.bit;
  bob_peek(c, out, s, p.bit, false);

  Combination shown = combo;
  switch (c.sc.alice) {
    case Behavior::Honest: break;
    case Behavior::OpenAs0:
    case Behavior::OpenAs1: {
      const Bit target = c.sc.alice == Behavior::OpenAs1;
      if (target != p.bit) shown = random_combination_except(c.rng, len, combo);
      break;
    }
    case Behavior::Fabricate: shown = random_combination_except(c.rng, len, combo); break;
    case Behavior::Adversarial: {
      const auto fake = random_combination_except(c.rng, len, combo);
      const auto menu = combination_menu({combo, fake});
      shown = Combination{c.e.cheater_decide({"commit:" + std::to_string(p.bit)}, menu).guess, len};
      break;
    }
    default: throw SimError(Errc::InvalidArgument, "behavior not available in bc_single");
  }
  c.e.send(Party::Alice, Party::Bob, {{"combination", shown.str()}});
  const auto r = try_open(c.w, Party::Bob, s, shown, c.rng, c.sc.lockbox);
  c.e.record_op(Party::Bob, "open", {{"serial", s}});
  out.stats["revealed_intact"] = r.tag == OpenTag::Revealed;
  out.verdict = CommitmentOpened{r.value, r.value.has_value()};
  return out;
}

ProtocolOutcome bc_dual(Ctx& c, const BcDual& p) {
  ProtocolOutcome out;
  const auto serials = c.e.init(1, c.sc.mint_seed);
  const Serial s = serials[0];
  const unsigned len = c.sc.lockbox.combo_length;
  const Combination combo = random_combination(c.rng, len);
  const Combination anti = random_combination_except(c.rng, len, combo);
  create_dual_lockbox(c.w, Party::Alice, s, p.bit, combo, anti, c.sc.lockbox);
  c.e.record_op(Party::Alice, "commit", {{"serial", s}});
  const ObjectRef ref{s, 0};
  c.e.hand_over(Party::Alice, Party::Bob, std::span(&ref, 1));
  c.e.send(Party::Alice, Party::Bob, {{"committed", s}});
  out.stats["committed_bit"] = p.bit;
  bob_peek(c, out, s, p.bit, true);

  Combination shown = combo;
  switch (c.sc.alice) {
    case Behavior::Honest: break;
    case Behavior::OpenAs0:
    case Behavior::OpenAs1: {
      const Bit target = c.sc.alice == Behavior::OpenAs1;
      shown = target == p.bit ? combo : anti;
      break;
    }
    case Behavior::Fabricate: {
      if ((1u << len) <= 2) throw SimError(Errc::InvalidArgument, "fabricate needs combo_length >= 2");
      do shown = random_combination(c.rng, len);
      while (shown == combo || shown == anti);
      break;
    }
    case Behavior::Adversarial: {
      const auto menu = combination_menu({combo, anti});
      shown = Combination{c.e.cheater_decide({"commit:" + std::to_string(p.bit)}, menu).guess, len};
      break;
    }
    default: throw SimError(Errc::InvalidArgument, "behavior not available in bc_dual_equivocation");
  }
  c.e.send(Party::Alice, Party::Bob, {{"combination", shown.str()}});
  const auto r = try_open_dual(c.w, Party::Bob, s, shown, c.rng, c.sc.lockbox);
  c.e.record_op(Party::Bob, "open", {{"serial", s}});
  out.stats["revealed_intact"] = r.tag == OpenTag::Revealed || r.tag == OpenTag::RevealedComplement;
  out.verdict = CommitmentOpened{r.value, r.value.has_value()};
  return out;
}

/// Uniform combination outside `avoid`.
Combination combination_outside(RandomSource& rng, unsigned len, const std::vector<Combination>& avoid) {
  std::vector<std::uint32_t> pool;
  for (std::uint32_t g = 0; g < (1u << len); ++g) {
    if (std::none_of(avoid.begin(), avoid.end(), [&](const Combination& a) { return a.value == g; })) pool.push_back(g);
  }
  if (pool.empty()) throw SimError(Errc::InvalidArgument, "combination space exhausted");
  return Combination{pool[rng.choose(pool.size())], len};
}

ProtocolOutcome bc_harrow(Ctx& c, const BcHarrow& p) {
  ProtocolOutcome out;
  const auto serials = c.e.init(p.k, c.sc.mint_seed);
  const unsigned len = c.sc.lockbox.combo_length;
  struct Box {
    Combination lo, hi;
  };
  std::vector<Box> boxes;
  std::vector<ObjectRef> refs;
  for (std::size_t j = 0; j < p.k; ++j) {
    const auto a = random_combination(c.rng, len);
    const auto b = random_combination_except(c.rng, len, a);
    const Box box{std::min(a, b), std::max(a, b)};
    // every box holds 0; v picks which end of the pair reveals it
    const Combination zero = p.v == 0 ? box.lo : box.hi;
    const Combination one = p.v == 0 ? box.hi : box.lo;
    create_dual_lockbox(c.w, Party::Alice, serials[j], 0, zero, one, c.sc.lockbox);
    boxes.push_back(box);
    refs.push_back({serials[j], 0});
  }
  c.e.record_op(Party::Alice, "commit", {{"boxes", p.k}});
  c.e.hand_over(Party::Alice, Party::Bob, refs);
  c.e.send(Party::Alice, Party::Bob, {{"committed", p.k}});
  out.stats["committed_bit"] = p.v;

  Bit claim = p.v;
  std::vector<Box> shown = boxes;
  switch (c.sc.alice) {
    case Behavior::Honest: break;
    case Behavior::ClaimFlip: claim = 1 - p.v; break;
    case Behavior::Fabricate:
      claim = 1 - p.v;
      for (auto& b : shown) {
        const auto f1 = combination_outside(c.rng, len, {b.lo, b.hi});
        const auto f2 = combination_outside(c.rng, len, {b.lo, b.hi, f1});
        b = {std::min(f1, f2), std::max(f1, f2)};
      }
      break;
    case Behavior::FabricateOne:
      claim = 1 - p.v;
      for (auto& b : shown) {
        // keep one true combination and put a fake on the side of it that
        // makes its real bit fit the flipped claim
        const Combination zero = p.v == 0 ? b.lo : b.hi;
        const Combination one = p.v == 0 ? b.hi : b.lo;
        const std::uint32_t top = (1u << len) - 1;
        // under the claim, 0 must come from the higher member iff claim == 1
        auto pick = [&](std::uint32_t from, std::uint32_t to) -> std::optional<Combination> {
          std::vector<std::uint32_t> pool;
          for (std::uint32_t g = from; g <= to && from <= to; ++g) {
            if (g != zero.value && g != one.value) pool.push_back(g);
          }
          if (pool.empty()) return std::nullopt;
          return Combination{pool[c.rng.choose(pool.size())], len};
        };
        std::optional<Combination> f;
        if (claim == 1) {
          if (zero.value > 0 && (f = pick(0, zero.value - 1))) b = {*f, zero};
          else if (one.value < top && (f = pick(one.value + 1, top))) b = {one, *f};
        } else {
          if (zero.value < top && (f = pick(zero.value + 1, top))) b = {zero, *f};
          else if (one.value > 0 && (f = pick(0, one.value - 1))) b = {*f, one};
        }
        if (!f) {
          const auto g = combination_outside(c.rng, len, {b.lo, b.hi});
          b = {std::min(g, one), std::max(g, one)};
        }
      }
      break;
    default: throw SimError(Errc::InvalidArgument, "behavior not available in bc_harrow");
  }
  ordered_json pairs = ordered_json::array();
  for (const auto& b : shown) pairs.push_back({b.lo.str(), b.hi.str()});
  c.e.send(Party::Alice, Party::Bob, {{"claim", claim}, {"pairs", pairs}});

  std::size_t bad = 0;
  for (std::size_t j = 0; j < p.k; ++j) {
    const bool high = c.rng.bit();
    const Combination g = high ? shown[j].hi : shown[j].lo;
    const auto r = try_open_dual(c.w, Party::Bob, serials[j], g, c.rng, c.sc.lockbox);
    c.e.record_op(Party::Bob, "open", {{"serial", serials[j]}, {"high", high}});
    const Bit expected = static_cast<Bit>(high) ^ claim;
    if (!r.value || *r.value != expected) ++bad;
  }
  out.stats["boxes_rejected"] = static_cast<std::int64_t>(bad);
  if (bad > 0) {
    c.e.send(Party::Bob, Party::Alice, {{"accepted", false}});
    out.verdict = Abort{AbortReason::OpenRejected, Party::Alice, std::to_string(bad) + " boxes contradict the claim"};
    return out;
  }
  c.e.send(Party::Bob, Party::Alice, {{"accepted", true}});
  out.verdict = CommitmentOpened{claim, true};
  return out;
}

struct Stored {
  std::vector<Serial> serials;
  BitString bits;
};

Stored store_pairs(Ctx& c, std::size_t n, bool read_once) {
  const std::size_t stock = stock_size(c.sc, n);
  const auto serials = c.e.init(n + stock, c.sc.mint_seed);
  Stored st;
  for (std::size_t i = 0; i < n; ++i) {
    const Bit b = c.rng.bit();
    lbp::create_pair(c.w, Party::Alice, serials[i], b, read_once);
    st.serials.push_back(serials[i]);
    st.bits.push_back(b);
  }
  for (std::size_t j = 0; j < stock; ++j) {
    lbp::create_pair(c.w, Party::Eve, serials[n + j], 0, read_once);
    c.e.add_eve_stock({serials[n + j], 0}, Bit{0});
  }
  c.e.record_op(Party::Alice, "store", {{"pairs", n}});
  return st;
}

/// Serials of complete pairs Alice holds after the intrusion, ascending.
std::vector<Serial> pairs_in_lab(const World& w) {
  std::map<Serial, int> parts;
  for (const auto& r : w.held_here(Party::Alice)) ++parts[r.serial];
  std::vector<Serial> out;
  for (const auto& [s, k] : parts) {
    if (k == 2) out.push_back(s);
  }
  return out;
}

ProtocolOutcome ks_lbp_plain(Ctx& c, const KsLbpPlain& p) {
  ProtocolOutcome out;
  store_pairs(c, p.n, false);
  c.e.intrusion(Party::Alice, eve_menu(c.sc));
  BitString key;
  std::vector<std::optional<Bit>> eve;
  for (Serial s : pairs_in_lab(c.w)) {
    const int v = lbp::value_op(c.w, Party::Alice, s);
    c.e.record_op(Party::Alice, "value", {{"serial", s}});
    if (v == 0) continue;
    key.push_back(static_cast<Bit>(v - 1));
    eve.push_back(known(c.e, s));
  }
  finish_key(c, out, key, {}, eve, 0, true);
  return out;
}

ProtocolOutcome ks_readonce(Ctx& c, const KsReadOnce& p) {
  ProtocolOutcome out;
  const auto st = store_pairs(c, p.n, true);
  const auto marked_idx = sample_subset(c.rng, p.n, p.w);
  std::set<Serial> marked;
  for (auto i : marked_idx) marked.insert(st.serials[i]);
  c.e.record_op(Party::Alice, "mark", {{"count", p.w}});
  c.e.intrusion(Party::Alice, eve_menu(c.sc));

  const auto present = pairs_in_lab(c.w);
  const std::set<Serial> here(present.begin(), present.end());
  std::size_t bad = 0;
  for (Serial s : marked) {
    if (!here.contains(s)) {
      ++bad;
      continue;
    }
    const int v = lbp::value_op(c.w, Party::Alice, s);
    c.e.record_op(Party::Alice, "value", {{"serial", s}});
    bad += v == 0;
  }
  out.stats["marked_bad"] = static_cast<std::int64_t>(bad);
  out.stats["tamper_evidence"] = bad > 0;
  if (p.w > 0 && bad == p.w) {
    out.verdict = abort_with(AbortReason::AllMarkedConsumed, "every marked pair is unusable");
    return out;
  }
  BitString key;
  std::vector<std::optional<Bit>> eve;
  std::int64_t dropped = 0;
  for (Serial s : present) {
    if (marked.contains(s)) continue;
    const int v = lbp::value_op(c.w, Party::Alice, s);
    c.e.record_op(Party::Alice, "value", {{"serial", s}});
    if (v == 0) {
      ++dropped;
      continue;
    }
    key.push_back(static_cast<Bit>(v - 1));
    eve.push_back(known(c.e, s));
  }
  out.stats["dropped"] = dropped;
  finish_key(c, out, key, {}, eve, leak_upper_bound(p.n, p.w, bad, c.sc.confidence, c.sc.leak), true);
  return out;
}

ProtocolOutcome ks_serial_list(Ctx& c, const KsSerialList& p) {
  ProtocolOutcome out;
  const auto st = store_pairs(c, p.n, true);
  c.e.intrusion(Party::Alice, eve_menu(c.sc));
  const auto present = pairs_in_lab(c.w);
  std::size_t missing = 0;
  for (Serial s : st.serials) missing += std::find(present.begin(), present.end(), s) == present.end();
  const std::size_t foreign = present.size() + missing - st.serials.size();
  out.stats["serial_mismatches"] = static_cast<std::int64_t>(missing + foreign);
  if (missing + foreign > 0) {
    out.verdict = abort_with(AbortReason::TamperDetected, "serial list does not match the lab");
    return out;
  }
  BitString key;
  std::vector<std::optional<Bit>> eve;
  std::size_t nulls = 0;
  for (Serial s : st.serials) {
    const int v = lbp::value_op(c.w, Party::Alice, s);
    c.e.record_op(Party::Alice, "value", {{"serial", s}});
    if (v == 0) {
      ++nulls;
      continue;
    }
    key.push_back(static_cast<Bit>(v - 1));
    eve.push_back(known(c.e, s));
  }
  out.stats["null_reads"] = static_cast<std::int64_t>(nulls);
  if (nulls > 0) {
    out.verdict = abort_with(AbortReason::TamperDetected, std::to_string(nulls) + " pairs already read");
    return out;
  }
  finish_key(c, out, key, {}, eve, 0, true);
  return out;
}

ProtocolOutcome ks_rcp(Ctx& c, const KsRcp& p) {
  ProtocolOutcome out;
  const std::size_t stock = stock_size(c.sc, p.n);
  const auto serials = c.e.init(p.n + stock, c.sc.mint_seed);
  std::vector<ObjectRef> bobs;
  for (std::size_t i = 0; i < p.n; ++i) {
    create_rcp(c.w, Party::Alice, serials[i]);
    bobs.push_back({serials[i], 1});
  }
  c.e.hand_over(Party::Alice, Party::Bob, bobs);
  for (std::size_t j = 0; j < stock; ++j) {
    create_rcp(c.w, Party::Eve, serials[p.n + j]);
    c.e.add_eve_stock({serials[p.n + j], 0}, std::nullopt);
  }
  c.e.record_op(Party::Alice, "store", {{"pairs", p.n}});
  const auto menu = eve_menu(c.sc);
  c.e.intrusion(Party::Alice, menu);
  c.e.intrusion(Party::Bob, menu);

  std::vector<bool> ok(p.n, true);
  for (std::size_t i = 0; i < p.n; ++i) {
    ok[i] = c.w.holds(Party::Alice, {serials[i], 0}) && c.w.holds(Party::Bob, {serials[i], 1});
  }
  std::vector<std::optional<Bit>> a(p.n), b(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    if (!ok[i]) continue;
    a[i] = open_rcp(c.w, Party::Alice, {serials[i], 0}, c.rng, c.sc.rcp);
    b[i] = open_rcp(c.w, Party::Bob, {serials[i], 1}, c.rng, c.sc.rcp);
  }
  c.e.record_op(Party::Alice, "open_all", {{"pairs", p.n}});
  c.e.record_op(Party::Bob, "open_all", {{"pairs", p.n}});
  std::vector<std::size_t> discard;
  for (std::size_t i = 0; i < p.n; ++i) {
    if (!ok[i] || !a[i] || !b[i]) discard.push_back(i);
  }
  c.e.send(Party::Alice, Party::Bob, {{"discard", to_array(discard)}});
  c.e.send(Party::Bob, Party::Alice, {{"discard", to_array(discard)}});
  out.stats["discarded"] = static_cast<std::int64_t>(discard.size());
  out.stats["tamper_evidence"] = !discard.empty();
  if (static_cast<double>(discard.size()) > p.max_discard_fraction * static_cast<double>(p.n)) {
    out.verdict = abort_with(AbortReason::TamperDetected, std::to_string(discard.size()) + " pairs discarded");
    return out;
  }
  BitString ka, kb;
  std::vector<std::optional<Bit>> eve;
  for (std::size_t i = 0; i < p.n; ++i) {
    if (std::find(discard.begin(), discard.end(), i) != discard.end()) continue;
    ka.push_back(*a[i]);
    kb.push_back(*b[i]);
    eve.push_back(known(c.e, serials[i]));
  }
  finish_key(c, out, ka, kb, eve, 0, true);
  return out;
}

}  // namespace

RunResult run(const Scenario& sc, Adversary& eve, RandomSource& rng, bool record_transcript) {
  validate(sc);
  Engine engine(sc.layout, sc.lockbox, sc.rcp, rng, eve, record_transcript);
  Ctx c{sc, engine, rng, engine.world()};
  ProtocolOutcome out;
  try {
    struct V {
      Ctx& c;
      ProtocolOutcome operator()(const KdCombination& p) { return kd_combination(c, p); }
      ProtocolOutcome operator()(const KdLbp& p) { return kd_lbp(c, p); }
      ProtocolOutcome operator()(const BcSingle& p) { return bc_single(c, p); }
      ProtocolOutcome operator()(const BcDual& p) { return bc_dual(c, p); }
      ProtocolOutcome operator()(const BcHarrow& p) { return bc_harrow(c, p); }
      ProtocolOutcome operator()(const KsLbpPlain& p) { return ks_lbp_plain(c, p); }
      ProtocolOutcome operator()(const KsReadOnce& p) { return ks_readonce(c, p); }
      ProtocolOutcome operator()(const KsSerialList& p) { return ks_serial_list(c, p); }
      ProtocolOutcome operator()(const KsRcp& p) { return ks_rcp(c, p); }
    };
    out = std::visit(V{c}, sc.protocol);
  } catch (const RuleViolation& v) {
    out.verdict = Abort{AbortReason::RuleViolation, v.offender(), v.what()};
  } catch (const SimError& err) {
    if (err.code() == Errc::InvalidArgument) throw;
    out.verdict = Abort{AbortReason::RuleViolation, engine.last_actor(), err.what()};
  }
  engine.finish(out);
  return {engine.take_transcript(), std::move(out)};
}

RunResult run(const Scenario& sc, Adversary& eve, std::uint64_t seed, bool record_transcript) {
  SeededRandom rng(seed);
  return run(sc, eve, rng, record_transcript);
}

SubsetEve::SubsetEve(EveAction action, std::size_t k, std::size_t total, std::size_t stride, unsigned combo_length)
    : action_(action), remaining_(std::min(k, total)), items_left_(total), stride_(std::max<std::size_t>(1, stride)),
      combo_length_(combo_length) {}

EveAction SubsetEve::decide(const EveView& view) {
  if (view.decision_index % stride_ != 0 || items_left_ == 0) return {};
  // selection sampling: every k-subset of the items is equally likely
  const bool pick = remaining_ > 0 && view.rng.choose(items_left_) < remaining_;
  --items_left_;
  if (!pick) return {};
  --remaining_;
  EveAction a = action_;
  if (a.kind == EveAction::Kind::TryOpen && combo_length_ > 0) {
    a.guess = static_cast<std::uint32_t>(view.rng.choose(std::uint64_t{1} << combo_length_));
  }
  return a;
}

std::string_view to_string(SplitVerdict v) {
  switch (v) {
    case SplitVerdict::ConcealmentBroken: return "Concealment-Broken";
    case SplitVerdict::BindingBroken: return "Binding-Broken";
    case SplitVerdict::Intact: return "Intact";
  }
  return "?";
}

namespace {

struct SplitWorld {
  Layout layout;
  World w{layout.graph};
  std::vector<Serial> serials;
  std::vector<ObjectRef> bobs;
};

std::unique_ptr<SplitWorld> commit_split(const std::vector<Party>& holders, Bit b, std::uint64_t seed) {
  if (holders.empty() || holders.size() % 2 != 0) throw SimError(Errc::InvalidArgument, "need two holders per pair");
  auto sw = std::make_unique<SplitWorld>();
  World& w = sw->w;
  const std::size_t n = holders.size() / 2;
  sw->serials = w.mint_serials(n, seed);
  w.place_party(Party::Alice, sw->layout.alice_lab);
  w.place_party(Party::Bob, sw->layout.bob_lab);
  w.place_party(Party::Eve, sw->layout.eve_post);
  for (std::size_t i = 0; i < n; ++i) {
    lbp::create_pair(w, Party::Alice, sw->serials[i], b);
    for (std::uint8_t h = 0; h < 2; ++h) {
      if (holders[2 * i + h] == Party::Bob) sw->bobs.push_back({sw->serials[i], h});
    }
  }
  w.travel(Party::Alice, sw->bobs, sw->layout.bob_lab);
  for (const auto& r : sw->bobs) w.transfer_custody(Party::Alice, r, Party::Bob);
  w.travel(Party::Alice, {}, sw->layout.alice_lab);
  return sw;
}

}  // namespace

bool lbp_bob_reads(const std::vector<Party>& holders, Bit b, std::uint64_t seed, std::string* witness) {
  auto sw = commit_split(holders, b, seed);
  for (std::size_t i = 0; i < sw->serials.size(); ++i) {
    const int v = lbp::value_op(sw->w, Party::Bob, sw->serials[i]);
    if (v == 1 + b) {
      if (witness) *witness = "Bob reads pair " + std::to_string(i) + ": value " + std::to_string(v);
      return true;
    }
  }
  return false;
}

bool lbp_alice_flips(const std::vector<Party>& holders, Bit b, std::uint64_t seed, std::string* witness) {
  auto sw = commit_split(holders, b, seed);
  World& w = sw->w;
  const std::size_t n = sw->serials.size();
  std::vector<std::int64_t> before, after;
  for (const auto& r : sw->bobs) before.push_back(lbp::half_serial(w, Party::Bob, r));
  for (std::size_t i = 0; i < n; ++i) {
    const bool mine = holders[2 * i] == Party::Alice || holders[2 * i + 1] == Party::Alice;
    if (!mine) return false;
    lbp::flip_op(w, Party::Alice, sw->serials[i]);
  }
  for (const auto& r : sw->bobs) after.push_back(lbp::half_serial(w, Party::Bob, r));
  const auto held = w.held_here(Party::Alice);
  w.travel(Party::Alice, held, sw->layout.bob_lab);
  for (const auto& r : held) w.transfer_custody(Party::Alice, r, Party::Bob);
  bool ok = before == after;
  for (std::size_t i = 0; i < n; ++i) {
    ok = ok && lbp::serial_op(w, Party::Bob, sw->serials[i]) == static_cast<std::int64_t>(sw->serials[i]) &&
         lbp::value_op(w, Party::Bob, sw->serials[i]) == 1 + (1 - b);
  }
  if (ok && witness) {
    *witness = "Alice flips all " + std::to_string(n) + " pairs at her halves; Bob opens " + std::to_string(1 - b);
  }
  return ok;
}

SplitResult bc_lbp_split(const std::vector<Party>& holders, Bit b, std::uint64_t seed) {
  SplitResult res{holders, SplitVerdict::Intact, {}};
  if (lbp_bob_reads(holders, b, seed, &res.witness)) {
    res.verdict = SplitVerdict::ConcealmentBroken;
  } else if (lbp_alice_flips(holders, b, seed, &res.witness)) {
    res.verdict = SplitVerdict::BindingBroken;
  }
  return res;
}

std::vector<SplitResult> bc_lbp_nogo(std::size_t n, std::uint64_t seed) {
  std::vector<SplitResult> out;
  for (std::uint32_t mask = 0; mask < (1u << (2 * n)); ++mask) {
    std::vector<Party> holders;
    for (std::size_t h = 0; h < 2 * n; ++h) holders.push_back((mask >> h) & 1u ? Party::Bob : Party::Alice);
    out.push_back(bc_lbp_split(holders, static_cast<Bit>(mask & 1u), derive_seed(seed, mask)));
  }
  return out;
}

std::string TrivialProtocol::describe() const {
  static const char* names[] = {"send 0", "send 1", "send r", "send not r", "send parity(s0)", "ship box 0",
                                "ship box 1"};
  std::ostringstream os;
  os << "moves=[";
  for (std::size_t i = 0; i < moves.size(); ++i) os << (i ? ", " : "") << names[moves[i]];
  os << "] bob_table=" << bob_table << " alice_table=" << alice_table;
  return os.str();
}

namespace {

/// Bob's view bit for one move, given Alice's private bit and the serial parities.
Bit view_bit(int move, Bit r, Bit p0, Bit p1) {
  switch (move) {
    case 0: return 0;
    case 1: return 1;
    case 2: return r;
    case 3: return 1 - r;
    case 4: return p0;
    case 5: return p0;
    default: return p1;
  }
}

std::uint64_t seed_with_parity(Bit parity) {
  for (std::uint64_t seed = 0;; ++seed) {
    Layout layout;
    World w(layout.graph);
    if (w.mint_serials(1, seed)[0] % 2 == parity) return seed;
  }
}

struct Replay {
  std::uint32_t bob_view = 0;
  std::uint32_t eve_view = 0;
  bool eve_saw_everything = false;
};

/// Runs the moves through the engine and reads Eve's view off the
/// Eve-visible transcript.
Replay replay_trivial(const std::vector<int>& moves, Bit r, Bit p0) {
  Scenario sc;
  SeededRandom rng(0);
  PassiveAdversary eve;
  Engine e(sc.layout, sc.lockbox, sc.rcp, rng, eve, true);
  const auto serials = e.init(2, seed_with_parity(p0));
  for (Serial s : serials) create_trivial(e.world(), Party::Alice, s);
  const Bit p1 = serials[1] % 2;
  Replay rep;
  const std::vector<EveAction> menu{EveAction{}};
  for (std::size_t round = 0; round < moves.size(); ++round) {
    const int mv = moves[round];
    Bit seen;
    if (mv < 5) {
      const Bit g = view_bit(mv, r, p0, p1);
      e.send(Party::Alice, Party::Bob, {{"bit", g}});
      seen = g;
    } else {
      const ObjectRef ref{serials[mv - 5], 0};
      const auto got = e.ship(Party::Alice, Party::Bob, std::span(&ref, 1), menu);
      seen = serial_of(e.world(), Party::Bob, got[0]) % 2;
    }
    rep.bob_view |= std::uint32_t{seen} << round;
  }
  std::size_t round = 0;
  for (const auto& ev : e.transcript().eve_view()) {
    if (ev.kind == "msg" && ev.payload["body"].contains("bit")) {
      rep.eve_view |= ev.payload["body"]["bit"].get<std::uint32_t>() << round++;
    } else if (ev.kind == "custody" && ev.payload["to"] == "Eve") {
      rep.eve_view |= static_cast<std::uint32_t>(ev.payload["serial"].get<Serial>() % 2) << round++;
    }
  }
  rep.eve_saw_everything = round == moves.size();
  return rep;
}

}  // namespace

TrivialVerdict kd_trivial_impossible(std::size_t rounds) {
  if (rounds > 2) throw SimError(Errc::InvalidArgument, "trivial-theory enumeration supports at most 2 rounds");
  TrivialVerdict v;
  v.witness = "Eve applies Bob's key table to the bits and serial parities she sees on the channel";
  std::size_t move_count = 1;
  for (std::size_t i = 0; i < rounds; ++i) move_count *= 7;
  const std::uint32_t views = 1u << rounds;
  std::map<std::tuple<std::size_t, Bit, Bit>, Replay> cache;

  for (std::size_t code = 0; code < move_count; ++code) {
    std::vector<int> moves;
    for (std::size_t i = 0, x = code; i < rounds; ++i, x /= 7) moves.push_back(static_cast<int>(x % 7));
    for (std::uint32_t bob_table = 0; bob_table < (1u << views); ++bob_table) {
      for (std::uint32_t alice_table = 0; alice_table < 256; ++alice_table) {
        ++v.protocols_enumerated;
        // serials are consecutive, so the two parities always differ
        bool correct = true;
        for (Bit r = 0; r < 2 && correct; ++r) {
          for (Bit p0 = 0; p0 < 2 && correct; ++p0) {
            const Bit p1 = 1 - p0;
            std::uint32_t view = 0;
            for (std::size_t i = 0; i < rounds; ++i) view |= std::uint32_t{view_bit(moves[i], r, p0, p1)} << i;
            const Bit ka = (alice_table >> (r + 2 * p0 + 4 * p1)) & 1u;
            const Bit kb = (bob_table >> view) & 1u;
            correct = ka == kb;
          }
        }
        if (!correct) continue;
        ++v.correct_protocols;
        bool eve_wins = true;
        for (Bit r = 0; r < 2; ++r) {
          for (Bit p0 = 0; p0 < 2; ++p0) {
            auto key = std::make_tuple(code, r, p0);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, replay_trivial(moves, r, p0)).first;
            const Bit ka = (alice_table >> (r + 2 * p0 + 4 * (1 - p0))) & 1u;
            const Bit ke = (bob_table >> it->second.eve_view) & 1u;
            eve_wins = eve_wins && it->second.eve_saw_everything && ke == ka;
          }
        }
        if (eve_wins) ++v.eve_successes;
        else if (v.counterexamples.size() < 8) v.counterexamples.push_back({moves, bob_table, alice_table});
      }
    }
  }
  v.impossible = v.correct_protocols > 0 && v.eve_successes == v.correct_protocols;
  return v;
}

}  // namespace lockbox
