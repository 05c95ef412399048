#include "lockbox/search.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace lockbox::search {

std::uint64_t BranchingRandom::choose(std::uint64_t n) {
  if (n == 0) throw SimError(Errc::InvalidArgument, "choose(0)");
  if (pos_ < path_.size()) {
    if (path_[pos_].second != n) throw std::logic_error("branch replay diverged");
    return path_[pos_++].first;
  }
  path_.emplace_back(0, n);
  ++pos_;
  return 0;
}

bool BranchingRandom::advance() {
  // drop choices the last run did not reach, then tick the odometer
  path_.resize(pos_);
  while (!path_.empty()) {
    auto& [c, n] = path_.back();
    if (c + 1 < n) {
      ++c;
      pos_ = 0;
      return true;
    }
    path_.pop_back();
  }
  pos_ = 0;
  return false;
}

Rational BranchingRandom::probability() const {
  BigInt den = 1;
  for (std::size_t i = 0; i < pos_; ++i) den *= path_[i].second;
  return Rational(BigInt(1), den);
}

Rational exact_probability(const std::function<bool(RandomSource&)>& play) {
  BranchingRandom rng;
  Rational total = 0;
  do {
    rng.rewind();
    if (play(rng)) total += rng.probability();
  } while (rng.advance());
  return total;
}

std::size_t Game::observation_arity(const EveAction& a) const {
  switch (a.kind) {
    case EveAction::Kind::TryOpen:
    case EveAction::Kind::Value:
    case EveAction::Kind::OpenRcp: return 3;
    default: return 1;
  }
}

const Strategy::Choice* Strategy::find(const std::string& key) const {
  for (const auto& c : choices) {
    if (c.infoset == key) return &c;
  }
  return nullptr;
}

TableAdversary::TableAdversary(Strategy& strategy, std::size_t horizon, bool discover)
    : strategy_(strategy), horizon_(horizon), discover_(discover) {}

EveAction TableAdversary::decide(const EveView& view) {
  if (view.menu.empty()) throw SimError(Errc::InvalidArgument, "empty action menu");
  if (view.decision_index >= horizon_) {
    for (const auto& a : view.menu) {
      if (a.kind == EveAction::Kind::Pass) return a;
    }
    return view.menu.front();
  }
  std::string key = std::to_string(view.decision_index);
  for (const auto& h : view.history) {
    key += '\n';
    key += h;
  }
  if (const auto* c = strategy_.find(key)) {
    if (c->index >= view.menu.size()) throw std::logic_error("strategy index outside the menu");
    return view.menu[c->index];
  }
  if (discover_) {
    strategy_.choices.push_back({key, 0, std::vector<EveAction>(view.menu.begin(), view.menu.end())});
  }
  return view.menu.front();
}

BigInt strategy_bound(const Game& game, std::size_t horizon) {
  BigInt u = 1;
  const auto menu = game.menu();
  for (std::size_t h = 1; h <= horizon; ++h) {
    BigInt next = 0;
    for (const auto& a : menu) next += boost::multiprecision::pow(u, static_cast<unsigned>(game.observation_arity(a)));
    u = next;
  }
  return u;
}

std::size_t for_each_strategy(const Game& game, std::size_t horizon, std::size_t cap,
                              const std::function<void(const Strategy&, const Rational&)>& visit) {
  Strategy s;
  std::size_t count = 0;
  while (true) {
    TableAdversary adv(s, horizon, true);
    const Rational p = exact_probability([&](RandomSource& rng) { return game.play(rng, adv); });
    if (++count > cap) {
      throw SimError(Errc::BudgetExceeded, game.name() + ": more than " + std::to_string(cap) +
                                               " strategies (closed-form bound " +
                                               strategy_bound(game, horizon).str() + ")");
    }
    visit(s, p);
    std::size_t i = s.choices.size();
    bool moved = false;
    while (i > 0) {
      --i;
      if (s.choices[i].index + 1 < s.choices[i].menu.size()) {
        ++s.choices[i].index;
        s.choices.resize(i + 1);
        moved = true;
        break;
      }
    }
    if (!moved) return count;
  }
}

std::size_t count_strategies(const Game& game, std::size_t horizon, std::size_t cap) {
  return for_each_strategy(game, horizon, cap, [](const Strategy&, const Rational&) {});
}

Attack best_attack(const Game& game, std::size_t horizon, std::size_t cap) {
  Attack a;
  a.game = game.name();
  a.horizon = horizon;
  a.cap = cap;
  bool first = true;
  a.strategies = for_each_strategy(game, horizon, cap, [&](const Strategy& s, const Rational& p) {
    if (first || p > a.probability) {
      a.best = s;
      a.probability = p;
      first = false;
    }
  });
  return a;
}

Estimate monte_carlo(const Game& game, const Strategy& strategy, std::size_t horizon, std::size_t samples,
                     std::uint64_t seed) {
  Estimate e;
  e.samples = samples;
  Strategy copy = strategy;
  for (std::size_t i = 0; i < samples; ++i) {
    TableAdversary adv(copy, horizon, false);
    SeededRandom rng(derive_seed(seed, i));
    e.successes += game.play(rng, adv);
  }
  return e;
}

bool within_three_sigma(const Rational& p, const Estimate& e) {
  const double pd = to_double(p);
  if (p == 0 || p == 1) return e.mean() == pd;
  const double sigma = std::sqrt(pd * (1 - pd) / static_cast<double>(e.samples));
  return std::abs(e.mean() - pd) <= 3 * sigma;
}

ordered_json witness_json(const Attack& a, std::string_view objective) {
  ordered_json j;
  j["objective"] = objective;
  j["game"] = a.game;
  j["bounds"] = {{"horizon", a.horizon}, {"cap", a.cap}};
  j["strategies_searched"] = a.strategies;
  ordered_json strat = ordered_json::array();
  for (const auto& c : a.best.choices) {
    strat.push_back({{"infoset", c.infoset}, {"action", to_string(c.menu[c.index])}});
  }
  j["strategy"] = strat;
  j["probability"] = {{"num", numerator(a.probability).str()},
                      {"den", denominator(a.probability).str()},
                      {"value", to_double(a.probability)}};
  return j;
}

namespace {
constexpr std::pair<Objective, std::string_view> kObjectives[] = {
    {Objective::KeyUndetected, "key_undetected"},
    {Objective::Equivocation, "equivocation"},
    {Objective::Concealment, "concealment"},
    {Objective::UndetectedRead, "undetected_read"},
    {Objective::Detection, "detection"},
};

std::int64_t stat(const ProtocolOutcome& o, const std::string& k) {
  const auto it = o.stats.find(k);
  return it == o.stats.end() ? 0 : it->second;
}
}  // namespace

std::string_view to_string(Objective o) {
  for (const auto& [k, n] : kObjectives) {
    if (k == o) return n;
  }
  return "?";
}

Objective objective_from_string(std::string_view s) {
  for (const auto& [k, n] : kObjectives) {
    if (n == s) return k;
  }
  throw SimError(Errc::InvalidArgument, "unknown objective '" + std::string(s) + "'");
}

bool objective_met(Objective o, const ProtocolOutcome& out) {
  switch (o) {
    case Objective::KeyUndetected:
      return out.accepted() && !out.detected() && !out.eve_sifted.empty() && out.eve_knows_sifted();
    case Objective::Equivocation: {
      const auto* c = std::get_if<CommitmentOpened>(&out.verdict);
      return c && c->accepted && c->bit && *c->bit != stat(out, "committed_bit");
    }
    case Objective::Concealment: return stat(out, "bob_learned_bit") == 1;
    case Objective::UndetectedRead:
      return !out.aborted() && !out.detected() &&
             std::any_of(out.eve_sifted.begin(), out.eve_sifted.end(), [](const auto& b) { return b.has_value(); });
    case Objective::Detection: return out.detected();
  }
  return false;
}

std::string ProtocolGame::name() const { return protocol_name(sc_.protocol) + "/" + std::string(to_string(objective_)); }

std::vector<EveAction> ProtocolGame::menu() const {
  if (sc_.alice == Behavior::Adversarial) return {{EveAction::Kind::TryOpen, 0}, {EveAction::Kind::TryOpen, 1}};
  if (sc_.bob == Behavior::Adversarial) {
    std::vector<EveAction> m{{EveAction::Kind::Pass, 0}};
    for (std::uint32_t g = 0; g < (1u << sc_.lockbox.combo_length); ++g) m.push_back({EveAction::Kind::TryOpen, g});
    return m;
  }
  return eve_menu(sc_);
}

std::size_t ProtocolGame::observation_arity(const EveAction& a) const {
  if (sc_.alice == Behavior::Adversarial || sc_.bob == Behavior::Adversarial) return 1;
  return Game::observation_arity(a);
}

bool ProtocolGame::play(RandomSource& rng, Adversary& adversary) const {
  const auto r = run(sc_, adversary, rng, false);
  return objective_met(objective_, r.outcome);
}

std::vector<EveAction> LbpCommitGame::menu() const { return {{EveAction::Kind::Value, 0}, {EveAction::Kind::Flip, 0}}; }

bool LbpCommitGame::play(RandomSource& rng, Adversary& adversary) const {
  const std::size_t halves = 2 * n_;
  const auto mask = rng.choose(std::uint64_t{1} << halves);
  const Bit b = rng.bit();
  std::vector<Party> holders;
  std::string code;
  for (std::size_t h = 0; h < halves; ++h) {
    holders.push_back((mask >> h) & 1u ? Party::Bob : Party::Alice);
    code += (mask >> h) & 1u ? 'B' : 'A';
  }
  const std::vector<std::string> history{"split:" + code};
  const auto m = menu();
  const EveView view{history, m, 0, rng};
  const auto a = adversary.decide(view);
  if (a.kind == EveAction::Kind::Value) return lbp_bob_reads(holders, b, mask);
  return lbp_alice_flips(holders, b, mask);
}

std::vector<CannedSearch> canned_searches() {
  std::vector<CannedSearch> out;
  auto add = [&](std::string name, Scenario sc, Objective o, std::size_t horizon, Rational expected, bool bound) {
    sc.privacy_amplification = false;
    out.push_back({std::move(name), std::string(to_string(o)), std::make_shared<ProtocolGame>(std::move(sc), o),
                   horizon, expected, bound});
  };
  {
    Scenario sc;
    sc.theory = Theory::Lbp;
    sc.protocol = KdLbp{2, 1};
    add("kd_lbp_full_key", sc, Objective::KeyUndetected, 4, 0, false);
  }
  {
    Scenario sc;
    sc.theory = Theory::Combination;
    sc.lockbox.combo_length = 2;
    sc.protocol = KdCombination{2, 1};
    // every sifted bit needs a blind correct guess
    add("kd_combination_full_key", sc, Objective::KeyUndetected, 2, Rational(1, 4), true);
  }
  {
    Scenario sc;
    sc.theory = Theory::Combination;
    sc.lockbox.combo_length = 3;
    sc.protocol = BcSingle{0};
    sc.alice = Behavior::Adversarial;
    add("bc_single_binding", sc, Objective::Equivocation, 1, Rational(1, 2), false);
    sc.lockbox.destroyed_returns_marker = true;
    add("bc_single_binding_marker", sc, Objective::Equivocation, 1, 0, false);
  }
  {
    Scenario sc;
    sc.theory = Theory::Combination;
    sc.lockbox.combo_length = 3;
    sc.protocol = BcSingle{1};
    sc.bob = Behavior::Adversarial;
    add("bc_single_concealment", sc, Objective::Concealment, 1, Rational(1, 8), false);
  }
  {
    Scenario sc;
    sc.theory = Theory::Dual;
    sc.lockbox.combo_length = 3;
    sc.protocol = BcDual{0};
    sc.alice = Behavior::Adversarial;
    add("bc_dual_equivocation", sc, Objective::Equivocation, 1, 1, false);
  }
  {
    Scenario sc;
    sc.theory = Theory::Lbp;
    sc.protocol = KsLbpPlain{2};
    add("ks_lbp_plain_read", sc, Objective::UndetectedRead, 2, 1, false);
  }
  {
    Scenario sc;
    sc.theory = Theory::LbpReadOnce;
    sc.protocol = KsSerialList{2};
    add("ks_serial_list_read", sc, Objective::UndetectedRead, 2, 0, false);
  }
  {
    Scenario sc;
    sc.theory = Theory::Rcp;
    sc.protocol = KsRcp{2, 0.0};
    add("ks_rcp_read", sc, Objective::UndetectedRead, 4, 0, false);
  }
  out.push_back({"bc_lbp_nogo", "bob_reads_or_alice_flips", std::make_shared<LbpCommitGame>(1), 1, 1, false});
  return out;
}

}  // namespace lockbox::search
