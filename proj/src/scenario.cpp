#include "lockbox/config.hpp"

namespace lockbox {

bool is_analysis(const ScenarioConfig& cfg) {
  return cfg.protocol.name == "bc_lbp_nogo" || cfg.protocol.name == "kd_trivial_impossible";
}

Scenario to_scenario(const ScenarioConfig& cfg) {
  if (is_analysis(cfg)) throw SimError(Errc::InvalidArgument, cfg.protocol.name + " is not an engine protocol");
  Scenario sc;
  if (cfg.world.edges.empty()) {
    sc.layout.graph = LocationGraph::path(cfg.world.locations);
  } else {
    sc.layout.graph = LocationGraph(cfg.world.locations);
    for (const auto& [a, b] : cfg.world.edges) sc.layout.graph.add_edge(a, b);
  }
  sc.layout.alice_lab = cfg.world.alice_lab;
  sc.layout.eve_post = cfg.world.eve_post;
  sc.layout.bob_lab = cfg.world.bob_lab;
  sc.mint_seed = cfg.world.mint_seed;
  sc.theory = cfg.theory.name;
  sc.lockbox = {cfg.theory.combo_length, cfg.theory.destroyed_returns_marker};
  sc.rcp = {cfg.theory.consume_both_on_read};
  const auto& p = cfg.protocol;
  const auto bit = static_cast<Bit>(p.bit);
  if (p.name == "kd_combination") sc.protocol = KdCombination{p.N, p.m};
  else if (p.name == "kd_lbp") sc.protocol = KdLbp{p.N, p.m};
  else if (p.name == "bc_single") sc.protocol = BcSingle{bit};
  else if (p.name == "bc_dual_equivocation") sc.protocol = BcDual{bit};
  else if (p.name == "bc_harrow") sc.protocol = BcHarrow{p.k, static_cast<Bit>(p.v)};
  else if (p.name == "ks_lbp_plain") sc.protocol = KsLbpPlain{p.n};
  else if (p.name == "ks_readonce") sc.protocol = KsReadOnce{p.n, p.w, p.sigma};
  else if (p.name == "ks_serial_list") sc.protocol = KsSerialList{p.n};
  else if (p.name == "ks_rcp") sc.protocol = KsRcp{p.n, p.max_discard_fraction};
  else throw SimError(Errc::InvalidArgument, "unknown protocol '" + p.name + "'");
  sc.alice = p.alice;
  sc.bob = p.bob;
  sc.privacy_amplification = p.privacy_amplification;
  sc.pa_sigma = std::holds_alternative<KsReadOnce>(sc.protocol) ? p.sigma : 0;
  sc.leak = p.leak;
  sc.confidence = p.confidence;
  sc.eve_stock = p.eve_stock;
  return sc;
}

namespace {

using Items = std::pair<std::size_t, std::size_t>;

/// Items Eve gets a decision on, and decisions per item.
struct EveItems {
  Items operator()(const KdCombination& p) const { return {p.N, 1}; }
  Items operator()(const KdLbp& p) const { return {p.N, 2}; }
  Items operator()(const KsLbpPlain& p) const { return {p.n, 1}; }
  Items operator()(const KsReadOnce& p) const { return {p.n, 1}; }
  Items operator()(const KsSerialList& p) const { return {p.n, 1}; }
  Items operator()(const KsRcp& p) const { return {2 * p.n, 1}; }
  template <typename T>
  Items operator()(const T&) const {
    return {0, 1};
  }
};

Items eve_items(const Scenario& sc) { return std::visit(EveItems{}, sc.protocol); }

}  // namespace

EveFactory make_eve(const ScenarioConfig& cfg) {
  const auto& e = cfg.eve;
  if (e.strategy == "passive") return [] { return std::make_unique<PassiveAdversary>(); };
  if (e.strategy == "teleport") {
    return [] { return std::make_unique<ConstantEve>(EveAction{EveAction::Kind::Teleport, 0}); };
  }
  const EveAction action = parse_action(e.action);
  if (e.strategy == "constant") return [action] { return std::make_unique<ConstantEve>(action); };
  const Scenario sc = to_scenario(cfg);
  auto [items, stride] = eve_items(sc);
  if (e.total) items = e.total;
  const std::size_t count = e.count;
  const unsigned len = cfg.theory.combo_length;
  return [=] { return std::make_unique<SubsetEve>(action, count, items, stride, len); };
}

std::unique_ptr<search::Game> make_game(const ScenarioConfig& cfg) {
  if (cfg.protocol.name == "bc_lbp_nogo") return std::make_unique<search::LbpCommitGame>(cfg.protocol.n);
  if (is_analysis(cfg)) throw SimError(Errc::InvalidArgument, cfg.protocol.name + " has no search game");
  return std::make_unique<search::ProtocolGame>(to_scenario(cfg), cfg.search.objective);
}

}  // namespace lockbox
