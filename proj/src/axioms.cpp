#include "lockbox/axioms.hpp"

#include <sstream>

#include "lockbox/lbp.hpp"
#include "lockbox/search.hpp"
#include "lockbox/trials.hpp"

namespace lockbox {

std::string_view to_string(Column c) {
  switch (c) {
    case Column::NoBroadcast: return "no-broadcast";
    case Column::NoSignaling: return "no-signaling";
    case Column::NoBitCommitment: return "no-bit-commitment";
    case Column::KeyDistribution: return "key-distribution";
    case Column::KeyStorage: return "key-storage";
  }
  return "?";
}

std::string cell_text(Column c, Mark m) {
  if (m == Mark::NotApplicable) return "n/a";
  if (m == Mark::Yes) return "✓";
  const bool axiom = c == Column::NoBroadcast || c == Column::NoSignaling || c == Column::NoBitCommitment;
  return axiom ? "VIOLATED" : "✗";
}

namespace {

std::string ratio(const Rational& r) {
  std::ostringstream os;
  os << numerator(r) << "/" << denominator(r);
  return os.str();
}

AxiomCell yes(std::string w) { return {Mark::Yes, std::move(w)}; }
AxiomCell no(std::string w) { return {Mark::No, std::move(w)}; }

AxiomCell search_cell(const Scenario& base, search::Objective o, std::size_t horizon, bool want_zero,
                      const std::string& label) {
  Scenario sc = base;
  sc.privacy_amplification = false;
  const search::ProtocolGame g(sc, o);
  const auto a = search::best_attack(g, horizon);
  const std::string w = label + ": best " + std::string(search::to_string(o)) + " = " + ratio(a.probability) +
                        " over " + std::to_string(a.strategies) + " strategies";
  const bool zero = a.probability == 0;
  return zero == want_zero ? yes(w) : no(w);
}

/// Re-binding an existing serial must be refused by the registry.
AxiomCell duplicate_serial_cell(Theory t) {
  Layout layout;
  World w(layout.graph);
  const auto s = w.mint_serials(1, 0);
  w.place_party(Party::Alice, layout.alice_lab);
  try {
    switch (t) {
      case Theory::Trivial:
        create_trivial(w, Party::Alice, s[0]);
        create_trivial(w, Party::Alice, s[0]);
        break;
      case Theory::Rcp:
        create_rcp(w, Party::Alice, s[0]);
        create_rcp(w, Party::Alice, s[0]);
        break;
      default:
        lbp::create_pair(w, Party::Alice, s[0], 0, t == Theory::LbpReadOnce);
        lbp::create_pair(w, Party::Alice, s[0], 0, t == Theory::LbpReadOnce);
    }
  } catch (const SimError& e) {
    if (e.code() == Errc::DuplicateSerial) return yes("second object with serial " + std::to_string(s[0]) + " refused");
  }
  return no("duplicate serial accepted");
}

}  // namespace

std::vector<AxiomRow> axiom_matrix(std::uint64_t seed) {
  using O = search::Objective;
  std::vector<AxiomRow> rows;
  auto set = [](AxiomRow& r, Column c, AxiomCell cell) { r.cells[static_cast<std::size_t>(c)] = std::move(cell); };

  {
    AxiomRow r{"combination", {}};
    Scenario sc;
    sc.theory = Theory::Combination;
    sc.lockbox.combo_length = 3;
    sc.protocol = BcSingle{1};
    sc.bob = Behavior::Adversarial;
    const search::ProtocolGame peek(sc, O::Concealment);
    const auto read = search::best_attack(peek, 1);
    set(r, Column::NoBroadcast,
        read.probability <= Rational(1, 8)
            ? yes("bc_single c=3: best blind read of a box " + ratio(read.probability) + " (guess bound 1/8)")
            : no("blind read beats the guess bound"));
    sc.bob = Behavior::Honest;
    sc.alice = Behavior::Adversarial;
    const search::ProtocolGame bind(sc, O::Equivocation);
    const auto eq = search::best_attack(bind, 1);
    const bool commitment = read.probability <= Rational(1, 8) && eq.probability <= Rational(1, 2);
    const std::string w = "bc_single c=3: Bob reads " + ratio(read.probability) + ", Alice forces 1-b " +
                          ratio(eq.probability) + " (a garbled coin she cannot steer)";
    set(r, Column::NoBitCommitment, commitment ? no(w) : yes(w));
    Scenario kd;
    kd.theory = Theory::Combination;
    kd.lockbox.combo_length = 2;
    kd.protocol = KdCombination{2, 1};
    kd.privacy_amplification = false;
    const search::ProtocolGame steal(kd, O::KeyUndetected);
    const auto st = search::best_attack(steal, 2);
    Scenario honest;
    honest.theory = Theory::Combination;
    honest.protocol = KdCombination{8, 3};
    const auto passive = run_trials_serial(
        honest, [] { return std::make_unique<PassiveAdversary>(); }, seed, 200);
    const bool kd_ok = st.probability <= Rational(1, 4) && passive.accepted == passive.trials &&
                       passive.keys_equal == passive.accepted;
    set(r, Column::KeyDistribution,
        (kd_ok ? yes : no)("kd_combination: passive agreement " + std::to_string(passive.keys_equal) + "/" +
                           std::to_string(passive.trials) + "; N=2 m=1 c=2 best full-key theft " +
                           ratio(st.probability) + " <= 1/4"));
    rows.push_back(std::move(r));
  }
  {
    AxiomRow r{"dual", {}};
    Scenario sc;
    sc.theory = Theory::Dual;
    sc.lockbox.combo_length = 3;
    sc.protocol = BcDual{0};
    sc.alice = Behavior::Adversarial;
    const auto eq = search::best_attack(search::ProtocolGame(sc, O::Equivocation), 1);
    // multi-box commitment: honest opens accepted, flipped claims rejected
    std::size_t honest = 0, flipped = 0;
    const std::size_t runs = 64;
    for (std::size_t i = 0; i < runs; ++i) {
      Scenario h;
      h.theory = Theory::Dual;
      h.lockbox.combo_length = 3;
      h.protocol = BcHarrow{3, static_cast<Bit>(i % 2)};
      PassiveAdversary none;
      honest += run(h, none, derive_seed(seed, i), false).outcome.accepted();
      h.alice = Behavior::ClaimFlip;
      flipped += run(h, none, derive_seed(seed, i), false).outcome.aborted();
    }
    const bool harrow = honest == runs && flipped == runs;
    set(r, Column::NoBitCommitment,
        (harrow ? no : yes)("single box equivocates with probability " + ratio(eq.probability) +
                            "; bc_harrow k=3 honest accepted " + std::to_string(honest) + "/" +
                            std::to_string(runs) + ", flipped claim rejected " + std::to_string(flipped) + "/" +
                            std::to_string(runs)));
    rows.push_back(std::move(r));
  }
  for (Theory t : {Theory::Lbp, Theory::LbpReadOnce}) {
    AxiomRow r{std::string(to_string(t)), {}};
    set(r, Column::NoBroadcast, duplicate_serial_cell(t));
    set(r, Column::NoSignaling,
        lbp::no_signaling_check(3, 3) ? yes("remote sequences <= 3 on 3 locations leave the far half unchanged")
                                      : no("a remote operation changed the far half's readings"));
    std::size_t broken = 0, total = 0;
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const auto& s : bc_lbp_nogo(n, seed)) {
        ++total;
        broken += s.verdict != SplitVerdict::Intact;
      }
    }
    set(r, Column::NoBitCommitment,
        (broken == total ? yes : no)("bc_lbp_nogo n<=3: " + std::to_string(broken) + "/" + std::to_string(total) +
                                     " possession splits broken"));
    Scenario kd;
    kd.theory = t;
    kd.protocol = KdLbp{2, 1};
    set(r, Column::KeyDistribution, search_cell(kd, O::KeyUndetected, 4, true, "kd_lbp N=2 m=1"));
    Scenario ks;
    ks.theory = t;
    if (t == Theory::Lbp) {
      ks.protocol = KsLbpPlain{2};
      set(r, Column::KeyStorage, search_cell(ks, O::UndetectedRead, 2, true, "ks_lbp_plain n=2"));
    } else {
      ks.protocol = KsSerialList{2};
      set(r, Column::KeyStorage, search_cell(ks, O::UndetectedRead, 2, true, "ks_serial_list n=2"));
    }
    rows.push_back(std::move(r));
  }
  {
    AxiomRow r{"rcp", {}};
    set(r, Column::NoBroadcast, duplicate_serial_cell(Theory::Rcp));
    Scenario ks;
    ks.theory = Theory::Rcp;
    ks.protocol = KsRcp{2, 0.0};
    set(r, Column::KeyStorage, search_cell(ks, O::UndetectedRead, 4, true, "ks_rcp n=2"));
    rows.push_back(std::move(r));
  }
  {
    AxiomRow r{"trivial", {}};
    set(r, Column::NoBroadcast, duplicate_serial_cell(Theory::Trivial));
    // the only observable is the serial, whatever happened elsewhere
    {
      Layout layout;
      World w(layout.graph);
      const auto s = w.mint_serials(2, seed);
      w.place_party(Party::Alice, layout.alice_lab);
      w.place_party(Party::Bob, layout.bob_lab);
      create_trivial(w, Party::Alice, s[0]);
      create_trivial(w, Party::Bob, s[1]);
      const Serial before = serial_of(w, Party::Bob, {s[1], 0});
      w.travel(Party::Alice, std::vector<ObjectRef>{{s[0], 0}}, 2);
      const Serial after = serial_of(w, Party::Bob, {s[1], 0});
      set(r, Column::NoSignaling,
          (before == after ? yes : no)("a trivial box reads its serial " + std::to_string(after) +
                                       " regardless of remote activity"));
    }
    set(r, Column::NoBitCommitment,
        yes("a trivial box holds no value: Bob's view after commit is the same for b=0 and b=1"));
    const auto v = kd_trivial_impossible(1);
    set(r, Column::KeyDistribution,
        (v.impossible ? no : yes)("kd_trivial_impossible L=1: Eve recovers the key in " +
                                  std::to_string(v.eve_successes) + "/" + std::to_string(v.correct_protocols) +
                                  " correct protocols (" + v.witness + ")"));
    set(r, Column::KeyStorage, no("a trivial box stores no bit, so a stored key would sit in open memory"));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<std::pair<std::string, std::array<Mark, 5>>> expected_matrix() {
  constexpr Mark Y = Mark::Yes, N = Mark::No, A = Mark::NotApplicable;
  return {
      {"combination", {A, A, N, Y, A}},
      {"dual", {A, A, N, A, A}},
      {"lbp", {Y, Y, Y, Y, N}},
      {"lbp_read_once", {A, A, A, A, Y}},
      {"rcp", {A, A, A, A, Y}},
      {"trivial", {Y, Y, Y, N, N}},
  };
}

std::vector<std::string> matrix_mismatches(const std::vector<AxiomRow>& rows) {
  std::vector<std::string> bad;
  for (const auto& [theory, marks] : expected_matrix()) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const AxiomRow& r) { return r.theory == theory; });
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      if (marks[c] == Mark::NotApplicable) continue;
      if (it == rows.end() || it->cells[c].mark != marks[c]) bad.push_back(theory + "/" + std::string(to_string(kColumns[c])));
    }
  }
  return bad;
}

ordered_json to_json(const std::vector<AxiomRow>& rows) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json row;
    row["theory"] = r.theory;
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      row[std::string(to_string(kColumns[c]))] = {{"verdict", cell_text(kColumns[c], r.cells[c].mark)},
                                                  {"witness", r.cells[c].witness}};
    }
    out.push_back(row);
  }
  return out;
}

std::string render_table(const std::vector<AxiomRow>& rows) {
  std::ostringstream os;
  os << "theory";
  for (std::size_t i = 6; i < 16; ++i) os << ' ';
  for (Column c : kColumns) os << " | " << to_string(c);
  os << "\n";
  for (const auto& r : rows) {
    os << r.theory;
    for (std::size_t i = r.theory.size(); i < 16; ++i) os << ' ';
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      const std::string t = cell_text(kColumns[c], r.cells[c].mark);
      const std::size_t width = to_string(kColumns[c]).size();
      // ✓ and ✗ are one column wide but three bytes long
      const std::size_t shown = (t == "✓" || t == "✗") ? 1 : t.size();
      os << " | " << t;
      for (std::size_t i = shown; i < width; ++i) os << ' ';
    }
    os << "\n";
  }
  os << "\nwitnesses:\n";
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      if (r.cells[c].mark == Mark::NotApplicable) continue;
      os << "  " << r.theory << " / " << to_string(kColumns[c]) << ": " << r.cells[c].witness << "\n";
    }
  }
  return os.str();
}

}  // namespace lockbox
