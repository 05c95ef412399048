// Prints one PASS/FAIL line per acceptance criterion; exit status is the
// number of failures.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <unistd.h>

#include "lockbox/lbp.hpp"
#include "lockbox/privacy.hpp"
#include "lockbox/search.hpp"
#include "lockbox/trials.hpp"

using namespace lockbox;
using K = EveAction::Kind;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string ratio(const Rational& r) {
  std::ostringstream os;
  os << numerator(r) << "/" << denominator(r);
  return os.str();
}

Scenario make(Theory t, ProtocolParams p) {
  Scenario sc;
  sc.theory = t;
  sc.protocol = p;
  return sc;
}

/// Acts on exactly one decision index.
class IndexEve final : public Adversary {
 public:
  IndexEve(std::size_t index, EveAction a) : index_(index), action_(a) {}
  EveAction decide(const EveView& v) override { return v.decision_index == index_ ? action_ : EveAction{}; }

 private:
  std::size_t index_;
  EveAction action_;
};

// 1 ------------------------------------------------------------------------

void c1_truth_tables(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  using namespace lbp;
  // realizable (x==x1, x==x2, x1==x2) classes and their hand-derived rows:
  // serial in units of s, value as (1+b) or 0, flip: toggles / throws
  struct Row {
    Location x, x1, x2;
    int serial, value_on;
    int flip;  // 1 toggles, -1 throws
  };
  const Row rows[] = {
      {0, 0, 0, 1, 1, 1}, {0, 0, 1, 1, 0, 1}, {1, 0, 1, 1, 0, 1}, {2, 0, 0, 0, 0, -1}, {2, 0, 1, 0, 0, -1},
  };
  std::size_t cases = 0;
  for (const Row& r : rows) {
    for (Bit b : {Bit{0}, Bit{1}}) {
      PairState st{b, 7, r.x1, r.x2};
      c.require(serial_op(st, r.x) == 7 * r.serial, "pair serial");
      c.require(value_op(st, r.x) == (r.value_on ? 1 + b : 0), "pair value");
      bool threw = false;
      try {
        flip_op(st, r.x);
      } catch (const SimError&) {
        threw = true;
      }
      c.require(threw == (r.flip < 0), "pair flip support");
      c.require(st.b == (r.flip > 0 ? 1 - b : b), "pair flip value");
      cases += 3;
    }
  }
  // local form: (x==xi) for serial/flip, (x==xi, x==xj) for value, over bi, bj
  for (int at_i : {0, 1}) {
    for (int at_j : {0, 1}) {
      for (Bit bi : {Bit{0}, Bit{1}}) {
        for (Bit bj : {Bit{0}, Bit{1}}) {
          const BoxHalf hi{bi, 7, static_cast<Location>(at_i ? 0 : 1)};
          const BoxHalf hj{bj, 7, static_cast<Location>(at_j ? 0 : 2)};
          c.require(value_op(hi, hj, 0) == (at_i && at_j ? 1 + (bi ^ bj) : 0), "local value");
          ++cases;
          if (at_j == 0 && bj == 0) {
            c.require(serial_op(hi, 0) == (at_i ? 7 : 0), "local serial");
            BoxHalf h = hi;
            flip_op(h, 0);
            c.require(h.b == (at_i ? 1 - bi : bi), "local flip");
            cases += 2;
          }
        }
      }
    }
  }
  const double s = seconds_since(t0);
  c.require(s < 1.0, "runtime");
  c.note << cases << " cases, " << s << " s";
}

// 2 ------------------------------------------------------------------------

void c2_equivalence(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t agree = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) agree += lbp::equivalence_oracle(3, 4, seed);
  const double s = seconds_since(t0);
  c.require(agree == 100, "agreement");
  c.require(s < 30.0, "runtime");
  c.note << agree << "/100 seeds agree, 3 locations, sequences <= 4, " << s << " s";
}

// 3 ------------------------------------------------------------------------

void c3_kd_correct(Check& c) {
  const EveFactory passive = [] { return std::make_unique<PassiveAdversary>(); };
  for (const auto& sc : {make(Theory::Combination, KdCombination{8, 3}), make(Theory::Lbp, KdLbp{8, 3})}) {
    const auto s = run_trials_parallel(sc, passive, 3, 1000);
    const double agree = s.accepted ? static_cast<double>(s.keys_equal) / static_cast<double>(s.accepted) : 0.0;
    c.require(agree == 1.0 && s.accepted == s.trials, protocol_name(sc.protocol) + " agreement");
    c.require(s.aborted == 0, protocol_name(sc.protocol) + " aborts");
    c.note << protocol_name(sc.protocol) << " agree=" << agree << " abort=" << s.rate(s.aborted) << "; ";
  }
}

// 4 ------------------------------------------------------------------------

void c4_detection(Check& c) {
  const Rational lbp_oracle = 1 - hypergeometric_pmf(10, 2, 5, 0);
  c.require(lbp_oracle == Rational(7, 9), "7/9 oracle");
  // each opened box is either guessed (2^-8) or garbled and then fails a
  // test with probability 1/2
  const Rational q = (1 - Rational(1, 256)) / 2;
  Rational combo_oracle = 0;
  for (std::size_t j = 0; j <= 2; ++j) {
    Rational miss = 1;
    for (std::size_t i = 0; i < j; ++i) miss *= 1 - q;
    combo_oracle += hypergeometric_pmf(10, 2, 5, j) * (1 - miss);
  }
  const auto lbp = run_trials_parallel(
      make(Theory::Lbp, KdLbp{10, 5}),
      [] { return std::make_unique<SubsetEve>(EveAction{K::Flip, 0}, 2, 10, 2); }, 4, 10000);
  const auto combo = run_trials_parallel(
      make(Theory::Combination, KdCombination{10, 5}),
      [] { return std::make_unique<SubsetEve>(EveAction{K::TryOpen, 0}, 2, 10, 1, 8); }, 4, 10000);
  const double d1 = lbp.detection_rate(), d2 = combo.detection_rate();
  c.require(std::abs(d1 - to_double(lbp_oracle)) <= 0.02, "kd_lbp flip-2");
  c.require(std::abs(d2 - to_double(combo_oracle)) <= 0.02, "kd_combination open-2");
  c.note << "kd_lbp " << d1 << " vs " << ratio(lbp_oracle) << "; kd_combination " << d2 << " vs "
         << ratio(combo_oracle) << " = " << to_double(combo_oracle);
}

// 5 ------------------------------------------------------------------------

void c5_commitment(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  PassiveAdversary none;
  auto opened = [&](Scenario sc, Bit want) {
    return search::exact_probability([&](RandomSource& r) {
      const auto o = run(sc, none, r, false).outcome;
      const auto* v = std::get_if<CommitmentOpened>(&o.verdict);
      return v && v->accepted && v->bit == want;
    });
  };
  // bc_single: honest opens are accepted, and the best cheat is a coin
  Rational honest = 1;
  for (Bit b : {Bit{0}, Bit{1}}) {
    auto sc = make(Theory::Combination, BcSingle{b});
    sc.lockbox.combo_length = 3;
    honest = std::min(honest, opened(sc, b));
  }
  Scenario cheat = make(Theory::Combination, BcSingle{0});
  cheat.lockbox.combo_length = 3;
  cheat.alice = Behavior::Adversarial;
  const auto bind = search::best_attack(search::ProtocolGame(cheat, search::Objective::Equivocation), 1);
  c.require(honest == 1 && bind.probability <= Rational(1, 2), "bc_single");
  c.note << "bc_single honest=" << ratio(honest) << " cheat=" << ratio(bind.probability) << "; ";

  // bc_dual: one committed state opens either way
  Rational dual = 1;
  for (Bit b : {Bit{0}, Bit{1}}) {
    for (Bit target : {Bit{0}, Bit{1}}) {
      auto sc = make(Theory::Dual, BcDual{b});
      sc.lockbox.combo_length = 3;
      sc.alice = target ? Behavior::OpenAs1 : Behavior::OpenAs0;
      dual = std::min(dual, opened(sc, target));
    }
  }
  c.require(dual == 1, "bc_dual");
  c.note << "bc_dual open-to-either=" << ratio(dual) << "; ";

  // bc_harrow: every branch of Bob's choices (and all combinations)
  Rational accept = 1, reject = 1;
  for (std::size_t k = 1; k <= 4; ++k) {
    for (unsigned len : {1u, 3u}) {
      if (len == 3 && k > 2) continue;
      for (Bit v : {Bit{0}, Bit{1}}) {
        auto sc = make(Theory::Dual, BcHarrow{k, v});
        sc.lockbox.combo_length = len;
        accept = std::min(accept, opened(sc, v));
        sc.alice = Behavior::ClaimFlip;
        reject = std::min(reject, search::exact_probability([&](RandomSource& r) {
                            const auto o = run(sc, none, r, false).outcome;
                            const auto* a = std::get_if<Abort>(&o.verdict);
                            return a && a->reason == AbortReason::OpenRejected;
                          }));
      }
    }
  }
  c.require(accept == 1 && reject == 1, "bc_harrow");
  c.note << "bc_harrow k<=4 accept=" << ratio(accept) << " flip-reject=" << ratio(reject) << "; ";

  std::size_t broken = 0, total = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto splits = bc_lbp_nogo(n, n);
    c.require(splits.size() == (std::size_t{1} << (2 * n)), "split count");
    total += splits.size();
    for (const auto& s : splits) broken += s.verdict != SplitVerdict::Intact;
  }
  c.require(broken == total, "bc_lbp_nogo");
  const double s = seconds_since(t0);
  c.require(s < 120.0, "runtime");
  c.note << "bc_lbp_nogo " << broken << "/" << total << " broken; " << s << " s";
}

// 6 ------------------------------------------------------------------------

void c6_storage(Check& c) {
  const auto plain = run_trials_parallel(make(Theory::Lbp, KsLbpPlain{5}),
                                         [] { return std::make_unique<ConstantEve>(EveAction{K::Value, 0}); }, 6, 1000);
  c.require(plain.detected == 0 && plain.eve_knows_key == plain.trials, "ks_lbp_plain");
  c.note << "ks_lbp_plain detected " << plain.detected << "/1000, Eve knows key " << plain.eve_knows_key << "; ";

  const Rational oracle = 1 - Rational(binomial(16, 5), binomial(20, 5));
  const auto ro = run_trials_parallel(
      make(Theory::LbpReadOnce, KsReadOnce{20, 5, 0}),
      [] { return std::make_unique<SubsetEve>(EveAction{K::Value, 0}, 4, 20); }, 6, 10000);
  c.require(std::abs(ro.detection_rate() - to_double(oracle)) <= 0.02, "ks_readonce");
  c.note << "ks_readonce " << ro.detection_rate() << " vs " << ratio(oracle) << "; ";

  Rational serial_list = 1;
  for (std::size_t i = 0; i < 4; ++i) {
    serial_list = std::min(serial_list, search::exact_probability([&](RandomSource& r) {
                             IndexEve eve(i, {K::Value, 0});
                             return run(make(Theory::LbpReadOnce, KsSerialList{4}), eve, r, false).outcome.detected();
                           }));
  }
  c.require(serial_list == 1, "ks_serial_list");
  c.note << "ks_serial_list single read detected " << ratio(serial_list) << "; ";

  auto rcp = make(Theory::Rcp, KsRcp{3, 1.0});
  rcp.privacy_amplification = false;
  const auto passive = search::exact_probability([&](RandomSource& r) {
    PassiveAdversary none;
    const auto o = run(rcp, none, r, false).outcome;
    return o.accepted() && o.keys_equal() && o.key_length() == 3;
  });
  Rational nulled = 1;
  for (std::size_t i = 0; i < 6; ++i) {
    nulled = std::min(nulled, search::exact_probability([&](RandomSource& r) {
                        IndexEve eve(i, {K::OpenRcp, 0});
                        const auto o = run(rcp, eve, r, false).outcome;
                        return o.stats.at("discarded") == 1 && o.key_length() == 2;
                      }));
  }
  c.require(passive == 1 && nulled == 1, "ks_rcp");
  c.note << "ks_rcp passive equal keys " << ratio(passive) << ", read -> null " << ratio(nulled);
}

// 7 ------------------------------------------------------------------------

void c7_trivial(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto v = kd_trivial_impossible(1);
  const double s = seconds_since(t0);
  c.require(v.impossible && v.correct_protocols > 0 && v.eve_successes == v.correct_protocols && !v.witness.empty(),
            "verdict");
  c.require(s < 60.0, "runtime");
  c.note << "Impossible; Eve wins " << v.eve_successes << "/" << v.correct_protocols << " correct of "
         << v.protocols_enumerated << " protocols; " << s << " s";
}

// 8 ------------------------------------------------------------------------

void c8_search(Check& c) {
  std::size_t i = 0;
  for (const auto& cs : search::canned_searches()) {
    const auto a = search::best_attack(*cs.game, cs.horizon);
    const auto mc = search::monte_carlo(*cs.game, a.best, cs.horizon, 10000, derive_seed(8, i++));
    const bool value_ok = cs.is_bound ? a.probability <= cs.expected : a.probability == cs.expected;
    c.require(value_ok, cs.name + " value " + ratio(a.probability));
    c.require(search::within_three_sigma(a.probability, mc), cs.name + " monte carlo");
    if (cs.name == "kd_lbp_full_key") c.require(a.probability == 0, "kd_lbp N=2 full key");
    c.note << cs.name << "=" << ratio(a.probability) << "~" << mc.mean() << " ";
  }
}

// 9 ------------------------------------------------------------------------

void c9_privacy(Check& c) {
  SeededRandom rng(9);
  std::size_t linear = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.choose(32), l = rng.choose(n + 1);
    const auto h = pa::random_hash(rng, l, n);
    BitString x(n), y(n), z(n);
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = rng.bit();
      y[j] = rng.bit();
      z[j] = x[j] ^ y[j];
    }
    const auto hx = pa::apply(x, h), hy = pa::apply(y, h), hz = pa::apply(z, h);
    bool ok = true;
    for (std::size_t j = 0; j < l; ++j) ok &= hz[j] == (hx[j] ^ hy[j]);
    linear += ok;
  }
  const auto u = pa::uniformity_check(4, 2, 2);
  const BitString bits{1, 0, 1, 1};
  const bool ident = pa::apply(bits, pa::identity(4)) == bits;
  const bool parity = pa::apply(bits, pa::HashSpec{4, 1, {1, 1, 1, 1}}) == BitString{1};
  c.require(linear == 1000, "linearity");
  c.require(u.holds, "uniformity");
  c.require(ident && parity, "examples");
  c.note << "linear " << linear << "/1000; uniformity worst " << ratio(u.worst_average_distance) << " <= " << u.bound
         << "; identity/parity exact";
}

// 10 -----------------------------------------------------------------------

void c10_determinism(Check& c) {
  const fs::path root = fs::temp_directory_path() / ("lockbox_accept_" + std::to_string(::getpid()));
  std::vector<std::pair<Scenario, EveFactory>> cases = {
      {make(Theory::Lbp, KdLbp{10, 5}), [] { return std::make_unique<SubsetEve>(EveAction{K::Flip, 0}, 2, 10, 2); }},
      {make(Theory::Combination, KdCombination{10, 5}),
       [] { return std::make_unique<SubsetEve>(EveAction{K::TryOpen, 0}, 2, 10, 1, 8); }},
      {make(Theory::LbpReadOnce, KsReadOnce{20, 5, 0}),
       [] { return std::make_unique<SubsetEve>(EveAction{K::Value, 0}, 4, 20); }},
      {make(Theory::Rcp, KsRcp{5, 0.25}), [] { return std::make_unique<PassiveAdversary>(); }},
      {make(Theory::Dual, BcHarrow{3, 1}), [] { return std::make_unique<PassiveAdversary>(); }},
  };
  std::size_t files = 0, same = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / std::to_string(k) / std::to_string(rep);
      fs::create_directories(dir);
      run_trials_parallel(cases[k].first, cases[k].second, 10, 50, [&](std::size_t i, const RunResult& r) {
        std::ofstream(dir / (std::to_string(i) + ".jsonl"), std::ios::binary) << r.transcript.to_jsonl();
      });
    }
    for (std::size_t i = 0; i < 50; ++i) {
      auto slurp = [&](int rep) {
        std::ifstream f(root / std::to_string(k) / std::to_string(rep) / (std::to_string(i) + ".jsonl"),
                        std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(f), {});
      };
      const auto a = slurp(0);
      ++files;
      same += !a.empty() && a == slurp(1);
    }
  }
  fs::remove_all(root);
  c.require(same == files, "byte identity");
  c.note << same << "/" << files << " transcript files identical across reruns";
}

}  // namespace

int main(int argc, char** argv) {
  // optional argument: run a single criterion by number
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  const std::pair<const char*, std::function<void(Check&)>> criteria[] = {
      {"operator truth tables", c1_truth_tables},
      {"local hidden-variable equivalence", c2_equivalence},
      {"key distribution correctness", c3_kd_correct},
      {"key distribution detection statistics", c4_detection},
      {"bit commitment matrix", c5_commitment},
      {"key storage matrix", c6_storage},
      {"trivial theory sterility", c7_trivial},
      {"adversary search exactness", c8_search},
      {"privacy amplification", c9_privacy},
      {"determinism", c10_determinism},
  };
  int failures = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    if (only && n != only) continue;
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.note << " [exception: " << e.what() << "]";
    }
    failures += !c.ok;
    std::printf("criterion %2d %s  %s: %s\n", n, c.ok ? "PASS" : "FAIL", name, c.note.str().c_str());
    std::fflush(stdout);
  }
  return failures;
}
