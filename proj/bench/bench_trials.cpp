#include <benchmark/benchmark.h>

#include <omp.h>

#include "lockbox/trials.hpp"

using namespace lockbox;

namespace {

Scenario scenario(int which) {
  Scenario sc;
  if (which == 0) {
    sc.theory = Theory::Lbp;
    sc.protocol = KdLbp{10, 5};
  } else {
    sc.theory = Theory::LbpReadOnce;
    sc.protocol = KsReadOnce{20, 5, 0};
  }
  return sc;
}

EveFactory eve(int which) {
  if (which == 0) return [] { return std::make_unique<SubsetEve>(EveAction{EveAction::Kind::Flip, 0}, 2, 10, 2); };
  return [] { return std::make_unique<SubsetEve>(EveAction{EveAction::Kind::Value, 0}, 4, 20); };
}

void BM_Serial(benchmark::State& st) {
  const auto sc = scenario(static_cast<int>(st.range(0)));
  const auto e = eve(static_cast<int>(st.range(0)));
  const auto n = static_cast<std::size_t>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(run_trials_serial(sc, e, 1, n));
  st.SetItemsProcessed(st.iterations() * st.range(1));
}

void BM_Parallel(benchmark::State& st) {
  const auto sc = scenario(static_cast<int>(st.range(0)));
  const auto e = eve(static_cast<int>(st.range(0)));
  const auto n = static_cast<std::size_t>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(run_trials_parallel(sc, e, 1, n));
  st.SetItemsProcessed(st.iterations() * st.range(1));
  st.counters["threads"] = omp_get_max_threads();
}

// arg 0: 0 = kd_lbp flip-2, 1 = ks_readonce read-4; arg 1: trials
BENCHMARK(BM_Serial)->ArgsProduct({{0, 1}, {1000, 10000}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Parallel)->ArgsProduct({{0, 1}, {1000, 10000}})->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
