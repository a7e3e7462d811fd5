#include <benchmark/benchmark.h>

#include "ttlcache/adversary.hpp"
#include "ttlcache/analytic.hpp"
#include "ttlcache/multifile.hpp"
#include "ttlcache/trace_io.hpp"

using namespace ttlcache;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_RatioSweep(benchmark::State& state) {
  const auto legend = default_legend(1.0, 1.0);
  const auto rates = log_grid(1e-2, 1e3, 2001);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ratio_sweep(DistributionFamily::erlang(4), 1.0, legend, rates, mode(state)));
  }
}

void BM_AdversarySearch(benchmark::State& state) {
  const auto p = PolicySpec::dual_window_2nd(1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(random_adversary_search(p, CostParams(1.0), 2000, 42, mode(state)));
  }
}

void BM_MultifileAnalytic(benchmark::State& state) {
  const ZipfCatalog cat(200'000, 1.0, 200'000.0, DistributionFamily::exponential());
  const auto legend = default_legend(1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(analytic_multifile_costs(cat, 1.0, legend, mode(state)));
}

void BM_MultifileSimulation(benchmark::State& state) {
  const ZipfCatalog cat(10'000, 1.0, 10'000.0, DistributionFamily::exponential());
  const auto trace = generate_zipf_trace(cat, 20.0, 1);
  const std::vector<PolicySpec> ps{PolicySpec::always_on_mth(1, 1.0), PolicySpec::always_on_mth(2, 1.0),
                                   PolicySpec::single_window_mth(2, 1.0), PolicySpec::dual_window_2nd(1.0, 1.0)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_multifile(trace, ps, CostParams(1.0), PopularityBands{}, SimulationOptions{}, mode(state)));
  }
}

}  // namespace

// Argument 0 runs the serial loop, 1 the OpenMP version.
BENCHMARK(BM_RatioSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdversarySearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultifileAnalytic)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultifileSimulation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
