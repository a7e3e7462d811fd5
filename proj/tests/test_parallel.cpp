#include <doctest.h>

#include <cmath>

#include "ttlcache/adversary.hpp"
#include "ttlcache/analytic.hpp"
#include "ttlcache/multifile.hpp"
#include "ttlcache/parallel.hpp"
#include "ttlcache/trace_io.hpp"

using namespace ttlcache;

namespace {

struct ThreadScope {
  explicit ThreadScope(int n) { set_thread_count(n); }
  ~ThreadScope() { set_thread_count(0); }
};

}  // namespace

TEST_CASE("thread count control") {
  ThreadScope scope(3);
  CHECK(thread_count() == 3);
}

TEST_CASE("sweep is identical in both modes") {
  const auto legend = default_legend(1.0, 1.0);
  const auto rates = log_grid(1e-2, 1e3, 301);
  for (int threads : {1, 4}) {
    ThreadScope scope(threads);
    for (const auto& fam : {DistributionFamily::exponential(), DistributionFamily::pareto(1.5)}) {
      const auto s = ratio_sweep(fam, 1.0, legend, rates, Execution::Serial);
      const auto p = ratio_sweep(fam, 1.0, legend, rates, Execution::Parallel);
      CHECK(s.rows == p.rows);
    }
  }
}

TEST_CASE("adversary search is identical in both modes") {
  const auto p = PolicySpec::dual_window_2nd(1.0, 1.0);
  const auto serial = random_adversary_search(p, CostParams(1.0), 2000, 7, Execution::Serial);
  for (int threads : {1, 3}) {
    ThreadScope scope(threads);
    const auto par = random_adversary_search(p, CostParams(1.0), 2000, 7, Execution::Parallel);
    CHECK(par.worst_ratio == serial.worst_ratio);
    CHECK(par.worst_trial == serial.worst_trial);
    CHECK(par.worst_ratio_excluding_tail == serial.worst_ratio_excluding_tail);
  }
}

TEST_CASE("multi-file simulation is identical in both modes") {
  const ZipfCatalog cat(2000, 1.0, 500.0, DistributionFamily::exponential());
  const auto trace = generate_zipf_trace(cat, 20.0, 13);
  const std::vector<PolicySpec> ps{PolicySpec::always_on_mth(1, 1.0), PolicySpec::single_window_mth(2, 1.0)};
  const auto s = simulate_multifile(trace, ps, CostParams(1.0), PopularityBands{}, {}, Execution::Serial);
  for (int threads : {1, 4}) {
    ThreadScope scope(threads);
    const auto p = simulate_multifile(trace, ps, CostParams(1.0), PopularityBands{}, {}, Execution::Parallel);
    CHECK(p.band_costs == s.band_costs);
    CHECK(p.totals == s.totals);
    CHECK(p.offline == s.offline);
  }
}

TEST_CASE("multi-file analytic sums agree across modes") {
  const ZipfCatalog cat(100'000, 1.0, 100'000.0, DistributionFamily::erlang(2));
  const auto legend = default_legend(1.0, 1.0);
  const auto s = analytic_multifile_costs(cat, 1.0, legend, Execution::Serial);
  MultifileAnalytic first;
  for (int threads : {1, 4}) {
    ThreadScope scope(threads);
    const auto p = analytic_multifile_costs(cat, 1.0, legend, Execution::Parallel);
    if (threads == 1) first = p;
    CHECK(p.totals == first.totals);
    for (std::size_t j = 0; j < legend.size(); ++j) {
      CHECK(std::abs(p.totals[j] - s.totals[j]) <= 1e-12 * std::abs(s.totals[j]));
    }
    CHECK(std::abs(p.offline_total - s.offline_total) <= 1e-12 * s.offline_total);
  }
}
