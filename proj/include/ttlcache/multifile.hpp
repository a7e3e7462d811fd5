#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ttlcache/analytic.hpp"
#include "ttlcache/cost_model.hpp"
#include "ttlcache/distributions.hpp"
#include "ttlcache/parallel.hpp"
#include "ttlcache/policies.hpp"

namespace ttlcache {

// n files with Zipf popularity p_i = i^-gamma / H, each an independent IID
// request process of the given family with rate total_rate * p_i.
class ZipfCatalog {
 public:
  ZipfCatalog(std::size_t n_files, double gamma, double total_rate, DistributionFamily family);

  std::size_t n_files() const noexcept { return n_; }
  double gamma() const noexcept { return gamma_; }
  double total_rate() const noexcept { return total_rate_; }
  const DistributionFamily& family() const noexcept { return family_; }

  // 1-based file index; NotFoundError outside [1, n].
  double probability(std::size_t i) const;
  double file_rate(std::size_t i) const;
  Distribution per_file_distribution(std::size_t i) const;

 private:
  std::size_t n_;
  double gamma_;
  double total_rate_;
  DistributionFamily family_;
  double harmonic_;
};

// Files processed per parallel work unit in the analytic aggregation.
inline constexpr std::size_t kAggregationChunk = 8192;

struct MultifileAnalytic {
  std::vector<double> totals;  // sum over files of each legend entry's cost
  double offline_total = 0.0;

  double ratio(std::size_t entry) const { return totals[entry] / offline_total; }
};

// Per-file costs summed over the catalog. Serial keeps one running sum; Parallel
// sums fixed chunks of kAggregationChunk files and adds the chunk sums in
// order, so its result does not depend on the thread count and matches Serial
// to rounding.
MultifileAnalytic analytic_multifile_costs(const ZipfCatalog& catalog, double remote_cost,
                                           const std::vector<LegendEntry>& legend,
                                           Execution exec = Execution::Parallel);

double analytic_multifile_ratio(const ZipfCatalog& catalog, double remote_cost,
                                const LegendEntry& entry, Execution exec = Execution::Parallel);

// Total rate that gives a per-file average of `rate` requests per R time units.
double total_rate_for(double rate, std::size_t n_files, double remote_cost);

// One row per grid rate, with the catalog rescaled by total_rate_for.
SweepTable multifile_sweep(std::size_t n_files, double gamma, const DistributionFamily& family,
                           double remote_cost, const std::vector<LegendEntry>& legend,
                           std::span<const double> rates, Execution exec = Execution::Parallel);

// Objects grouped by request count. Upper bounds {3, 20} give the bands
// 1-3, 4-20 and >20.
class PopularityBands {
 public:
  explicit PopularityBands(std::vector<std::uint64_t> upper_bounds = {3, 20});

  std::size_t count() const noexcept { return upper_.size() + 1; }
  std::size_t band_of(std::uint64_t requests) const;
  std::string label(std::size_t band) const;

 private:
  std::vector<std::uint64_t> upper_;
};

struct MultifileReport {
  std::vector<std::string> policies;  // labels
  std::vector<std::string> bands;
  std::vector<std::uint64_t> band_objects;
  std::vector<std::vector<CostReport>> band_costs;  // [band][policy]
  std::vector<CostReport> band_offline;
  // Band costs added in band order.
  std::vector<CostReport> totals;
  CostReport offline;

  double ratio(std::size_t policy) const { return totals[policy].total() / offline.total(); }
  // Band contribution to the aggregate ratio; shares add up to ratio(policy).
  double band_share(std::size_t band, std::size_t policy) const {
    return band_costs[band][policy].total() / offline.total();
  }
};

// Simulates every policy on every object independently and aggregates in
// object order within each band. Serial and Parallel are bit-identical.
MultifileReport simulate_multifile(const RequestTrace& trace, const std::vector<PolicySpec>& policies,
                                   const CostParams& costs, const PopularityBands& bands = PopularityBands{},
                                   const SimulationOptions& options = {},
                                   Execution exec = Execution::Parallel);

}  // namespace ttlcache
