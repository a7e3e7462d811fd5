#include "ttlcache/multifile.hpp"

#include <cmath>

#include "ttlcache/errors.hpp"

namespace ttlcache {

ZipfCatalog::ZipfCatalog(std::size_t n_files, double gamma, double total_rate,
                         DistributionFamily family)
    : n_(n_files), gamma_(gamma), total_rate_(total_rate), family_(family) {
  if (n_files < 1) throw ParameterError("catalog needs at least one file");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ParameterError("gamma must be >= 0");
  if (!(total_rate > 0.0) || !std::isfinite(total_rate)) throw ParameterError("total rate must be > 0");
  // Smallest terms first.
  double h = 0.0;
  for (std::size_t j = n_files; j >= 1; --j) h += std::pow(static_cast<double>(j), -gamma);
  harmonic_ = h;
}

double ZipfCatalog::probability(std::size_t i) const {
  if (i < 1 || i > n_) {
    throw NotFoundError("file index " + std::to_string(i) + " outside 1.." + std::to_string(n_));
  }
  return std::pow(static_cast<double>(i), -gamma_) / harmonic_;
}

double ZipfCatalog::file_rate(std::size_t i) const { return total_rate_ * probability(i); }

Distribution ZipfCatalog::per_file_distribution(std::size_t i) const {
  return family_.with_mean(1.0 / file_rate(i));
}

namespace {

void add_file(const ZipfCatalog& catalog, double r, const std::vector<LegendEntry>& legend,
              std::size_t i, std::vector<double>& sums, double& offline) {
  const Distribution d = catalog.per_file_distribution(i);
  for (std::size_t j = 0; j < legend.size(); ++j) sums[j] += legend_cost(d, r, legend[j]).cost_per_time_unit;
  offline += offline_cost(d, r).cost_per_time_unit;
}

}  // namespace

MultifileAnalytic analytic_multifile_costs(const ZipfCatalog& catalog, double remote_cost,
                                           const std::vector<LegendEntry>& legend, Execution exec) {
  const std::size_t n = catalog.n_files();
  const std::size_t k = legend.size();
  MultifileAnalytic out;
  out.totals.assign(k, 0.0);

  if (exec == Execution::Serial) {
    for (std::size_t i = 1; i <= n; ++i) add_file(catalog, remote_cost, legend, i, out.totals, out.offline_total);
    return out;
  }

  const std::size_t chunks = (n + kAggregationChunk - 1) / kAggregationChunk;
  std::vector<std::vector<double>> chunk_sums(chunks, std::vector<double>(k, 0.0));
  std::vector<double> chunk_offline(chunks, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (long long c = 0; c < static_cast<long long>(chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kAggregationChunk + 1;
    const std::size_t hi = std::min(n, lo + kAggregationChunk - 1);
    for (std::size_t i = lo; i <= hi; ++i) {
      add_file(catalog, remote_cost, legend, i, chunk_sums[c], chunk_offline[c]);
    }
  }
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t j = 0; j < k; ++j) out.totals[j] += chunk_sums[c][j];
    out.offline_total += chunk_offline[c];
  }
  return out;
}

double analytic_multifile_ratio(const ZipfCatalog& catalog, double remote_cost,
                                const LegendEntry& entry, Execution exec) {
  return analytic_multifile_costs(catalog, remote_cost, {entry}, exec).ratio(0);
}

double total_rate_for(double rate, std::size_t n_files, double remote_cost) {
  return rate * static_cast<double>(n_files) / remote_cost;
}

SweepTable multifile_sweep(std::size_t n_files, double gamma, const DistributionFamily& family,
                           double remote_cost, const std::vector<LegendEntry>& legend,
                           std::span<const double> rates, Execution exec) {
  SweepTable table;
  for (const auto& e : legend) table.columns.push_back(e.label());
  table.rates.assign(rates.begin(), rates.end());
  for (double rate : rates) {
    const ZipfCatalog catalog(n_files, gamma, total_rate_for(rate, n_files, remote_cost), family);
    const MultifileAnalytic agg = analytic_multifile_costs(catalog, remote_cost, legend, exec);
    std::vector<double> row(legend.size());
    for (std::size_t j = 0; j < legend.size(); ++j) {
      row[j] = legend[j].kind == LegendKind::Offline ? 1.0 : agg.ratio(j);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

PopularityBands::PopularityBands(std::vector<std::uint64_t> upper_bounds)
    : upper_(std::move(upper_bounds)) {
  for (std::size_t i = 0; i < upper_.size(); ++i) {
    if (upper_[i] < 1 || (i > 0 && upper_[i] <= upper_[i - 1])) {
      throw ParameterError("band thresholds must be positive and strictly increasing");
    }
  }
}

std::size_t PopularityBands::band_of(std::uint64_t requests) const {
  std::size_t b = 0;
  while (b < upper_.size() && requests > upper_[b]) ++b;
  return b;
}

std::string PopularityBands::label(std::size_t band) const {
  if (band >= upper_.size()) {
    return upper_.empty() ? std::string(">0") : ">" + std::to_string(upper_.back());
  }
  const std::uint64_t lo = band == 0 ? 1 : upper_[band - 1] + 1;
  return std::to_string(lo) + "-" + std::to_string(upper_[band]);
}

MultifileReport simulate_multifile(const RequestTrace& trace, const std::vector<PolicySpec>& policies,
                                   const CostParams& costs, const PopularityBands& bands,
                                   const SimulationOptions& options, Execution exec) {
  if (trace.empty()) throw ParameterError("multi-file simulation needs a non-empty trace");
  const double horizon = resolve_horizon(trace, options);
  const auto objects = trace.by_object();
  const std::size_t k = policies.size();
  const std::size_t width = k + 1;  // policies, then offline

  std::vector<CostReport> per_object(objects.size() * width);
  auto run = [&](std::size_t o) {
    const ObjectRequests& obj = objects[o];
    for (std::size_t p = 0; p < k; ++p) {
      per_object[o * width + p] = simulate_object(obj.times, obj.size, policies[p], costs.remote_cost(),
                                                  horizon, options.truncate_at_horizon);
    }
    per_object[o * width + k] = offline_object_cost(obj.times, obj.size, costs.remote_cost());
  };
  const auto n = static_cast<long long>(objects.size());
  if (exec == Execution::Serial) {
    for (long long o = 0; o < n; ++o) run(static_cast<std::size_t>(o));
  } else {
#pragma omp parallel for schedule(dynamic, 256)
    for (long long o = 0; o < n; ++o) run(static_cast<std::size_t>(o));
  }

  MultifileReport report;
  for (const auto& p : policies) report.policies.push_back(p.label());
  for (std::size_t b = 0; b < bands.count(); ++b) report.bands.push_back(bands.label(b));
  report.band_objects.assign(bands.count(), 0);
  report.band_costs.assign(bands.count(), std::vector<CostReport>(k));
  report.band_offline.assign(bands.count(), CostReport{});
  for (std::size_t o = 0; o < objects.size(); ++o) {
    const std::size_t b = bands.band_of(objects[o].times.size());
    ++report.band_objects[b];
    for (std::size_t p = 0; p < k; ++p) report.band_costs[b][p] += per_object[o * width + p];
    report.band_offline[b] += per_object[o * width + k];
  }
  report.totals.assign(k, CostReport{});
  for (std::size_t b = 0; b < bands.count(); ++b) {
    for (std::size_t p = 0; p < k; ++p) report.totals[p] += report.band_costs[b][p];
    report.offline += report.band_offline[b];
  }
  return report;
}

}  // namespace ttlcache
