#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttlcache/distributions.hpp"
#include "ttlcache/parallel.hpp"
#include "ttlcache/policies.hpp"

namespace ttlcache {

// Long-run cost per time unit of one object with IID inter-request times.
struct AnalyticCost {
  double cost_per_time_unit = 0.0;
  double miss_term = 0.0;     // remote fetches per time unit, times R
  double storage_term = 0.0;  // fraction of time cached
  // Expected cost of one inter-request interval (threshold policies only).
  std::optional<double> per_renewal;
};

// All functions validate R > 0 and thresholds >= 0, throwing ParameterError.
AnalyticCost offline_cost(const Distribution& d, double remote_cost);
AnalyticCost static_baseline_cost(const Distribution& d, double remote_cost);
AnalyticCost always_1st_cost(const Distribution& d, double remote_cost, double ttl);
AnalyticCost always_mth_cost(const Distribution& d, double remote_cost, double ttl, int m);
// F(T) = 0 with M >= 2 gives the never-cache cost R / mean.
AnalyticCost single_window_mth_cost(const Distribution& d, double remote_cost, double ttl, int m);
// Requires W <= T. F(W) = 0 gives the never-cache cost.
AnalyticCost dual_window_2nd_cost(const Distribution& d, double remote_cost, double ttl,
                                  double window);

// Keep the object for t_star after each request (t_star may be +inf).
AnalyticCost online_threshold_cost(const Distribution& d, double remote_cost, double t_star);

// Threshold minimizing online_threshold_cost: 0 or +inf for the families with
// non-decreasing hazard rate, R * alpha for Pareto when R * alpha >= t_m.
double optimal_online_threshold(const Distribution& d, double remote_cost);

// Dispatch on the policy kind. StaticAlwaysLocal costs 1, StaticAlwaysRemote R / mean.
AnalyticCost policy_cost(const Distribution& d, double remote_cost, const PolicySpec& policy);

enum class LegendKind { Offline, Baseline, Policy };

// One curve of a sweep: the two baselines or an online policy.
struct LegendEntry {
  LegendKind kind = LegendKind::Offline;
  std::optional<PolicySpec> policy;

  static LegendEntry offline() { return {LegendKind::Offline, std::nullopt}; }
  static LegendEntry baseline() { return {LegendKind::Baseline, std::nullopt}; }
  static LegendEntry of(const PolicySpec& p) { return {LegendKind::Policy, p}; }

  std::string label() const;
};

// Tokens: offline, baseline, always:M, window:M, dual:2, local, remote. TTL
// policies take T = ttl; dual:2 takes W = window.
LegendEntry parse_legend_entry(std::string_view token, double ttl, double window);
std::vector<LegendEntry> parse_legend(std::string_view comma_list, double ttl, double window);

// offline, baseline, always:1, always:2, window:2, window:4, dual:2.
std::vector<LegendEntry> default_legend(double ttl, double window);
inline constexpr std::string_view kDefaultLegend = "offline,baseline,always:1,always:2,window:2,window:4,dual:2";

AnalyticCost legend_cost(const Distribution& d, double remote_cost, const LegendEntry& entry);

// legend_cost / offline_cost for the family member whose mean gap is R / rate.
double ratio_at_rate(const DistributionFamily& family, double remote_cost, const LegendEntry& entry,
                     double rate);

// `points` log-spaced values from lo to hi inclusive. points == 1 gives {lo}.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

struct SweepTable {
  std::vector<std::string> columns;       // legend labels
  std::vector<double> rates;              // normalized rate R / mean
  std::vector<std::vector<double>> rows;  // rows[i][j]: cost ratio vs offline
};

// Rows are bit-identical between Serial and Parallel.
SweepTable ratio_sweep(const DistributionFamily& family, double remote_cost,
                       const std::vector<LegendEntry>& legend, std::span<const double> rates,
                       Execution exec = Execution::Parallel);

// Header `rate,<labels>`, shortest round-trip decimals.
void write_sweep_csv(std::ostream& out, const SweepTable& table);

struct Peak {
  double rate;
  double ratio;
};

// Maximum of f over [lo, hi]: log-grid bracketing, then golden-section
// refinement until the bracket is narrower than rate_tolerance.
Peak find_peak(const std::function<double(double)>& f, double lo, double hi,
               std::size_t grid_points = 401, double rate_tolerance = 1e-6);

}  // namespace ttlcache
