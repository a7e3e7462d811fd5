#include "ttlcache/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ttlcache/errors.hpp"
#include "ttlcache/numeric_text.hpp"

namespace ttlcache {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_remote(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("R must be a positive finite number");
}

void require_threshold(double t, const char* name) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ParameterError(std::string(name) + " must be a non-negative finite number");
  }
}

AnalyticCost never_cache(const Distribution& d, double remote_cost) {
  const double c = remote_cost / mean(d);
  return {c, c, 0.0, std::nullopt};
}

AnalyticCost compose(double miss_numerator, double storage_numerator, double denominator) {
  AnalyticCost c;
  c.miss_term = miss_numerator / denominator;
  c.storage_term = storage_numerator / denominator;
  c.cost_per_time_unit = (miss_numerator + storage_numerator) / denominator;
  return c;
}

}  // namespace

AnalyticCost offline_cost(const Distribution& d, double remote_cost) {
  require_remote(remote_cost);
  const double e = mean(d);
  const double s = survival_integral(d, remote_cost);
  const double fetch = remote_cost * (1.0 - cdf(d, remote_cost));
  AnalyticCost c;
  c.cost_per_time_unit = s / e;
  c.miss_term = fetch / e;
  c.storage_term = (s - fetch) / e;
  return c;
}

AnalyticCost static_baseline_cost(const Distribution& d, double remote_cost) {
  require_remote(remote_cost);
  const double remote = remote_cost / mean(d);
  if (remote <= 1.0) return {remote, remote, 0.0, std::nullopt};
  return {1.0, 0.0, 1.0, std::nullopt};
}

AnalyticCost always_1st_cost(const Distribution& d, double remote_cost, double ttl) {
  return always_mth_cost(d, remote_cost, ttl, 1);
}

AnalyticCost always_mth_cost(const Distribution& d, double remote_cost, double ttl, int m) {
  require_remote(remote_cost);
  require_threshold(ttl, "T");
  if (m < 1) throw ParameterError("M must be >= 1");
  const double f = cdf(d, ttl);
  const double s = survival_integral(d, ttl);
  // Off period: mean residual beyond T plus M - 1 extra gaps; on period as for M = 1.
  const double den = (m - (m - 1) * f) * mean(d);
  return compose((1.0 - f) * m * remote_cost, s, den);
}

AnalyticCost single_window_mth_cost(const Distribution& d, double remote_cost, double ttl, int m) {
  require_remote(remote_cost);
  require_threshold(ttl, "T");
  if (m < 1) throw ParameterError("M must be >= 1");
  const double f = cdf(d, ttl);
  if (m >= 2 && f == 0.0) return never_cache(d, remote_cost);
  const double s = survival_integral(d, ttl);
  double geometric = 0.0;
  double power = 1.0;
  for (int j = 0; j < m; ++j) {
    geometric += power;
    if (j + 1 < m) power *= f;
  }
  // power == F^{M-1}
  return compose((1.0 - f) * remote_cost * geometric, s * power, mean(d));
}

AnalyticCost dual_window_2nd_cost(const Distribution& d, double remote_cost, double ttl,
                                  double window) {
  require_remote(remote_cost);
  require_threshold(ttl, "T");
  require_threshold(window, "W");
  if (window > ttl) throw ParameterError("dual-window policy requires W <= T");
  const double fw = cdf(d, window);
  if (fw == 0.0) return never_cache(d, remote_cost);
  const double ft = cdf(d, ttl);
  const double s = survival_integral(d, ttl);
  const double requests = 2.0 + (1.0 - fw) / fw;
  return compose((1.0 - ft) * requests * remote_cost, s, mean(d) * (1.0 + (1.0 - ft) / fw));
}

AnalyticCost online_threshold_cost(const Distribution& d, double remote_cost, double t_star) {
  require_remote(remote_cost);
  if (!(t_star >= 0.0)) throw ParameterError("t* must be >= 0");
  const double e = mean(d);
  const double f = std::isinf(t_star) ? 1.0 : cdf(d, t_star);
  const double s = survival_integral(d, t_star);
  AnalyticCost c = compose(remote_cost * (1.0 - f), s, e);
  c.per_renewal = remote_cost * (1.0 - f) + s;
  return c;
}

double optimal_online_threshold(const Distribution& d, double remote_cost) {
  require_remote(remote_cost);
  if (const auto* p = std::get_if<Pareto>(&d.variant())) {
    const double t = remote_cost * p->shape;
    if (t >= p->scale) return t;
  }
  return remote_cost / mean(d) <= 1.0 ? 0.0 : kInf;
}

AnalyticCost policy_cost(const Distribution& d, double remote_cost, const PolicySpec& policy) {
  switch (policy.kind()) {
    case PolicyKind::AlwaysOnMth:
      return always_mth_cost(d, remote_cost, policy.ttl(), policy.m());
    case PolicyKind::SingleWindowMth:
      return single_window_mth_cost(d, remote_cost, policy.ttl(), policy.m());
    case PolicyKind::DualWindow2nd:
      return dual_window_2nd_cost(d, remote_cost, policy.ttl(), policy.window());
    case PolicyKind::StaticAlwaysLocal:
      require_remote(remote_cost);
      return {1.0, 0.0, 1.0, std::nullopt};
    case PolicyKind::StaticAlwaysRemote:
      require_remote(remote_cost);
      return never_cache(d, remote_cost);
  }
  throw ParameterError("unknown policy");
}

std::string LegendEntry::label() const {
  switch (kind) {
    case LegendKind::Offline:
      return "offline";
    case LegendKind::Baseline:
      return "baseline";
    case LegendKind::Policy:
      return policy->label();
  }
  return "?";
}

LegendEntry parse_legend_entry(std::string_view token, double ttl, double window) {
  token = trim(token);
  if (token == "offline") return LegendEntry::offline();
  if (token == "baseline") return LegendEntry::baseline();
  if (token == "local") return LegendEntry::of(PolicySpec::static_always_local());
  if (token == "remote") return LegendEntry::of(PolicySpec::static_always_remote());

  const auto colon = token.find(':');
  const std::string_view name = token.substr(0, colon);
  std::optional<long long> m;
  if (colon != std::string_view::npos) m = parse_integer(token.substr(colon + 1));
  if (colon != std::string_view::npos && (!m || *m < 1 || *m > 1'000'000)) {
    throw ParameterError("bad M in policy '" + std::string(token) + "'");
  }
  if (name == "always" && m) return LegendEntry::of(PolicySpec::always_on_mth(static_cast<int>(*m), ttl));
  if (name == "window" && m) {
    return LegendEntry::of(PolicySpec::single_window_mth(static_cast<int>(*m), ttl));
  }
  if (name == "dual" && (!m || *m == 2)) return LegendEntry::of(PolicySpec::dual_window_2nd(window, ttl));
  throw ParameterError("unknown policy '" + std::string(token) + "'");
}

std::vector<LegendEntry> parse_legend(std::string_view comma_list, double ttl, double window) {
  std::vector<LegendEntry> out;
  std::size_t start = 0;
  while (start <= comma_list.size()) {
    auto end = comma_list.find(',', start);
    if (end == std::string_view::npos) end = comma_list.size();
    out.push_back(parse_legend_entry(comma_list.substr(start, end - start), ttl, window));
    start = end + 1;
  }
  return out;
}

std::vector<LegendEntry> default_legend(double ttl, double window) {
  return parse_legend(kDefaultLegend, ttl, window);
}

AnalyticCost legend_cost(const Distribution& d, double remote_cost, const LegendEntry& entry) {
  switch (entry.kind) {
    case LegendKind::Offline:
      return offline_cost(d, remote_cost);
    case LegendKind::Baseline:
      return static_baseline_cost(d, remote_cost);
    case LegendKind::Policy:
      return policy_cost(d, remote_cost, *entry.policy);
  }
  throw ParameterError("unknown legend entry");
}

double ratio_at_rate(const DistributionFamily& family, double remote_cost, const LegendEntry& entry,
                     double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ParameterError("rate must be > 0");
  const Distribution d = family.at_normalized_rate(rate, remote_cost);
  if (entry.kind == LegendKind::Offline) return 1.0;
  return legend_cost(d, remote_cost, entry).cost_per_time_unit /
         offline_cost(d, remote_cost).cost_per_time_unit;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi) || points == 0) {
    throw ParameterError("grid needs 0 < min <= max and at least one point");
  }
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = std::exp(a + step * static_cast<double>(i));
  g.front() = lo;
  g.back() = hi;
  return g;
}

SweepTable ratio_sweep(const DistributionFamily& family, double remote_cost,
                       const std::vector<LegendEntry>& legend, std::span<const double> rates,
                       Execution exec) {
  require_remote(remote_cost);
  SweepTable table;
  for (const auto& e : legend) table.columns.push_back(e.label());
  table.rates.assign(rates.begin(), rates.end());
  table.rows.assign(rates.size(), std::vector<double>(legend.size()));

  auto fill = [&](std::size_t i) {
    for (std::size_t j = 0; j < legend.size(); ++j) {
      table.rows[i][j] = ratio_at_rate(family, remote_cost, legend[j], rates[i]);
    }
  };
  const auto n = static_cast<long long>(rates.size());
  if (exec == Execution::Serial) {
    for (long long i = 0; i < n; ++i) fill(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < n; ++i) fill(static_cast<std::size_t>(i));
  }
  return table;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  out << "rate";
  for (const auto& c : table.columns) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < table.rates.size(); ++i) {
    out << format_double(table.rates[i]);
    for (double v : table.rows[i]) out << ',' << format_double(v);
    out << '\n';
  }
}

Peak find_peak(const std::function<double(double)>& f, double lo, double hi,
               std::size_t grid_points, double rate_tolerance) {
  const auto grid = log_grid(lo, hi, std::max<std::size_t>(grid_points, 3));
  std::size_t best = 0;
  double best_value = -kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  Peak peak{grid[best], best_value};
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > rate_tolerance) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  for (auto [x, v] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
    if (v > peak.ratio) peak = {x, v};
  }
  return peak;
}

}  // namespace ttlcache
