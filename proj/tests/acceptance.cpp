// Acceptance run: one PASS/FAIL line per criterion. Exits 0 once every
// criterion has been evaluated; the verdicts are in the output.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "equivalence.hpp"
#include "support.hpp"
#include "ttlcache/adversary.hpp"
#include "ttlcache/analytic.hpp"
#include "ttlcache/closed_form.hpp"
#include "ttlcache/multifile.hpp"
#include "ttlcache/steady_state.hpp"

using namespace ttlcache;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [out of tolerance]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

int failures = 0;

void report(int id, const std::string& name, const std::function<Verdict()>& body) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  if (!v.pass) ++failures;
  std::printf("criterion %2d %-34s %s  (%.2fs) %s\n", id, name.c_str(), v.pass ? "PASS" : "FAIL", seconds_since(t0),
              v.detail.c_str());
  std::fflush(stdout);
}

double exp_ratio(const LegendEntry& e, double rate) {
  return ratio_at_rate(DistributionFamily::exponential(), 1.0, e, rate);
}

Verdict tightness_even() {
  Verdict v;
  const auto t0 = Clock::now();
  const double r = competitive_ratio(even_trace(1.0 + 1e-6, 10'000), PolicySpec::always_on_mth(1, 1.0), CostParams(1.0));
  const double secs = seconds_since(t0);
  v.require(std::abs(r - 2.0) <= 0.005 * 2.0, fmt("ratio %.6f", r));
  v.require(secs < 1.0, fmt("%.3fs", secs));
  return v;
}

Verdict tightness_batches() {
  Verdict v;
  for (int m : {2, 3, 4}) {
    for (bool window : {false, true}) {
      const auto t0 = Clock::now();
      const auto p = window ? PolicySpec::single_window_mth(m, 1.0) : PolicySpec::always_on_mth(m, 1.0);
      AdversaryConfig cfg = AdversaryConfig::defaults(m, 1.0, 1.0, 1000);
      cfg.batch_epsilon = 1e-4;
      const double r = competitive_ratio(batch_trace(cfg), p, CostParams(1.0));
      const double secs = seconds_since(t0);
      v.require(std::abs(r - (m + 1.0)) <= 0.01 * (m + 1.0) && secs < 1.0,
                p.label() + fmt(" %.4f", r) + fmt(" in %.3fs", secs));
    }
  }
  return v;
}

Verdict tightness_dual() {
  Verdict v;
  const auto p = PolicySpec::dual_window_2nd(1.0, 1.0);
  const double r = competitive_ratio(batch_trace(AdversaryConfig::defaults(2, 1.0, 1.0, 1000)), p, CostParams(1.0));
  v.require(std::abs(r - 3.0) <= 0.03, fmt("batch ratio %.4f", r));
  const auto search = random_adversary_search(p, CostParams(1.0), 10'000, 42);
  v.require(search.worst_ratio <= 3.0 + 1e-9, fmt("random worst %.6f over 10^4 trials", search.worst_ratio));
  return v;
}

Verdict exponential_baseline_peak() {
  Verdict v;
  const auto peak = find_peak([](double x) { return exp_ratio(LegendEntry::baseline(), x); }, 1e-2, 1e3);
  const double target = 1.0 / (1.0 - std::exp(-1.0));
  v.require(std::abs(peak.ratio - target) <= 1e-5, fmt("peak %.7f vs %.7f", peak.ratio, target));
  v.require(std::abs(peak.rate - 1.0) <= 1e-3, fmt("at rate %.6f", peak.rate));
  return v;
}

Verdict exponential_window_peak() {
  Verdict v;
  const auto entry = LegendEntry::of(PolicySpec::single_window_mth(2, 1.0));
  const auto peak = find_peak([&](double x) { return exp_ratio(entry, x); }, 1e-2, 1e3);
  v.require(std::abs(peak.ratio - 1.588) <= 0.002, fmt("peak %.6f (target 1.588 +- 0.002)", peak.ratio));
  v.require(std::abs(peak.rate - 1.05236) <= 1e-3, fmt("at rate %.6f", peak.rate));
  return v;
}

Verdict low_rate_asymptotes() {
  Verdict v;
  for (int m : {1, 2, 4}) {
    const double r = exp_ratio(LegendEntry::of(PolicySpec::always_on_mth(m, 1.0)), 1e-6);
    v.require(std::abs(r - (m + 1.0) / m) <= 1e-4, "always" + std::to_string(m) + fmt(" %.7f", r));
  }
  for (int m : {2, 3, 4}) {
    const double r = exp_ratio(LegendEntry::of(PolicySpec::single_window_mth(m, 1.0)), 1e-6);
    v.require(std::abs(r - 1.0) <= 1e-4, "window" + std::to_string(m) + fmt(" %.7f", r));
  }
  return v;
}

Verdict erlang_bound() {
  Verdict v;
  for (int k : {1, 2, 4, 8}) {
    const double bound = 1.0 / (1.0 - std::exp(-k) * std::pow(k, k) / std::tgamma(k + 1.0));
    const Distribution d = Erlang{k, static_cast<double>(k)};
    const double r = static_baseline_cost(d, 1.0).cost_per_time_unit / offline_cost(d, 1.0).cost_per_time_unit;
    v.require(std::abs(r - bound) <= 1e-8, "k=" + std::to_string(k) + fmt(" %.10f vs %.10f", r, bound));
  }
  const Distribution e1 = Erlang{1, 1.0};
  const double k1 = static_baseline_cost(e1, 1.0).cost_per_time_unit / offline_cost(e1, 1.0).cost_per_time_unit;
  v.require(std::abs(k1 - 1.0 / (1.0 - std::exp(-1.0))) <= 1e-8, "k=1 equals the exponential constant");
  return v;
}

Verdict deterministic_unity() {
  Verdict v;
  int exact = 0, points = 0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double a = std::pow(10.0, -2.0 + 4.0 * i / 9.0);
      const double r = std::pow(10.0, -1.0 + 2.0 * j / 4.0);
      const Distribution d = Deterministic{a};
      const double ratio = static_baseline_cost(d, r).cost_per_time_unit / offline_cost(d, r).cost_per_time_unit;
      exact += ratio == 1.0;
      ++points;
    }
  }
  v.require(exact == points, std::to_string(exact) + "/" + std::to_string(points) + " grid points exactly 1");
  return v;
}

Verdict pareto_divergence() {
  Verdict v;
  double previous = 0.0;
  bool increasing = true;
  std::string values;
  for (double x : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double alpha = 1.0 / (1.0 - x);
    const Distribution d = Pareto{alpha, x};
    const double r = static_baseline_cost(d, 1.0).cost_per_time_unit / offline_cost(d, 1.0).cost_per_time_unit;
    increasing = increasing && r > previous;
    previous = r;
    values += fmt(" %.4f", r);
  }
  v.require(increasing, "ratios" + values);
  v.require(previous > 5.0, fmt("last %.4f > 5", previous));
  return v;
}

Verdict simulation_cross_check() {
  Verdict v;
  const auto t0 = Clock::now();
  const std::vector<PolicySpec> ps{PolicySpec::always_on_mth(1, 1.0), PolicySpec::always_on_mth(2, 1.0),
                                   PolicySpec::single_window_mth(2, 1.0), PolicySpec::single_window_mth(4, 1.0),
                                   PolicySpec::dual_window_2nd(1.0, 1.0)};
  const std::vector<DistributionFamily> families{DistributionFamily::exponential(), DistributionFamily::erlang(2),
                                                 DistributionFamily::deterministic(), DistributionFamily::pareto(3.0)};
  int cells = 0, within = 0;
  double worst_z = 0.0;
  std::string worst;
  std::uint64_t seed = 1000;
  for (const auto& fam : families) {
    for (double rate : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const Distribution d = fam.at_normalized_rate(rate, 1.0);
      const auto est = estimate_steady_state(d, ps, 1.0, seed++);
      const double expected[] = {closed_form::always_1st(d, 1.0, 1.0), closed_form::always_2nd(d, 1.0, 1.0),
                                 closed_form::single_mth(d, 1.0, 1.0, 2), closed_form::single_mth(d, 1.0, 1.0, 4),
                                 closed_form::dual_2nd(d, 1.0, 1.0, 1.0)};
      for (std::size_t j = 0; j < ps.size(); ++j) {
        const double z = std::abs(est[j].cost_per_time_unit - expected[j]) / est[j].uncertainty();
        ++cells;
        within += z <= 3.0;
        if (z > worst_z) {
          worst_z = z;
          worst = fam.describe() + fmt(" rate %g ", rate) + ps[j].label();
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  v.require(within == cells, std::to_string(within) + "/" + std::to_string(cells) + " cells within 3 SE, worst " +
                                 fmt("%.2f SE", worst_z) + " (" + worst + ")");
  v.require(secs < 120.0, fmt("%.1fs", secs));
  return v;
}

Verdict closed_form_equivalence() {
  Verdict v;
  double worst = 0.0;
  std::size_t points = 0;
  for (const auto& fam : testing::equivalence_families()) {
    for (const auto& p : testing::equivalence_grid(fam)) {
      worst = std::max(worst, testing::closed_form_mismatch(p));
      ++points;
    }
  }
  v.require(worst <= 1e-10, fmt("max relative gap %.2e over ", worst) + std::to_string(points) + " points");
  return v;
}

Verdict zipf_peak() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto legend = parse_legend("window:2", 1.0, 1.0);
  const auto rates = log_grid(1e-2, 1e3, 101);
  const auto table = multifile_sweep(1'000'000, 1.0, DistributionFamily::exponential(), 1.0, legend, rates);
  double best = 0.0, at = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (table.rows[i][0] > best) {
      best = table.rows[i][0];
      at = rates[i];
    }
  }
  const double secs = seconds_since(t0);
  v.require(std::abs(best - 1.4) <= 0.05, fmt("peak %.4f at rate %.4g", best, at));
  v.require(secs < 300.0, fmt("%.1fs", secs));
  return v;
}

Verdict property_suite() {
  Verdict v;
  const std::vector<Distribution> dists{Exponential{1.0}, Erlang{2, 2.0}, Deterministic{0.8}, Pareto{1.5, 0.2}};
  const CostParams costs(1.0);
  std::vector<PolicySpec> ps;
  for (int m : {1, 2, 4}) {
    ps.push_back(PolicySpec::always_on_mth(m, 1.0));
    ps.push_back(PolicySpec::single_window_mth(m, 1.0));
  }
  ps.push_back(PolicySpec::dual_window_2nd(0.5, 1.0));
  ps.push_back(PolicySpec::dual_window_2nd(1.0, 1.0));

  std::size_t dominance = 0, collapses = 0, accounting = 0, checks = 0;
  for (std::size_t di = 0; di < dists.size(); ++di) {
    Rng rng = Rng::for_stream(13, di);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto trace = testing::random_multi_trace(dists[di], rng, 1 + rng.below(3), 40);
      const double floor = offline_optimal_cost(trace, costs).total();
      for (const auto& p : ps) {
        const auto c = simulate(trace, p, costs);
        ++checks;
        dominance += c.total() >= floor;
        accounting += c.total() == c.bandwidth_cost + c.storage_cost;
      }
      collapses += simulate(trace, PolicySpec::single_window_mth(1, 1.0), costs) ==
                       simulate(trace, PolicySpec::always_on_mth(1, 1.0), costs) &&
                   simulate(trace, PolicySpec::dual_window_2nd(1.0, 1.0), costs) ==
                       simulate(trace, PolicySpec::single_window_mth(2, 1.0), costs);
    }
  }
  v.require(dominance == checks, "dominance " + std::to_string(dominance) + "/" + std::to_string(checks));
  v.require(collapses == 4000, "policy collapses " + std::to_string(collapses) + "/4000");
  v.require(accounting == checks, "accounting " + std::to_string(accounting) + "/" + std::to_string(checks));

  const auto a = random_adversary_search(PolicySpec::single_window_mth(3, 1.0), costs, 500, 5);
  const auto b = random_adversary_search(PolicySpec::single_window_mth(3, 1.0), costs, 500, 5);
  const auto e1 = estimate_steady_state(Pareto{2.0, 0.3}, ps, 1.0, 5, {4, 500, 1});
  const auto e2 = estimate_steady_state(Pareto{2.0, 0.3}, ps, 1.0, 5, {4, 500, 1});
  bool same = a.worst_ratio == b.worst_ratio && a.worst_trial == b.worst_trial;
  for (std::size_t j = 0; j < ps.size(); ++j) same = same && e1[j].cost_per_time_unit == e2[j].cost_per_time_unit;
  v.require(same, "seeded reruns identical");
  return v;
}

}  // namespace

int main() {
  report(1, "even-trace tightness", tightness_even);
  report(2, "batch-trace tightness", tightness_batches);
  report(3, "dual-window tightness and safety", tightness_dual);
  report(4, "exponential baseline peak", exponential_baseline_peak);
  report(5, "exponential window-2 peak", exponential_window_peak);
  report(6, "low-rate asymptotes", low_rate_asymptotes);
  report(7, "Erlang baseline bound", erlang_bound);
  report(8, "deterministic baseline optimal", deterministic_unity);
  report(9, "Pareto baseline divergence", pareto_divergence);
  report(10, "simulation vs closed form", simulation_cross_check);
  report(11, "closed form vs generic", closed_form_equivalence);
  report(12, "Zipf catalog window-2 peak", zipf_peak);
  report(13, "property suite", property_suite);
  std::printf("%d of 13 criteria failed\n", failures);
  return 0;
}
