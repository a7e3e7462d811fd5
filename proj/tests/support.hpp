#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ttlcache/cost_model.hpp"
#include "ttlcache/distributions.hpp"
#include "ttlcache/random.hpp"

namespace testing {

inline ttlcache::RequestTrace single_object(const std::vector<double>& times, const std::string& id = "a",
                                            double size = 1.0) {
  ttlcache::RequestTrace::Builder b;
  for (double t : times) b.add(t, id, size);
  return std::move(b).build();
}

inline std::vector<double> sampled_times(const ttlcache::Distribution& d, ttlcache::Rng& rng, std::size_t n,
                                         double start = 0.0) {
  std::vector<double> times{start};
  while (times.size() < n) times.push_back(times.back() + sample(d, rng));
  return times;
}

// Several objects, each with IID gaps from d, interleaved by time.
inline ttlcache::RequestTrace random_multi_trace(const ttlcache::Distribution& d, ttlcache::Rng& rng,
                                                 std::size_t objects, std::size_t max_requests) {
  struct Ev {
    double t;
    std::size_t obj;
  };
  std::vector<Ev> evs;
  for (std::size_t o = 0; o < objects; ++o) {
    const std::size_t n = 1 + rng.below(max_requests);
    const double start = 5.0 * rng.uniform();
    for (double t : sampled_times(d, rng, n, start)) evs.push_back({t, o});
  }
  std::stable_sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) { return a.t < b.t; });
  ttlcache::RequestTrace::Builder b;
  for (const auto& e : evs) b.add(e.t, "o" + std::to_string(e.obj), 1.0 + static_cast<double>(e.obj % 3));
  return std::move(b).build();
}

// Adaptive Simpson on [a, b].
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                           double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  if (b <= a) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson_step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50);
}

// Integral over [0, t] split at the given breakpoints, where f may jump or kink.
inline double integrate_piecewise(const std::function<double(double)>& f, double t, std::vector<double> breaks) {
  double sum = 0.0, lo = 0.0;
  breaks.push_back(t);
  for (double b : breaks) {
    const double hi = std::min(b, t);
    if (hi > lo) {
      sum += integrate(f, lo, hi);
      lo = hi;
    }
  }
  return sum;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
