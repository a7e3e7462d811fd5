#include "ttlcache/closed_form.hpp"

#include <algorithm>
#include <cmath>

namespace ttlcache::closed_form {
namespace {

// Erlang helpers in terms of x = lambda t.
double erlang_cdf(int k, double x) {
  double term = 1.0;
  double sum = 0.0;
  for (int n = 0; n < k; ++n) {
    sum += term;
    term *= x / (n + 1);
  }
  return 1.0 - std::exp(-x) * sum;
}

// Phi(t) = e^{-lambda t} / lambda * sum_{m=1}^{k} sum_{n=0}^{m-1} (lambda t)^n / n!
double erlang_phi(int k, double lambda, double t) {
  const double x = lambda * t;
  double term = 1.0;
  double partial = 0.0;
  double outer = 0.0;
  for (int m = 1; m <= k; ++m) {
    partial += term;  // sum_{n=0}^{m-1}
    term *= x / m;
    outer += partial;
  }
  return std::exp(-x) / lambda * outer;
}

double geometric_sum(double f, int m) {
  double sum = 0.0;
  double p = 1.0;
  for (int i = 0; i < m; ++i) {
    sum += p;
    p *= f;
  }
  return sum;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double offline(const Distribution& d, double r) {
  return std::visit(
      Overloaded{
          [&](const Exponential& e) { return 1.0 - std::exp(-e.rate * r); },
          [&](const Erlang& e) { return 1.0 - e.rate / e.shape * erlang_phi(e.shape, e.rate, r); },
          [&](const Deterministic& e) { return std::min(r / e.gap, 1.0); },
          [&](const Pareto& p) {
            const double a = p.shape, tm = p.scale;
            if (tm <= r) return 1.0 - std::pow(tm / r, a - 1.0) / a;
            return r * (a - 1.0) / (a * tm);
          },
      },
      d.variant());
}

double baseline(const Distribution& d, double r) {
  return std::visit(Overloaded{
                        [&](const Exponential& e) { return std::min(e.rate * r, 1.0); },
                        [&](const Erlang& e) { return std::min(e.rate / e.shape * r, 1.0); },
                        [&](const Deterministic& e) { return std::min(r / e.gap, 1.0); },
                        [&](const Pareto& p) {
                          return std::min((p.shape - 1.0) / p.shape * r / p.scale, 1.0);
                        },
                    },
                    d.variant());
}

double always_1st(const Distribution& d, double r, double t) {
  return std::visit(
      Overloaded{
          [&](const Exponential& e) {
            const double q = std::exp(-e.rate * t);
            return 1.0 - q + e.rate * r * q;
          },
          [&](const Erlang& e) {
            const double g = e.rate / e.shape;
            return (1.0 - erlang_cdf(e.shape, e.rate * t)) * g * r +
                   (1.0 - g * erlang_phi(e.shape, e.rate, t));
          },
          [&](const Deterministic& e) { return e.gap <= t ? 1.0 : (r + t) / e.gap; },
          [&](const Pareto& p) {
            const double a = p.shape, tm = p.scale;
            if (tm <= t) {
              return (a - 1.0) / a * std::pow(tm / t, a) * r / tm +
                     (1.0 - std::pow(tm / t, a - 1.0) / a);
            }
            return (r + t) * (a - 1.0) / (a * tm);
          },
      },
      d.variant());
}

double always_2nd(const Distribution& d, double r, double t) {
  return std::visit(
      Overloaded{
          [&](const Exponential& e) {
            const double q = std::exp(-e.rate * t);
            return (1.0 - q + 2.0 * e.rate * r * q) / (1.0 + q);
          },
          [&](const Erlang& e) {
            const double g = e.rate / e.shape;
            const double f = erlang_cdf(e.shape, e.rate * t);
            return ((1.0 - f) * g * 2.0 * r + (1.0 - g * erlang_phi(e.shape, e.rate, t))) / (2.0 - f);
          },
          [&](const Deterministic& e) {
            return e.gap <= t ? 1.0 : (2.0 * r + t) / (2.0 * e.gap);
          },
          [&](const Pareto& p) {
            const double a = p.shape, tm = p.scale;
            if (tm <= t) {
              const double q = std::pow(tm / t, a);
              return ((a - 1.0) / a * q * 2.0 * r / tm + (1.0 - std::pow(tm / t, a - 1.0) / a)) /
                     (1.0 + q);
            }
            return (2.0 * r + t) / 2.0 * (a - 1.0) / (a * tm);
          },
      },
      d.variant());
}

double single_mth(const Distribution& d, double r, double t, int m) {
  return std::visit(
      Overloaded{
          [&](const Exponential& e) {
            const double q = std::exp(-e.rate * t);
            return e.rate * q * geometric_sum(1.0 - q, m) * r + std::pow(1.0 - q, m);
          },
          [&](const Erlang& e) {
            const double g = e.rate / e.shape;
            const double f = erlang_cdf(e.shape, e.rate * t);
            return (1.0 - f) * g * geometric_sum(f, m) * r +
                   (1.0 - g * erlang_phi(e.shape, e.rate, t)) * std::pow(f, m - 1);
          },
          [&](const Deterministic& e) {
            if (m == 1) return e.gap <= t ? 1.0 : (r + t) / e.gap;
            return e.gap <= t ? 1.0 : r / e.gap;
          },
          [&](const Pareto& p) {
            const double a = p.shape, tm = p.scale;
            if (tm <= t) {
              const double q = std::pow(tm / t, a);
              return (a - 1.0) / a * q * geometric_sum(1.0 - q, m) * r / tm +
                     (1.0 - std::pow(tm / t, a - 1.0) / a) * std::pow(1.0 - q, m - 1);
            }
            if (m == 1) return (r + t) * (a - 1.0) / (a * tm);
            return r * (a - 1.0) / (a * tm);
          },
      },
      d.variant());
}

double dual_2nd(const Distribution& d, double r, double t, double w) {
  return std::visit(
      Overloaded{
          [&](const Exponential& e) {
            const double qt = std::exp(-e.rate * t);
            const double qw = std::exp(-e.rate * w);
            return (e.rate * r * qt * (2.0 - qw) + (1.0 - qt) * (1.0 - qw)) / (1.0 - qw + qt);
          },
          [&](const Erlang& e) {
            const double fw = erlang_cdf(e.shape, e.rate * w);
            if (fw == 0.0) return e.rate / e.shape * r;
            const double ft = erlang_cdf(e.shape, e.rate * t);
            const double mean = e.shape / e.rate;
            return ((1.0 - ft) * (2.0 + (1.0 - fw) / fw) * r + (mean - erlang_phi(e.shape, e.rate, t))) /
                   (mean * (1.0 + (1.0 - ft) / fw));
          },
          [&](const Deterministic& e) { return e.gap <= w ? 1.0 : r / e.gap; },
          [&](const Pareto& p) {
            const double a = p.shape, tm = p.scale;
            if (tm <= w) {
              const double qt = std::pow(tm / t, a);
              const double qw = std::pow(tm / w, a);
              return ((a - 1.0) * qt * (2.0 - qw) * r + (1.0 - qw) * (tm * a - t * qt)) /
                     (a * tm * (1.0 - qw + qt));
            }
            return r * (a - 1.0) / (a * tm);
          },
      },
      d.variant());
}

}  // namespace ttlcache::closed_form
