#include "ttlcache/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "ttlcache/errors.hpp"
#include "ttlcache/numeric_text.hpp"

namespace ttlcache {
namespace {

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

void require_time(double t) {
  if (!(t >= 0.0)) throw DomainError("distribution evaluated at negative or NaN time");
}

// x - (1 - e^{-x}) for x >= 0, accurate for small x.
double exp_excess(double x) {
  if (x < 0.5) {
    // sum_{n>=2} (-1)^n x^n / n!
    double term = x * x / 2.0;
    double sum = 0.0;
    for (int n = 2; n < 40 && term != 0.0; ++n) {
      sum += (n % 2 == 0) ? term : -term;
      term *= x / (n + 1);
    }
    return sum;
  }
  return x + std::expm1(-x);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Distribution::Distribution(Exponential d) : v_(d) {
  if (!positive_finite(d.rate)) throw ParameterError("exponential rate must be > 0");
}

Distribution::Distribution(Erlang d) : v_(d) {
  if (d.shape < 1) throw ParameterError("Erlang shape k must be an integer >= 1");
  if (!positive_finite(d.rate)) throw ParameterError("Erlang rate must be > 0");
}

Distribution::Distribution(Deterministic d) : v_(d) {
  if (!positive_finite(d.gap)) throw ParameterError("deterministic gap must be > 0");
}

Distribution::Distribution(Pareto d) : v_(d) {
  if (!(d.shape > 1.0) || !std::isfinite(d.shape)) {
    throw ParameterError("Pareto shape alpha must be > 1 (finite mean)");
  }
  if (!positive_finite(d.scale)) throw ParameterError("Pareto scale t_m must be > 0");
}

bool operator==(const Distribution& a, const Distribution& b) {
  return std::visit(
      [](const auto& x, const auto& y) -> bool {
        using X = std::decay_t<decltype(x)>;
        using Y = std::decay_t<decltype(y)>;
        if constexpr (!std::is_same_v<X, Y>) {
          return false;
        } else if constexpr (std::is_same_v<X, Exponential>) {
          return x.rate == y.rate;
        } else if constexpr (std::is_same_v<X, Erlang>) {
          return x.shape == y.shape && x.rate == y.rate;
        } else if constexpr (std::is_same_v<X, Deterministic>) {
          return x.gap == y.gap;
        } else {
          return x.shape == y.shape && x.scale == y.scale;
        }
      },
      a.v_, b.v_);
}

std::string Distribution::describe() const {
  return std::visit(Overloaded{
                        [](const Exponential& d) { return "exp:" + format_double(d.rate); },
                        [](const Erlang& d) {
                          return "erlang:" + std::to_string(d.shape) + "," + format_double(d.rate);
                        },
                        [](const Deterministic& d) { return "det:" + format_double(d.gap); },
                        [](const Pareto& d) {
                          return "pareto:" + format_double(d.shape) + "," + format_double(d.scale);
                        },
                    },
                    v_);
}

double cdf(const Distribution& d, double t) {
  require_time(t);
  return std::visit(Overloaded{
                        [&](const Exponential& e) { return -std::expm1(-e.rate * t); },
                        [&](const Erlang& e) {
                          return boost::math::gamma_p(static_cast<double>(e.shape), e.rate * t);
                        },
                        [&](const Deterministic& e) { return t >= e.gap ? 1.0 : 0.0; },
                        [&](const Pareto& e) {
                          return t < e.scale ? 0.0 : 1.0 - std::pow(e.scale / t, e.shape);
                        },
                    },
                    d.variant());
}

double cdf_integral(const Distribution& d, double t) {
  require_time(t);
  return std::visit(
      Overloaded{
          [&](const Exponential& e) { return exp_excess(e.rate * t) / e.rate; },
          [&](const Erlang& e) {
            // t F(t) - integral of u f(u), the latter being (k / lambda) P(k + 1, lambda t).
            const double x = e.rate * t;
            const double k = e.shape;
            return t * boost::math::gamma_p(k, x) - (k / e.rate) * boost::math::gamma_p(k + 1.0, x);
          },
          [&](const Deterministic& e) { return std::max(0.0, t - e.gap); },
          [&](const Pareto& e) {
            if (t < e.scale) return 0.0;
            return t + (t * std::pow(e.scale / t, e.shape) - e.scale * e.shape) / (e.shape - 1.0);
          },
      },
      d.variant());
}

double survival_integral(const Distribution& d, double t) {
  require_time(t);
  if (std::isinf(t)) return mean(d);
  return std::visit(
      Overloaded{
          [&](const Exponential& e) { return -std::expm1(-e.rate * t) / e.rate; },
          [&](const Erlang& e) {
            const double x = e.rate * t;
            double sum = 0.0;
            for (int n = 1; n <= e.shape; ++n) sum += boost::math::gamma_p(static_cast<double>(n), x);
            return sum / e.rate;
          },
          [&](const Deterministic& e) { return std::min(t, e.gap); },
          [&](const Pareto& e) {
            if (t < e.scale) return t;
            return (e.scale * e.shape - t * std::pow(e.scale / t, e.shape)) / (e.shape - 1.0);
          },
      },
      d.variant());
}

double mean(const Distribution& d) {
  return std::visit(Overloaded{
                        [](const Exponential& e) { return 1.0 / e.rate; },
                        [](const Erlang& e) { return e.shape / e.rate; },
                        [](const Deterministic& e) { return e.gap; },
                        [](const Pareto& e) { return e.shape * e.scale / (e.shape - 1.0); },
                    },
                    d.variant());
}

double normalized_rate(const Distribution& d, double window) {
  if (!positive_finite(window)) throw ParameterError("window must be > 0");
  return window / mean(d);
}

Distribution DistributionFamily::with_mean(double mean_gap) const {
  if (!positive_finite(mean_gap)) throw ParameterError("mean inter-request time must be > 0");
  switch (kind) {
    case FamilyKind::Exponential:
      return Exponential{1.0 / mean_gap};
    case FamilyKind::Erlang:
      return Erlang{static_cast<int>(shape), shape / mean_gap};
    case FamilyKind::Deterministic:
      return Deterministic{mean_gap};
    case FamilyKind::Pareto:
      return Pareto{shape, (shape - 1.0) / shape * mean_gap};
  }
  throw ParameterError("unknown distribution family");
}

std::string DistributionFamily::describe() const {
  switch (kind) {
    case FamilyKind::Exponential:
      return "exp:auto";
    case FamilyKind::Erlang:
      return "erlang:" + std::to_string(static_cast<int>(shape)) + ",auto";
    case FamilyKind::Deterministic:
      return "det:auto";
    case FamilyKind::Pareto:
      return "pareto:" + format_double(shape) + ",auto";
  }
  return "?";
}

DistributionFamily family_of(const Distribution& d) {
  return std::visit(Overloaded{
                        [](const Exponential&) { return DistributionFamily::exponential(); },
                        [](const Erlang& e) { return DistributionFamily::erlang(e.shape); },
                        [](const Deterministic&) { return DistributionFamily::deterministic(); },
                        [](const Pareto& e) { return DistributionFamily::pareto(e.shape); },
                    },
                    d.variant());
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double number(std::string_view token, std::string_view text) {
  auto v = parse_double(token);
  if (!v) throw ParameterError("bad number '" + std::string(token) + "' in distribution '" + std::string(text) + "'");
  return *v;
}

}  // namespace

DistributionSpec parse_distribution_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParameterError("distribution '" + std::string(text) + "' must look like name:params");
  }
  const std::string_view name = trim(text.substr(0, colon));
  const auto params = split(text.substr(colon + 1), ',');
  auto expect = [&](std::size_t n) {
    if (params.size() != n) {
      throw ParameterError("distribution '" + std::string(text) + "' expects " + std::to_string(n) +
                           " parameter(s)");
    }
  };
  const bool free = params.back() == "auto";

  if (name == "exp" || name == "exponential") {
    expect(1);
    DistributionSpec spec{DistributionFamily::exponential(), std::nullopt};
    if (!free) spec.concrete = Distribution(Exponential{number(params[0], text)});
    return spec;
  }
  if (name == "erlang") {
    expect(2);
    const auto k = parse_integer(params[0]);
    if (!k || *k < 1 || *k > 1000) throw ParameterError("Erlang shape must be an integer in [1, 1000]");
    DistributionSpec spec{DistributionFamily::erlang(static_cast<int>(*k)), std::nullopt};
    if (!free) spec.concrete = Distribution(Erlang{static_cast<int>(*k), number(params[1], text)});
    return spec;
  }
  if (name == "det" || name == "deterministic") {
    expect(1);
    DistributionSpec spec{DistributionFamily::deterministic(), std::nullopt};
    if (!free) spec.concrete = Distribution(Deterministic{number(params[0], text)});
    return spec;
  }
  if (name == "pareto") {
    expect(2);
    const double alpha = number(params[0], text);
    if (!(alpha > 1.0) || !std::isfinite(alpha)) throw ParameterError("Pareto shape alpha must be > 1");
    DistributionSpec spec{DistributionFamily::pareto(alpha), std::nullopt};
    if (!free) spec.concrete = Distribution(Pareto{alpha, number(params[1], text)});
    return spec;
  }
  throw ParameterError("unknown distribution '" + std::string(name) + "'");
}

Distribution parse_distribution(std::string_view text) {
  auto spec = parse_distribution_spec(text);
  if (!spec.concrete) {
    throw ParameterError("distribution '" + std::string(text) + "' needs a concrete rate, not 'auto'");
  }
  return *spec.concrete;
}

}  // namespace ttlcache
