#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "ttlcache/random.hpp"

namespace ttlcache {

struct Exponential {
  double rate;
};

struct Erlang {
  int shape;
  double rate;
};

struct Deterministic {
  double gap;
};

// Support starts at scale; shape must exceed 1 for a finite mean.
struct Pareto {
  double shape;
  double scale;
};

// IID inter-request time distribution. Construction validates parameters and
// throws ParameterError.
class Distribution {
 public:
  using Variant = std::variant<Exponential, Erlang, Deterministic, Pareto>;

  Distribution(Exponential d);
  Distribution(Erlang d);
  Distribution(Deterministic d);
  Distribution(Pareto d);

  const Variant& variant() const noexcept { return v_; }

  // Canonical CLI spelling, e.g. "erlang:2,4". Parses back to an equal value.
  std::string describe() const;

  friend bool operator==(const Distribution& a, const Distribution& b);

 private:
  Variant v_;
};

// F(t). Throws DomainError for t < 0.
double cdf(const Distribution& d, double t);

// Integral of F over [0, t]. Throws DomainError for t < 0.
double cdf_integral(const Distribution& d, double t);

// Integral of 1 - F over [0, t], i.e. t - cdf_integral(d, t), evaluated
// without the cancellation of the direct difference. Accepts t = +inf
// (returns the mean).
double survival_integral(const Distribution& d, double t);

double mean(const Distribution& d);

// Expected number of requests in a window: window / mean(d).
double normalized_rate(const Distribution& d, double window);

// Draws one gap by inversion, taking uniforms on (0, 1) from next_uniform.
// Erlang consumes `shape` uniforms, Deterministic none, the others one.
template <class UniformSource>
double sample(const Distribution& d, UniformSource&& next_uniform) {
  return std::visit(
      [&](const auto& dist) -> double {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, Exponential>) {
          return -std::log1p(-next_uniform()) / dist.rate;
        } else if constexpr (std::is_same_v<T, Erlang>) {
          double sum = 0.0;
          for (int i = 0; i < dist.shape; ++i) sum += -std::log1p(-next_uniform()) / dist.rate;
          return sum;
        } else if constexpr (std::is_same_v<T, Deterministic>) {
          return dist.gap;
        } else {
          return dist.scale * std::pow(1.0 - next_uniform(), -1.0 / dist.shape);
        }
      },
      d.variant());
}

inline double sample(const Distribution& d, Rng& rng) {
  return sample(d, [&rng] { return rng.uniform(); });
}

enum class FamilyKind { Exponential, Erlang, Deterministic, Pareto };

// A distribution with its shape fixed (k for Erlang, alpha for Pareto) and its
// rate or scale left free. Used by sweeps and Zipf catalogs.
struct DistributionFamily {
  FamilyKind kind = FamilyKind::Exponential;
  double shape = 1.0;

  static DistributionFamily exponential() { return {FamilyKind::Exponential, 1.0}; }
  static DistributionFamily erlang(int k) { return {FamilyKind::Erlang, static_cast<double>(k)}; }
  static DistributionFamily deterministic() { return {FamilyKind::Deterministic, 1.0}; }
  static DistributionFamily pareto(double alpha) { return {FamilyKind::Pareto, alpha}; }

  // Member with the given mean inter-request time.
  Distribution with_mean(double mean_gap) const;

  // Member with window / mean == rate.
  Distribution at_normalized_rate(double rate, double window) const {
    return with_mean(window / rate);
  }

  std::string describe() const;  // e.g. "pareto:1.25,auto"

  friend bool operator==(const DistributionFamily&, const DistributionFamily&) = default;
};

DistributionFamily family_of(const Distribution& d);

// `exp:rate`, `erlang:k,rate`, `det:gap`, `pareto:alpha,scale`. The free
// parameter may be `auto`, in which case only the family is returned.
struct DistributionSpec {
  DistributionFamily family;
  std::optional<Distribution> concrete;
};

// Throws ParameterError on malformed or out-of-range input.
DistributionSpec parse_distribution_spec(std::string_view text);
Distribution parse_distribution(std::string_view text);

}  // namespace ttlcache
