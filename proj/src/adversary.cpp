#include "ttlcache/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ttlcache/errors.hpp"
#include "ttlcache/random.hpp"

namespace ttlcache {

AdversaryConfig AdversaryConfig::defaults(int m, double ttl, double remote_cost, std::size_t batches) {
  return AdversaryConfig{m, 1e-4 * remote_cost, 1.01 * std::max(ttl, remote_cost), batches};
}

void AdversaryConfig::validate() const {
  if (m < 1) throw ParameterError("M must be >= 1");
  if (batches < 1) throw ParameterError("batches must be >= 1");
  if (!(batch_epsilon > 0.0) || !std::isfinite(batch_epsilon)) {
    throw ParameterError("batch epsilon must be > 0");
  }
  if (!(inter_batch_gap > 0.0) || !std::isfinite(inter_batch_gap)) {
    throw ParameterError("inter-batch gap must be > 0");
  }
  if (m * batch_epsilon > 1e-3 * inter_batch_gap) {
    throw ParameterError("M * epsilon must not exceed 1e-3 * inter-batch gap");
  }
}

void AdversaryConfig::validate_tight(double ttl, double remote_cost) const {
  validate();
  if (!(inter_batch_gap > std::max(ttl, remote_cost))) {
    throw ParameterError("inter-batch gap must exceed max(T, R)");
  }
}

RequestTrace batch_trace(const AdversaryConfig& cfg) {
  cfg.validate();
  RequestTrace::Builder b;
  for (std::size_t batch = 0; batch < cfg.batches; ++batch) {
    for (int j = 0; j < cfg.m; ++j) {
      b.add(static_cast<double>(batch) * cfg.inter_batch_gap + j * cfg.batch_epsilon, "1");
    }
  }
  return std::move(b).build();
}

RequestTrace even_trace(double spacing, std::size_t n) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ParameterError("spacing must be > 0");
  if (n < 1) throw ParameterError("n must be >= 1");
  RequestTrace::Builder b;
  for (std::size_t i = 0; i < n; ++i) b.add(static_cast<double>(i) * spacing, "1");
  return std::move(b).build();
}

std::optional<double> competitive_bound(const PolicySpec& policy, double r) {
  const double t = policy.ttl();
  switch (policy.kind()) {
    case PolicyKind::AlwaysOnMth:
      if (policy.m() == 1 && t > 0.0) return std::max((r + t) / r, (r + t) / t);
      if (t == r) return policy.m() + 1.0;
      return std::nullopt;
    case PolicyKind::SingleWindowMth:
      if (t == r) return policy.m() + 1.0;
      return std::nullopt;
    case PolicyKind::DualWindow2nd:
      if (t == r && policy.window() == r) return 3.0;
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

RequestTrace random_adversary_trace(const PolicySpec& policy, const CostParams& costs,
                                    std::uint64_t seed, std::size_t trial) {
  Rng rng = Rng::for_stream(seed, trial);
  const double r = costs.remote_cost();
  const double t = std::isfinite(policy.ttl()) ? policy.ttl() : r;
  const double w = policy.kind() == PolicyKind::DualWindow2nd ? policy.window() : t;
  const double scale = std::max({r, t, w});
  const double critical[] = {r, t, w};

  std::vector<double> gaps;
  const std::size_t segments = 1 + rng.below(12);
  for (std::size_t s = 0; s < segments; ++s) {
    switch (rng.below(5)) {
      case 0: {  // a batch, then a long idle gap
        const std::size_t k = 1 + rng.below(static_cast<std::uint64_t>(policy.m()) + 2);
        for (std::size_t j = 1; j < k; ++j) gaps.push_back(1e-4 * r * rng.uniform());
        gaps.push_back(scale * (1.0 + 1e-3 + 2.0 * rng.uniform()));
        break;
      }
      case 1: {  // gaps at or just around a threshold
        const std::size_t k = 1 + rng.below(8);
        for (std::size_t j = 0; j < k; ++j) {
          const double c = critical[rng.below(3)];
          const double nudge = (rng.below(3) == 0) ? 0.0 : (rng.uniform() - 0.5) * 2e-3 * c;
          gaps.push_back(c + nudge);
        }
        break;
      }
      case 2: {  // evenly spaced run
        const double spacing = scale * 2.0 * rng.uniform();
        const std::size_t k = 1 + rng.below(20);
        for (std::size_t j = 0; j < k; ++j) gaps.push_back(spacing);
        break;
      }
      case 3: {  // uniform gaps
        const std::size_t k = 1 + rng.below(20);
        for (std::size_t j = 0; j < k; ++j) gaps.push_back(3.0 * scale * rng.uniform());
        break;
      }
      default: {  // heavy tail
        const std::size_t k = 1 + rng.below(20);
        for (std::size_t j = 0; j < k; ++j) {
          gaps.push_back(0.05 * scale * std::pow(rng.uniform(), -1.0 / 1.2));
        }
        break;
      }
    }
  }

  RequestTrace::Builder b;
  double now = 0.0;
  b.add(now, "1");
  for (double g : gaps) {
    double next = now + g;
    if (!(next > now)) next = std::nextafter(now, INFINITY);
    b.add(next, "1");
    now = next;
  }
  return std::move(b).build();
}

AdversaryResult random_adversary_search(const PolicySpec& policy, const CostParams& costs,
                                        std::size_t trials, std::uint64_t seed, Execution exec) {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  std::vector<double> ratio(trials);
  auto run = [&](std::size_t i) {
    ratio[i] = competitive_ratio(random_adversary_trace(policy, costs, seed, i), policy, costs);
  };
  const auto n = static_cast<long long>(trials);
  if (exec == Execution::Serial) {
    for (long long i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(dynamic, 64)
    for (long long i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
  }

  AdversaryResult result;
  result.worst_trial = static_cast<std::size_t>(std::max_element(ratio.begin(), ratio.end()) - ratio.begin());
  result.worst_ratio = ratio[result.worst_trial];
  result.worst_trace = random_adversary_trace(policy, costs, seed, result.worst_trial);
  const CostReport report = simulate(result.worst_trace, policy, costs);
  result.worst_ratio_excluding_tail =
      report.total_excluding_tail() / offline_optimal_cost(result.worst_trace, costs).total();
  return result;
}

}  // namespace ttlcache
