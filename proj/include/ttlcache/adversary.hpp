#pragma once

#include <cstdint>
#include <optional>

#include "ttlcache/cost_model.hpp"
#include "ttlcache/parallel.hpp"
#include "ttlcache/policies.hpp"

namespace ttlcache {

// Batches of M near-simultaneous requests separated by long idle gaps.
struct AdversaryConfig {
  int m = 1;
  double batch_epsilon = 1e-4;
  double inter_batch_gap = 1.01;
  std::size_t batches = 1000;

  // epsilon = 1e-4 R, gap = 1.01 max(T, R).
  static AdversaryConfig defaults(int m, double ttl, double remote_cost, std::size_t batches = 1000);

  // Throws ParameterError unless M >= 1, epsilon > 0, batches >= 1 and
  // M * epsilon <= 1e-3 * inter_batch_gap.
  void validate() const;
  // Additionally requires inter_batch_gap > max(T, R).
  void validate_tight(double ttl, double remote_cost) const;
};

// Single object "1": request j of batch b at b * gap + j * epsilon.
RequestTrace batch_trace(const AdversaryConfig& cfg);

// Single object "1" at 0, spacing, 2 spacing, ...
RequestTrace even_trace(double spacing, std::size_t n);

// Worst-case ratio proven for the policy, when T (and W) equal R. AlwaysOnMth
// with M = 1 also has a bound for other T. nullopt when none applies.
std::optional<double> competitive_bound(const PolicySpec& policy, double remote_cost);

struct AdversaryResult {
  double worst_ratio = 0.0;
  // Ratio of the same trace with the trailing TTL storage removed.
  double worst_ratio_excluding_tail = 0.0;
  std::size_t worst_trial = 0;
  RequestTrace worst_trace;
};

// Random single-object trace for one trial, mixing request batches, gaps near
// W, T and R, uniform gaps and heavy-tailed gaps.
RequestTrace random_adversary_trace(const PolicySpec& policy, const CostParams& costs,
                                    std::uint64_t seed, std::size_t trial);

// Maximum competitive ratio over `trials` random traces. Trial i uses the
// stream derived from (seed, i); ties keep the lowest trial index, so the
// result does not depend on the execution mode or thread count.
AdversaryResult random_adversary_search(const PolicySpec& policy, const CostParams& costs,
                                        std::size_t trials, std::uint64_t seed,
                                        Execution exec = Execution::Parallel);

}  // namespace ttlcache
