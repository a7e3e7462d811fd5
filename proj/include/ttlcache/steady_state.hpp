#pragma once

#include <cstdint>
#include <vector>

#include "ttlcache/distributions.hpp"
#include "ttlcache/policies.hpp"

namespace ttlcache {

struct SteadyStateEstimate {
  double cost_per_time_unit = 0.0;
  double standard_error = 0.0;
  // Cost-rate change caused by one more or one fewer expiry in the sample,
  // (R + T) / simulated time. Events rarer than one per sample move the true
  // rate by less than this but leave no trace in standard_error.
  double resolution = 0.0;
  std::uint64_t gaps = 0;

  // max(standard_error, resolution)
  double uncertainty() const { return standard_error > resolution ? standard_error : resolution; }
};

struct SteadyStateOptions {
  std::size_t batches = 100;
  std::size_t gaps_per_batch = 10'000;
  // Leading batches discarded before estimation.
  std::size_t burn_in_batches = 1;
};

// Long-run cost per time unit of each policy on one object whose gaps are
// drawn IID from d. All policies see the same gap sequence. The estimate is the
// ratio of summed cost to summed time over the retained batches; its standard
// error comes from the batch-means ratio estimator.
std::vector<SteadyStateEstimate> estimate_steady_state(const Distribution& d,
                                                       const std::vector<PolicySpec>& policies,
                                                       double remote_cost, std::uint64_t seed,
                                                       const SteadyStateOptions& options = {});

}  // namespace ttlcache
