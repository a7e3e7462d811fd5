#include "ttlcache/steady_state.hpp"

#include <cmath>

#include "ttlcache/errors.hpp"
#include "ttlcache/random.hpp"

namespace ttlcache {

std::vector<SteadyStateEstimate> estimate_steady_state(const Distribution& d,
                                                       const std::vector<PolicySpec>& policies,
                                                       double remote_cost, std::uint64_t seed,
                                                       const SteadyStateOptions& options) {
  if (options.batches < 2 || options.gaps_per_batch < 1) {
    throw ParameterError("steady-state estimation needs at least 2 batches of 1 gap");
  }
  const CostParams costs(remote_cost);
  const std::size_t k = policies.size();
  std::vector<ObjectSimulator> sims;
  for (const auto& p : policies) sims.emplace_back(p, costs.remote_cost());
  for (auto& s : sims) s.advance(0.0);

  Rng rng = Rng::for_stream(seed, 0);
  std::vector<double> previous(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) previous[j] = sims[j].report().total();

  std::vector<std::vector<double>> batch_cost(k, std::vector<double>(options.batches));
  std::vector<double> batch_time(options.batches);

  const std::size_t total_batches = options.burn_in_batches + options.batches;
  for (std::size_t b = 0; b < total_batches; ++b) {
    double time = 0.0;
    for (std::size_t g = 0; g < options.gaps_per_batch; ++g) {
      const double gap = sample(d, rng);
      time += gap;
      for (auto& s : sims) s.advance(gap);
    }
    for (std::size_t j = 0; j < k; ++j) {
      const double now = sims[j].report().total();
      if (b >= options.burn_in_batches) batch_cost[j][b - options.burn_in_batches] = now - previous[j];
      previous[j] = now;
    }
    if (b >= options.burn_in_batches) batch_time[b - options.burn_in_batches] = time;
  }

  const double nb = static_cast<double>(options.batches);
  double time_sum = 0.0;
  for (double t : batch_time) time_sum += t;
  const double time_mean = time_sum / nb;

  std::vector<SteadyStateEstimate> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    double cost_sum = 0.0;
    for (double c : batch_cost[j]) cost_sum += c;
    const double rho = cost_sum / time_sum;
    double ss = 0.0;
    for (std::size_t b = 0; b < options.batches; ++b) {
      const double r = batch_cost[j][b] - rho * batch_time[b];
      ss += r * r;
    }
    out[j].cost_per_time_unit = rho;
    out[j].standard_error = std::sqrt(ss / (nb * (nb - 1.0))) / time_mean;
    const double ttl = std::isfinite(policies[j].ttl()) ? policies[j].ttl() : 0.0;
    out[j].resolution = (remote_cost + ttl) / time_sum;
    out[j].gaps = static_cast<std::uint64_t>(options.batches * options.gaps_per_batch);
  }
  return out;
}

}  // namespace ttlcache
