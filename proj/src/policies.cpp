#include "ttlcache/policies.hpp"

#include <cmath>
#include <limits>

#include "ttlcache/errors.hpp"
#include "ttlcache/numeric_text.hpp"

namespace ttlcache {
namespace {

void require_threshold(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ParameterError(std::string(name) + " must be a non-negative finite number");
  }
}

void require_m(int m) {
  if (m < 1) throw ParameterError("M must be >= 1");
}

}  // namespace

PolicySpec PolicySpec::always_on_mth(int m, double ttl) {
  require_m(m);
  require_threshold(ttl, "T");
  return PolicySpec(PolicyKind::AlwaysOnMth, m, ttl, 0.0);
}

PolicySpec PolicySpec::single_window_mth(int m, double ttl) {
  require_m(m);
  require_threshold(ttl, "T");
  return PolicySpec(PolicyKind::SingleWindowMth, m, ttl, ttl);
}

PolicySpec PolicySpec::dual_window_2nd(double window, double ttl) {
  require_threshold(window, "W");
  require_threshold(ttl, "T");
  if (window > ttl) throw ParameterError("dual-window policy requires W <= T");
  return PolicySpec(PolicyKind::DualWindow2nd, 2, ttl, window);
}

PolicySpec PolicySpec::static_always_local() {
  return PolicySpec(PolicyKind::StaticAlwaysLocal, 1, std::numeric_limits<double>::infinity(), 0.0);
}

PolicySpec PolicySpec::static_always_remote() {
  return PolicySpec(PolicyKind::StaticAlwaysRemote, 1, 0.0, 0.0);
}

std::string PolicySpec::label() const {
  switch (kind_) {
    case PolicyKind::AlwaysOnMth:
      return "always" + std::to_string(m_);
    case PolicyKind::SingleWindowMth:
      return "window" + std::to_string(m_);
    case PolicyKind::DualWindow2nd:
      return "dual2";
    case PolicyKind::StaticAlwaysLocal:
      return "local";
    case PolicyKind::StaticAlwaysRemote:
      return "remote";
  }
  return "?";
}

std::string PolicySpec::describe() const {
  switch (kind_) {
    case PolicyKind::AlwaysOnMth:
      return "always:" + std::to_string(m_) + " T=" + format_double(ttl_);
    case PolicyKind::SingleWindowMth:
      return "window:" + std::to_string(m_) + " T=" + format_double(ttl_);
    case PolicyKind::DualWindow2nd:
      return "dual:2 W=" + format_double(window_) + " T=" + format_double(ttl_);
    default:
      return label();
  }
}

ObjectSimulator::ObjectSimulator(const PolicySpec& policy, double remote_cost, double size)
    : policy_(policy), miss_cost_(remote_cost * size), size_(size) {}

bool ObjectSimulator::admits(double gap) {
  switch (policy_.kind()) {
    case PolicyKind::AlwaysOnMth:
      ++state_.counter;
      return state_.counter >= policy_.m();
    case PolicyKind::SingleWindowMth:
      state_.counter = (state_.seen && gap <= policy_.ttl()) ? state_.counter + 1 : 1;
      return state_.counter >= policy_.m();
    case PolicyKind::DualWindow2nd:
      return state_.seen && gap <= policy_.window();
    case PolicyKind::StaticAlwaysLocal:
      return true;
    case PolicyKind::StaticAlwaysRemote:
      return false;
  }
  return false;
}

void ObjectSimulator::request(double time) {
  serve(time, state_.seen ? time - state_.last_request_time : 0.0);
}

void ObjectSimulator::advance(double gap) {
  if (!state_.seen) {
    serve(0.0, 0.0);
    return;
  }
  serve(state_.last_request_time + gap, gap);
}

void ObjectSimulator::serve(double time, double gap) {
  if (state_.cached) {
    if (gap <= policy_.ttl()) {
      report_.storage_cost += size_ * gap;
      ++report_.hit_count;
      state_.last_request_time = time;
      return;
    }
    // Expired at last_request_time + T; AlwaysOnMth restarts its count.
    report_.storage_cost += size_ * policy_.ttl();
    state_.cached = false;
    state_.counter = 0;
  }

  report_.bandwidth_cost += miss_cost_;
  if (!state_.seen) report_.first_request_cost += miss_cost_;
  ++report_.miss_count;
  if (admits(gap)) {
    state_.cached = true;
    state_.counter = 0;
  }
  state_.seen = true;
  state_.last_request_time = time;
}

void ObjectSimulator::finish(double horizon, bool truncate) {
  if (!state_.cached) return;
  double tail = 0.0;
  if (policy_.kind() == PolicyKind::StaticAlwaysLocal) {
    tail = std::max(0.0, horizon - state_.last_request_time);
  } else {
    tail = policy_.ttl();
    if (truncate) tail = std::min(tail, std::max(0.0, horizon - state_.last_request_time));
  }
  report_.storage_cost += size_ * tail;
  report_.trailing_storage += size_ * tail;
}

double resolve_horizon(const RequestTrace& trace, const SimulationOptions& options) {
  if (trace.empty()) return options.horizon.value_or(0.0);
  const double last = trace.last_time();
  if (!options.horizon) return last;
  if (!(*options.horizon >= last)) {
    throw ParameterError("horizon " + format_double(*options.horizon) +
                         " precedes the last request at " + format_double(last));
  }
  return *options.horizon;
}

CostReport simulate_object(std::span<const double> times, double size, const PolicySpec& policy,
                           double remote_cost, double horizon, bool truncate) {
  ObjectSimulator sim(policy, remote_cost, size);
  for (double t : times) sim.request(t);
  sim.finish(horizon, truncate);
  return sim.report();
}

CostReport offline_object_cost(std::span<const double> times, double size, double remote_cost) {
  CostReport report;
  if (times.empty()) return report;
  report.bandwidth_cost = size * remote_cost;
  report.first_request_cost = size * remote_cost;
  report.miss_count = 1;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double gap = times[i] - times[i - 1];
    if (gap <= remote_cost) {
      report.storage_cost += size * gap;
      ++report.hit_count;
    } else {
      report.bandwidth_cost += size * remote_cost;
      ++report.miss_count;
    }
  }
  return report;
}

CostReport static_oracle_object_cost(std::span<const double> times, double size,
                                     double remote_cost, double horizon) {
  CostReport report;
  if (times.empty()) return report;
  const double n = static_cast<double>(times.size());
  const double remote = n * size * remote_cost;
  const double stored = size * (horizon - times.front());
  const double local = size * remote_cost + stored;
  report.first_request_cost = size * remote_cost;
  if (local < remote) {
    report.bandwidth_cost = size * remote_cost;
    report.storage_cost = stored;
    report.trailing_storage = size * (horizon - times.back());
    report.miss_count = 1;
    report.hit_count = times.size() - 1;
  } else {
    report.bandwidth_cost = remote;
    report.miss_count = times.size();
  }
  return report;
}

CostReport simulate(const RequestTrace& trace, const PolicySpec& policy, const CostParams& costs,
                    const SimulationOptions& options) {
  const double horizon = resolve_horizon(trace, options);
  std::vector<ObjectSimulator> sims;
  sims.reserve(trace.object_count());
  for (std::size_t i = 0; i < trace.object_count(); ++i) {
    sims.emplace_back(policy, costs.remote_cost(), trace.object_size(static_cast<ObjectIndex>(i)));
  }
  for (const Request& r : trace.requests()) sims[r.object].request(r.time);

  CostReport total;
  for (auto& sim : sims) {
    sim.finish(horizon, options.truncate_at_horizon);
    total += sim.report();
  }
  return total;
}

CostReport offline_optimal_cost(const RequestTrace& trace, const CostParams& costs) {
  CostReport total;
  for (const ObjectRequests& obj : trace.by_object()) {
    total += offline_object_cost(obj.times, obj.size, costs.remote_cost());
  }
  return total;
}

CostReport static_oracle_cost(const RequestTrace& trace, const CostParams& costs,
                              std::optional<double> horizon) {
  const double h = resolve_horizon(trace, SimulationOptions{horizon, false});
  CostReport total;
  for (const ObjectRequests& obj : trace.by_object()) {
    total += static_oracle_object_cost(obj.times, obj.size, costs.remote_cost(), h);
  }
  return total;
}

double competitive_ratio(const RequestTrace& trace, const PolicySpec& policy,
                         const CostParams& costs, const SimulationOptions& options) {
  if (trace.empty()) throw ParameterError("competitive ratio needs a non-empty trace");
  return simulate(trace, policy, costs, options).total() / offline_optimal_cost(trace, costs).total();
}

}  // namespace ttlcache
