#pragma once

#include <optional>
#include <span>
#include <string>

#include "ttlcache/cost_model.hpp"

namespace ttlcache {

enum class PolicyKind {
  AlwaysOnMth,      // insert on the M-th miss since the last eviction
  SingleWindowMth,  // insert on the M-th request in a chain of gaps <= T
  DualWindow2nd,    // insert when the previous request is within W
  StaticAlwaysLocal,
  StaticAlwaysRemote,
};

// Insertion policy plus TTL eviction threshold T. Factories validate and throw
// ParameterError.
class PolicySpec {
 public:
  static PolicySpec always_on_mth(int m, double ttl);
  static PolicySpec single_window_mth(int m, double ttl);
  static PolicySpec dual_window_2nd(double window, double ttl);
  static PolicySpec static_always_local();
  static PolicySpec static_always_remote();

  PolicyKind kind() const noexcept { return kind_; }
  int m() const noexcept { return m_; }
  // Infinite for StaticAlwaysLocal, zero for StaticAlwaysRemote.
  double ttl() const noexcept { return ttl_; }
  double window() const noexcept { return window_; }

  // Column label used in CSV output: always1, window2, dual2, local, remote.
  std::string label() const;
  std::string describe() const;

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;

 private:
  PolicySpec(PolicyKind kind, int m, double ttl, double window)
      : kind_(kind), m_(m), ttl_(ttl), window_(window) {}

  PolicyKind kind_;
  int m_;
  double ttl_;
  double window_;
};

struct ObjectState {
  bool cached = false;
  bool seen = false;
  double last_request_time = 0.0;
  // Misses since eviction (AlwaysOnMth) or current chain length
  // (SingleWindowMth). Zero while cached.
  int counter = 0;

  double pending_eviction_time(double ttl) const { return last_request_time + ttl; }
};

// Event-driven cost accounting for one object. Eviction is resolved lazily at
// the next request; storage is integrated per inter-request interval.
class ObjectSimulator {
 public:
  ObjectSimulator(const PolicySpec& policy, double remote_cost, double size = 1.0);

  // Times must be strictly increasing.
  void request(double time);
  // Next request `gap` after the previous one. The first call is a request at
  // time 0 and ignores `gap`.
  void advance(double gap);

  // Books the storage accrued after the final request: T for TTL policies
  // (clipped at the horizon when `truncate`), horizon - last for StaticAlwaysLocal.
  void finish(double horizon, bool truncate);

  const CostReport& report() const noexcept { return report_; }
  const ObjectState& state() const noexcept { return state_; }

 private:
  bool admits(double gap);
  void serve(double time, double gap);

  PolicySpec policy_;
  double miss_cost_;
  double size_;
  ObjectState state_;
  CostReport report_;
};

struct SimulationOptions {
  // End of the observation window. Defaults to the trace's last timestamp.
  std::optional<double> horizon;
  // Clip trailing TTL storage at the horizon.
  bool truncate_at_horizon = false;
};

// Resolves the horizon against the trace; throws ParameterError when it
// precedes the last request.
double resolve_horizon(const RequestTrace& trace, const SimulationOptions& options);

// Single-object kernels shared by the trace-level entry points and the
// multi-file simulator.
CostReport simulate_object(std::span<const double> times, double size, const PolicySpec& policy,
                           double remote_cost, double horizon, bool truncate);
CostReport offline_object_cost(std::span<const double> times, double size, double remote_cost);
CostReport static_oracle_object_cost(std::span<const double> times, double size,
                                     double remote_cost, double horizon);

// Per-object simulation summed in object-index order. Deterministic.
CostReport simulate(const RequestTrace& trace, const PolicySpec& policy, const CostParams& costs,
                    const SimulationOptions& options = {});

// Clairvoyant lower bound: per object size * (R + sum min(gap, R)). Gaps <= R
// are booked as storage, the rest as bandwidth.
CostReport offline_optimal_cost(const RequestTrace& trace, const CostParams& costs);

// Per object, the cheaper of always-remote and always-local (fetched at the
// first request, stored until the horizon).
CostReport static_oracle_cost(const RequestTrace& trace, const CostParams& costs,
                              std::optional<double> horizon = std::nullopt);

// simulate(...).total() / offline_optimal_cost(...).total(). Throws
// ParameterError for an empty trace.
double competitive_ratio(const RequestTrace& trace, const PolicySpec& policy,
                         const CostParams& costs, const SimulationOptions& options = {});

}  // namespace ttlcache
