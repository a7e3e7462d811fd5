#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ttlcache {

// Remote (miss) cost R, in units of storage cost per time unit. Storing one
// size unit for one time unit always costs 1.
class CostParams {
 public:
  explicit CostParams(double remote_cost);

  double remote_cost() const noexcept { return remote_cost_; }

 private:
  double remote_cost_;
};

using ObjectIndex = std::uint32_t;

struct Request {
  double time;
  ObjectIndex object;
  double size;
};

// All requests of one object, in time order.
struct ObjectRequests {
  ObjectIndex object;
  double size;
  std::vector<double> times;
};

// Immutable, validated request sequence. Timestamps are globally
// non-decreasing and strictly increasing per object; each object keeps a
// single size for the whole trace.
class RequestTrace {
 public:
  class Builder {
   public:
    // Throws ValidationError on any ordering or value violation.
    Builder& add(double time, std::string_view object_id, double size = 1.0);
    RequestTrace build() &&;

   private:
    std::vector<Request> requests_;
    std::vector<std::string> ids_;
    std::vector<double> last_time_;
    std::vector<double> sizes_;
    std::unordered_map<std::string, ObjectIndex> index_;
  };

  RequestTrace() = default;

  std::span<const Request> requests() const noexcept { return requests_; }
  std::size_t size() const noexcept { return requests_.size(); }
  bool empty() const noexcept { return requests_.empty(); }

  std::size_t object_count() const noexcept { return ids_.size(); }
  const std::string& object_id(ObjectIndex object) const { return ids_.at(object); }
  double object_size(ObjectIndex object) const { return sizes_.at(object); }
  std::optional<ObjectIndex> find_object(std::string_view object_id) const;

  double first_time() const;
  double last_time() const;

  // Groups requests per object, objects ordered by index (first appearance).
  std::vector<ObjectRequests> by_object() const;

 private:
  std::vector<Request> requests_;
  std::vector<std::string> ids_;
  std::vector<double> sizes_;
  std::unordered_map<std::string, ObjectIndex> index_;
};

// Decomposed cost of serving a trace. Sizes weight both the per-miss cost and
// the storage rate.
struct CostReport {
  double bandwidth_cost = 0.0;
  double storage_cost = 0.0;
  std::uint64_t miss_count = 0;
  std::uint64_t hit_count = 0;
  // Share of storage_cost accrued after each object's final request.
  double trailing_storage = 0.0;
  // Share of bandwidth_cost paid by each object's first request.
  double first_request_cost = 0.0;

  double total() const noexcept { return bandwidth_cost + storage_cost; }
  double total_excluding_tail() const noexcept { return total() - trailing_storage; }
  // Cost of the steady part of the trace: what follows each object's first
  // request, up to and including its last one.
  double renewal_total() const noexcept {
    return total() - trailing_storage - first_request_cost;
  }
  std::uint64_t request_count() const noexcept { return miss_count + hit_count; }

  CostReport& operator+=(const CostReport& other) noexcept;
  friend bool operator==(const CostReport&, const CostReport&) = default;
};

// Consecutive timestamp differences for one object (n-1 values for n requests).
// Throws NotFoundError for an unknown id.
std::vector<double> inter_request_gaps(const RequestTrace& trace, std::string_view object_id);

}  // namespace ttlcache
