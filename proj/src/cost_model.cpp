#include "ttlcache/cost_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ttlcache/errors.hpp"

namespace ttlcache {

CostParams::CostParams(double remote_cost) : remote_cost_(remote_cost) {
  if (!(remote_cost > 0.0) || !std::isfinite(remote_cost)) {
    throw ParameterError("remote cost R must be a positive finite number");
  }
}

RequestTrace::Builder& RequestTrace::Builder::add(double time, std::string_view object_id,
                                                  double size) {
  if (!std::isfinite(time) || time < 0.0) {
    throw ValidationError("timestamp must be a non-negative finite number");
  }
  if (!std::isfinite(size) || !(size > 0.0)) {
    throw ValidationError("size must be a positive finite number");
  }
  if (!requests_.empty() && time < requests_.back().time) {
    std::ostringstream msg;
    msg << "timestamp " << time << " is earlier than the previous request at "
        << requests_.back().time;
    throw ValidationError(msg.str());
  }

  auto [it, inserted] = index_.try_emplace(std::string(object_id), static_cast<ObjectIndex>(ids_.size()));
  const ObjectIndex object = it->second;
  if (inserted) {
    if (ids_.size() >= std::numeric_limits<ObjectIndex>::max()) {
      throw ValidationError("too many distinct objects");
    }
    ids_.emplace_back(object_id);
    last_time_.push_back(time);
    sizes_.push_back(size);
  } else {
    if (!(time > last_time_[object])) {
      throw ValidationError("duplicate timestamp for object '" + std::string(object_id) + "'");
    }
    if (size != sizes_[object]) {
      throw ValidationError("object '" + std::string(object_id) + "' changes size");
    }
    last_time_[object] = time;
  }
  requests_.push_back({time, object, size});
  return *this;
}

RequestTrace RequestTrace::Builder::build() && {
  RequestTrace trace;
  trace.requests_ = std::move(requests_);
  trace.ids_ = std::move(ids_);
  trace.sizes_ = std::move(sizes_);
  trace.index_ = std::move(index_);
  return trace;
}

std::optional<ObjectIndex> RequestTrace::find_object(std::string_view object_id) const {
  auto it = index_.find(std::string(object_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double RequestTrace::first_time() const {
  if (requests_.empty()) throw NotFoundError("empty trace has no first request");
  return requests_.front().time;
}

double RequestTrace::last_time() const {
  if (requests_.empty()) throw NotFoundError("empty trace has no last request");
  return requests_.back().time;
}

std::vector<ObjectRequests> RequestTrace::by_object() const {
  std::vector<ObjectRequests> out(ids_.size());
  std::vector<std::size_t> counts(ids_.size(), 0);
  for (const Request& r : requests_) ++counts[r.object];
  for (ObjectIndex i = 0; i < out.size(); ++i) {
    out[i].object = i;
    out[i].size = sizes_[i];
    out[i].times.reserve(counts[i]);
  }
  for (const Request& r : requests_) out[r.object].times.push_back(r.time);
  return out;
}

CostReport& CostReport::operator+=(const CostReport& other) noexcept {
  bandwidth_cost += other.bandwidth_cost;
  storage_cost += other.storage_cost;
  miss_count += other.miss_count;
  hit_count += other.hit_count;
  trailing_storage += other.trailing_storage;
  first_request_cost += other.first_request_cost;
  return *this;
}

std::vector<double> inter_request_gaps(const RequestTrace& trace, std::string_view object_id) {
  const auto object = trace.find_object(object_id);
  if (!object) throw NotFoundError("unknown object '" + std::string(object_id) + "'");

  std::vector<double> gaps;
  bool seen = false;
  double previous = 0.0;
  for (const Request& r : trace.requests()) {
    if (r.object != *object) continue;
    if (seen) gaps.push_back(r.time - previous);
    previous = r.time;
    seen = true;
  }
  return gaps;
}

}  // namespace ttlcache
