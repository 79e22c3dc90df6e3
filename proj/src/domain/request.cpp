#include <stdexcept>

#include "poolsim/domain/constraints.hpp"
#include "poolsim/domain/request.hpp"

namespace poolsim::domain {

Request make_request(RequestId id, NodeId origin, NodeId destination, TimeMs request_time, int group) {
  if (group < 1) throw std::invalid_argument("group size must be at least 1");
  if (origin == destination) throw std::invalid_argument("request origin equals destination");
  Request r;
  r.id = id;
  r.origin = origin;
  r.destination = destination;
  r.request_time = request_time;
  r.group = group;
  return r;
}

void ConstraintSet::validate() const {
  if (t_wait < 0 || t_total < 0 || t_extra < 0 || c_run < 0) throw std::invalid_argument("time limits must be non-negative");
  if (t_total < t_wait) throw std::invalid_argument("T_total must be at least T_wait");
  if (capacity < 1) throw std::invalid_argument("capacity must be positive");
  if (walk_speed == 0) throw std::invalid_argument("walking speed must be positive");
  if (delta <= 0) throw std::invalid_argument("batching window must be positive");
}

}  // namespace poolsim::domain
