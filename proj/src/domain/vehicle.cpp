#include "poolsim/domain/vehicle.hpp"

#include <algorithm>
#include <stdexcept>

namespace poolsim::domain {

Vehicle make_vehicle(VehicleId id, NodeId at, int capacity, MmPerSecond speed, TimeMs clock) {
  if (capacity < 1) throw std::invalid_argument("vehicle capacity must be positive");
  if (speed == 0) throw std::invalid_argument("vehicle speed must be positive");
  Vehicle v;
  v.id = id;
  v.capacity = capacity;
  v.speed = speed;
  v.anchor_time = clock;
  v.path = {at};
  v.path_mm = {0};
  v.last_occupancy_change = clock;
  return v;
}

Millimeters Vehicle::offset_at(TimeMs clock) const {
  if (path_pos + 1 >= path.size()) return 0;
  const TimeMs since = clock - anchor_time;
  const Millimeters covered = covered_mm(since, speed);
  if (covered <= path_mm[path_pos]) return 0;
  return std::min(covered, path_mm[path_pos + 1]) - path_mm[path_pos];
}

PlanOrigin Vehicle::planning_origin(TimeMs clock) const {
  if (at_front) return PlanOrigin{node(), anchor_time, 0};
  if (stops.empty()) return PlanOrigin{node(), std::max(clock, anchor_time), 0};
  for (std::size_t k = path_pos; k < path.size(); ++k)
    if (time_at(k) >= clock) return PlanOrigin{path[k], anchor_time, path_mm[k]};
  return PlanOrigin{path.back(), anchor_time, path_mm.back()};
}

std::vector<RouteStop> Vehicle::route(const std::vector<Request>& reqs, const ConstraintSet& z) const {
  std::vector<RouteStop> out;
  for (const Stop& s : stops) {
    switch (s.kind) {
      case StopKind::WaitStop: {
        const Request& r = reqs[s.request];
        out.push_back(RouteStop{s.node, s.request, true, r.request_time + z.walk_ms(r.walk_pickup_mm), r.walk_pickup_mm});
        break;
      }
      case StopKind::DropOff: {
        const Request& r = reqs[s.request];
        out.push_back(RouteStop{s.node, s.request, false, 0, r.walk_dropoff_mm});
        break;
      }
      default: break;
    }
  }
  return out;
}

std::vector<Stop> stops_from_route(std::span<const RouteStop> route, std::span<const StopTiming> timing,
                                   const RequestView& reqs) {
  std::vector<Stop> out;
  for (std::size_t k = 0; k < route.size(); ++k) {
    const RouteStop& s = route[k];
    const Request& r = reqs[s.request];
    const TimeMs hold = k < timing.size() ? timing[k].departure - timing[k].arrival : 0;
    const Millimeters leg = k < timing.size() ? timing[k].leg_mm : 0;
    if (s.pickup) {
      out.push_back(Stop::wait_stop(s.node, s.request, hold, leg));
      out.push_back(Stop::pick_up(s.node, s.request, r.group));
    } else {
      out.push_back(Stop::drop_off(s.node, s.request, r.group, leg));
    }
  }
  return out;
}

}  // namespace poolsim::domain
