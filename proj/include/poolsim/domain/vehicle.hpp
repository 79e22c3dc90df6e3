#pragma once

#include <span>
#include <vector>

#include "poolsim/domain/schedule.hpp"
#include "poolsim/domain/stop.hpp"

namespace poolsim::domain {

/// Fleet unit. Motion is represented by the leg currently being driven: the
/// vehicle left `path[0]` at `anchor_time` and reaches path[k] at
/// anchor_time + ceil(path_mm[k] / speed).
struct Vehicle {
  VehicleId id = 0;
  int capacity = 4;
  MmPerSecond speed = 10000;

  VehicleState state = VehicleState::ForHire;
  int occupancy = 0;
  Millimeters odometer = 0;
  std::vector<Stop> stops;  // pending, front first
  // True once the vehicle stands at the front WaitStop waiting to board.
  bool at_front = false;

  TimeMs anchor_time = 0;
  std::vector<NodeId> path;        // path[0] is the last departure node
  std::vector<Millimeters> path_mm;  // cumulative distance along path
  std::size_t path_pos = 0;        // last node reached

  // Bookkeeping for metrics.
  TimeMs hold_ms = 0;
  TimeMs occupancy_area = 0;  // passenger-milliseconds
  TimeMs occupied_ms = 0;
  TimeMs last_occupancy_change = 0;

  NodeId node() const { return path[path_pos]; }
  bool idle() const { return stops.empty(); }
  bool roaming() const { return !stops.empty() && stops.front().kind == StopKind::Roam; }
  TimeMs time_at(std::size_t k) const { return anchor_time + travel_ms(path_mm[k], speed); }
  /// Distance driven on the current edge at `clock` (0 when at a node).
  Millimeters offset_at(TimeMs clock) const;

  /// Where a new plan for this vehicle starts at `clock`.
  PlanOrigin planning_origin(TimeMs clock) const;
  /// Pickups and dropoffs still ahead in routing form (roams dropped).
  std::vector<RouteStop> route(const std::vector<Request>& reqs, const ConstraintSet& z) const;
  /// Number of leading route stops a new plan has to keep in place.
  std::size_t locked_prefix() const { return at_front ? 1 : 0; }
  VehicleContext context(TimeMs clock) const { return VehicleContext{planning_origin(clock), speed, capacity, occupancy}; }
};

Vehicle make_vehicle(VehicleId id, NodeId at, int capacity, MmPerSecond speed, TimeMs clock = 0);

/// Stop records for a routing plan, with holds and leg distances taken from
/// the timeline.
std::vector<Stop> stops_from_route(std::span<const RouteStop> route, std::span<const StopTiming> timing,
                                   const RequestView& reqs);

}  // namespace poolsim::domain
