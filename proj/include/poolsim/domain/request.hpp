#pragma once

#include <optional>
#include <vector>

#include "poolsim/common/types.hpp"

namespace poolsim::domain {

inline constexpr VehicleId kNoVehicle = std::numeric_limits<VehicleId>::max();

struct Request {
  RequestId id = 0;
  NodeId origin = kNoNode;
  NodeId destination = kNoNode;
  TimeMs request_time = 0;
  int group = 1;
  // Door-to-door drive time at fleet speed, fixed at ingestion.
  TimeMs direct_ms = 0;

  // Scheduling outcome.
  NodeId pickup_node = kNoNode;
  NodeId dropoff_node = kNoNode;
  Millimeters walk_pickup_mm = 0;
  Millimeters walk_dropoff_mm = 0;
  VehicleId vehicle = kNoVehicle;
  std::optional<TimeMs> pickup_time;
  std::optional<TimeMs> dropoff_time;

  bool assigned() const { return vehicle != kNoVehicle; }
};

/// A request record with the scheduler-chosen meeting points stripped, as
/// produced by ingestion or demand generation.
Request make_request(RequestId id, NodeId origin, NodeId destination, TimeMs request_time, int group = 1);

}  // namespace poolsim::domain
