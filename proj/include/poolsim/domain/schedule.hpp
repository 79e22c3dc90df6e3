#pragma once

#include <functional>
#include <span>
#include <vector>

#include "poolsim/domain/constraints.hpp"
#include "poolsim/domain/request.hpp"
#include "poolsim/domain/stop.hpp"
#include "poolsim/spcache/oracle.hpp"

namespace poolsim::domain {

/// Where a vehicle's next plan starts: the first leg departs `node` as if the
/// vehicle had already driven `offset` millimeters from its last departure
/// at `base`, so arrival at X is base + ceil((offset + d(node, X)) / speed).
struct PlanOrigin {
  NodeId node = kNoNode;
  TimeMs base = 0;
  Millimeters offset = 0;
};

/// A pickup (WaitStop + PickUp pair) or a dropoff in routing form.
struct RouteStop {
  NodeId node = kNoNode;
  RequestId request = kNoRequest;
  bool pickup = false;
  TimeMs ready = 0;       // pickups: when the passenger is at the node
  Millimeters walk = 0;   // walking distance between this node and the request's origin/destination

  friend bool operator==(const RouteStop&, const RouteStop&) = default;
};

struct VehicleContext {
  PlanOrigin origin;
  MmPerSecond speed = 10000;
  int capacity = 4;
  int load = 0;  // passengers on board at the origin
};

enum class Violation : std::uint8_t {
  None,
  Precedence,
  Capacity,
  WaitTime,
  TotalTime,
  ExtraTime,
  WalkDistance,
  Unreachable
};
const char* to_string(Violation v);

struct ScheduleCheck {
  Violation violation = Violation::None;
  std::size_t stop_index = 0;
  RequestId request = kNoRequest;
  TimeMs completion = 0;  // departure from the last stop
  TimeMs drive_ms = 0;    // sum of leg travel times
  TimeMs hold_ms = 0;     // sum of waits for passengers

  bool ok() const { return violation == Violation::None; }
};

/// Per-stop timeline of a checked schedule.
struct StopTiming {
  TimeMs arrival = 0;
  TimeMs departure = 0;
  Millimeters leg_mm = 0;
  int load_after = 0;
};

/// Request lookup by id over a dense table, with an optional extra record
/// for a request that is still being planned.
class RequestView {
 public:
  explicit RequestView(const std::vector<Request>& table, const Request* extra = nullptr)
      : table_(&table), extra_(extra) {}
  const Request& operator[](RequestId id) const {
    if (extra_ != nullptr && id == extra_->id) return *extra_;
    return (*table_)[id];
  }

 private:
  const std::vector<Request>* table_;
  const Request* extra_;
};

/// First-leg and later-leg travel times.
TimeMs first_leg_ms(const PlanOrigin& o, Millimeters d, MmPerSecond speed);

/// Simulates `stops` forward from the context and reports the first
/// violation of Z. A request counts as on board when its pickup_time is set.
ScheduleCheck check_schedule(const VehicleContext& ctx, std::span<const RouteStop> stops, const RequestView& reqs,
                             const ConstraintSet& z, const spcache::DistanceOracle& oracle,
                             std::vector<StopTiming>* timing = nullptr);

/// Candidate produced by the insertion search.
struct Insertion {
  bool feasible = false;
  std::size_t pickup_index = 0;   // position of the pickup in the new list
  std::size_t dropoff_index = 0;  // position of the dropoff in the new list
  double cost = 0.0;
  TimeMs drive_delta = 0;
  TimeMs hold = 0;  // vehicle wait at the new pickup
  ScheduleCheck check;
};

using InsertionCost = std::function<double(const ScheduleCheck& with, TimeMs drive_delta, TimeMs hold)>;

/// Best feasible way to add `pickup` and `dropoff` to `base` while keeping
/// the order of existing stops. Positions below `locked` are fixed. Ties keep
/// the lowest (pickup, dropoff) pair. `base` must itself be feasible.
Insertion best_insertion(const VehicleContext& ctx, std::span<const RouteStop> base, std::size_t locked,
                         const RouteStop& pickup, const RouteStop& dropoff, const RequestView& reqs,
                         const ConstraintSet& z, const spcache::DistanceOracle& oracle, const InsertionCost& cost);

/// Every insertion (i, j) evaluated without pruning, in the same order.
Insertion best_insertion_exhaustive(const VehicleContext& ctx, std::span<const RouteStop> base, std::size_t locked,
                                    const RouteStop& pickup, const RouteStop& dropoff, const RequestView& reqs,
                                    const ConstraintSet& z, const spcache::DistanceOracle& oracle,
                                    const InsertionCost& cost);

std::vector<RouteStop> with_insertion(std::span<const RouteStop> base, const Insertion& ins, const RouteStop& pickup,
                                      const RouteStop& dropoff);

}  // namespace poolsim::domain
