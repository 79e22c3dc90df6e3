#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "poolsim/assign/assignment.hpp"
#include "poolsim/domain/constraints.hpp"
#include "poolsim/domain/request.hpp"
#include "poolsim/domain/schedule.hpp"
#include "poolsim/domain/vehicle.hpp"
#include "poolsim/geo/meeting_points.hpp"
#include "poolsim/geo/road_network.hpp"
#include "poolsim/spcache/oracle.hpp"

namespace poolsim::stars {

using domain::Request;
using domain::Vehicle;

struct CostWeights {
  double c1 = 1.0;  // per second of extra driving
  double c2 = 1.0;  // per second of holding at the new pickup
};

/// Read-only view of everything a scheduling decision looks at.
struct SchedulerContext {
  const geo::RoadNetwork* network = nullptr;
  const spcache::DistanceOracle* oracle = nullptr;
  const geo::MeetingPointIndex* meeting_points = nullptr;  // required when z.d_w > 0
  domain::ConstraintSet z;
  CostWeights weights;
  const std::vector<Request>* requests = nullptr;  // indexed by request id
  TimeMs clock = 0;
  int threads = 1;
};

struct InsertionPlan {
  VehicleId vehicle = domain::kNoVehicle;
  std::size_t pickup_index = 0;
  std::size_t dropoff_index = 0;
  NodeId m_p = kNoNode;
  NodeId m_d = kNoNode;
  Millimeters walk_p = 0;
  Millimeters walk_d = 0;
  double cost = 0.0;  // seconds
  TimeMs hold = 0;
  TimeMs drive_delta = 0;
  std::vector<domain::RouteStop> route;  // the vehicle's full new plan
  std::vector<domain::StopTiming> timing;
};

/// A vehicle's current plan, taken once per decision.
struct VehicleSnapshot {
  const Vehicle* vehicle = nullptr;
  domain::VehicleContext ctx;
  std::vector<domain::RouteStop> base;
  std::size_t locked = 0;
};
VehicleSnapshot snapshot(const Vehicle& v, const SchedulerContext& sc);

/// Cheapest order-preserving insertion of pickup `m_p` and dropoff `m_d`
/// for `r`, with cost c1 * extra drive + c2 * hold.
std::optional<InsertionPlan> sharing_cost(const VehicleSnapshot& v, const Request& r, NodeId m_p, Millimeters walk_p,
                                          NodeId m_d, Millimeters walk_d, const SchedulerContext& sc);
/// Door-to-door shorthand.
std::optional<InsertionPlan> sharing_cost(const Vehicle& v, const Request& r, const SchedulerContext& sc);

struct MeetingSets {
  std::vector<geo::MeetingPoint> pickup;   // sorted by node
  std::vector<geo::MeetingPoint> dropoff;  // sorted by node
};

/// Candidate pickup and dropoff points of `r`, made disjoint so that a ride
/// never starts and ends at the same intersection: the destination leaves
/// the pickup side and every other shared node leaves the dropoff side.
/// Singletons {origin}, {destination} when d_w = 0.
MeetingSets meeting_sets(const Request& r, const SchedulerContext& sc);

/// Fix the dropoff at the destination and pick the best pickup point, then
/// fix that pickup and pick the best dropoff point.
std::optional<InsertionPlan> two_stage_meeting_points(const VehicleSnapshot& v, const Request& r,
                                                      const SchedulerContext& sc);

/// sharing_cost for RP (d_w = 0), two_stage_meeting_points for RPMP.
std::optional<InsertionPlan> plan_for(const VehicleSnapshot& v, const Request& r, const SchedulerContext& sc);

/// Vehicles, in id order, whose planning origin lies within the great-circle
/// radius d_w + speed * t_wait (+1 m) of the request origin.
std::vector<std::size_t> prune_vehicles(std::span<const Vehicle> fleet, const Request& r, const SchedulerContext& sc);

/// Lowest-cost plan over the candidate vehicles; equal costs keep the lower
/// vehicle id. Pass prune = false to evaluate the whole fleet.
std::optional<InsertionPlan> serve_request_greedy(std::span<const Vehicle> fleet, const Request& r,
                                                  const SchedulerContext& sc, bool prune = true);

enum class BatchMode { Unweighted, Weighted };

struct BatchResult {
  std::vector<std::pair<RequestId, InsertionPlan>> assigned;  // ascending request id
  std::vector<RequestId> unmatched;
  std::size_t cost_evaluations = 0;
};

/// One-to-one assignment of a window of requests to vehicles.
BatchResult batch_assign(std::span<const RequestId> window, std::span<const Vehicle> fleet, BatchMode mode,
                         const SchedulerContext& sc, bool prune = true);

/// Origins of recently unserved requests.
class RebalanceSet {
 public:
  struct Entry {
    NodeId node;
    TimeMs inserted;
  };
  void add(NodeId node, TimeMs at) { entries_.push_back({node, at}); }
  /// Drops entries inserted before now - window.
  void evict(TimeMs now, TimeMs window);
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::deque<Entry>& entries() const { return entries_; }
  void erase(std::size_t i) { entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(i)); }

 private:
  std::deque<Entry> entries_;
};

struct RebalanceMove {
  std::size_t vehicle;  // fleet index
  NodeId target;
};

/// Idle vehicles in id order each claim the nearest remaining entry of P by
/// road distance (earliest entry on ties). Claimed entries leave the set.
std::vector<RebalanceMove> rebalance_stars(std::span<const Vehicle> fleet, RebalanceSet& p,
                                           const spcache::DistanceOracle& oracle, TimeMs clock);

/// Running T_i over the request stream.
class AccumulatedCost {
 public:
  void served(double cost_s);
  void unserved() { ++unserved_; }
  double total() const { return total_; }
  std::uint64_t served_count() const { return served_; }
  std::uint64_t unserved_count() const { return unserved_; }

 private:
  double total_ = 0.0;
  std::uint64_t served_ = 0;
  std::uint64_t unserved_ = 0;
};

}  // namespace poolsim::stars
