#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "poolsim/ilp/route_dag.hpp"
#include "poolsim/stars/stars.hpp"

namespace poolsim::ilp {

using domain::Request;
using domain::RouteStop;
using domain::Vehicle;
using stars::SchedulerContext;
using stars::VehicleSnapshot;

enum class TravelMode { Exhaustive, Insertion };

struct TravelOptions {
  TravelMode mode = TravelMode::Exhaustive;
  // Above this many requests (on board + assigned + new) exhaustive mode
  // falls back to insertion.
  std::size_t exhaustive_cap = 4;
  // Cost new requests over their meeting-point sets through the route DAG.
  bool meeting_points = false;
};

struct TravelResult {
  bool valid = false;
  TimeMs cost = 0;  // completion minus plan start: driving plus holds
  std::vector<RouteStop> route;
  std::vector<domain::StopTiming> timing;
};

/// Minimum-completion route serving the vehicle's committed stops plus
/// `extra` (pickup and dropoff of each). Committed stops keep their chosen
/// intersections; the first `v.locked` stay in front.
TravelResult travel(const VehicleSnapshot& v, std::span<const RequestId> extra, const SchedulerContext& sc,
                    const TravelOptions& opts = {});

struct IlpOptions {
  std::size_t rv_cap = 30;
  double phi = 0.15;
  std::size_t exhaustive_cap = 4;
  std::size_t max_trip_size = 4;  // further capped by vehicle capacity
  bool meeting_points = false;
  double c_ko_s = -1.0;           // < 0 means 10 x T_total in seconds
  std::uint64_t node_budget = 2'000'000;  // branch-and-bound nodes per solve
  double timeout_s = 0.0;                 // 0 disables the wall-clock limit

  double c_ko(const domain::ConstraintSet& z) const { return c_ko_s >= 0 ? c_ko_s : 10.0 * ms_to_seconds(z.t_total); }
};

struct RvEdge {
  RequestId request;
  std::size_t vehicle;  // fleet index
  TimeMs cost;          // added route time
};

struct RvGraph {
  std::vector<RequestId> requests;  // ascending
  std::vector<std::pair<RequestId, RequestId>> rr;  // first < second, ascending
  std::vector<RvEdge> rv;  // grouped by request, cheapest first within a request

  bool shareable(RequestId a, RequestId b) const;
  std::vector<std::size_t> vehicles_of(RequestId r) const;
};

/// Request-request edges test an empty virtual vehicle at either origin;
/// request-vehicle edges test the vehicle's committed plan plus the request.
/// Each request keeps its `rv_cap` cheapest vehicles.
RvGraph build_rv_graph(std::span<const RequestId> window, std::span<const Vehicle> fleet, const SchedulerContext& sc,
                       const IlpOptions& opts = {});

struct Trip {
  std::vector<RequestId> members;  // ascending
};

struct TripEdge {
  std::size_t trip;
  std::size_t vehicle;  // fleet index
  TimeMs cost;          // route time added to the vehicle's committed plan
  std::vector<RouteStop> route;
  std::vector<domain::StopTiming> timing;
};

struct RtvGraph {
  std::vector<RequestId> requests;
  std::vector<Trip> trips;
  std::vector<TripEdge> edges;  // sorted by (vehicle, trip)

  std::vector<std::size_t> edges_of_vehicle(std::size_t v) const;  // Gamma_j^V
  std::vector<std::size_t> edges_of_request(RequestId r) const;    // trips holding r, as edges
};

/// Trips grow one request at a time; a trip of size k is only tried on a
/// vehicle when all of its size k-1 sub-trips are feasible on it and all of
/// its pairs are request-request edges.
RtvGraph build_rtv_graph(const RvGraph& rv, std::span<const Vehicle> fleet, const SchedulerContext& sc,
                         const IlpOptions& opts = {});

struct AssignmentSolution {
  std::vector<std::size_t> chosen_edges;  // indices into RtvGraph::edges
  std::vector<RequestId> unserved;        // x_k = 1
  double objective = 0.0;                 // seconds of cost plus c_ko per ignored request
  bool optimal = false;
  std::uint64_t nodes = 0;
};

class AssignmentError : public std::runtime_error {
 public:
  AssignmentError(const std::string& what, AssignmentSolution partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const AssignmentSolution& partial() const { return partial_; }

 private:
  AssignmentSolution partial_;
};

/// Exact branch-and-bound over trip-vehicle edges: each vehicle takes at most
/// one trip and every request is either in exactly one chosen trip or
/// ignored at cost c_ko. Stops at the node budget or timeout with the best
/// incumbent and optimal = false.
AssignmentSolution solve_assignment(const RtvGraph& rtv, double c_ko_s, const IlpOptions& opts = {});

/// Minimum total travel time pairing of idle vehicles with unserved request
/// origins.
std::vector<stars::RebalanceMove> rebalance_ilp(std::span<const Vehicle> fleet, std::span<const RequestId> unserved,
                                                const SchedulerContext& sc);

}  // namespace poolsim::ilp
