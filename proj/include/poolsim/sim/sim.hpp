#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "poolsim/domain/metrics.hpp"
#include "poolsim/ilp/ilp.hpp"
#include "poolsim/stars/stars.hpp"

namespace poolsim::sim {

using domain::Request;
using domain::Vehicle;

enum class SchedulerMode { Greedy, BatchUnweighted, BatchWeighted, Ilp };
const char* to_string(SchedulerMode m);
/// Accepts greedy, batch-u, batch-unweighted, batch-w, batch-weighted, ilp.
std::optional<SchedulerMode> parse_mode(const std::string& s);

struct FleetSpec {
  std::size_t size = 10;
  int capacity = 4;
  MmPerSecond speed = mps_to_mmps(8.0);
  std::uint64_t seed = 1;
  std::vector<NodeId> initial;  // overrides seeded placement when non-empty
};

struct Scenario {
  const geo::RoadNetwork* network = nullptr;
  const spcache::DistanceOracle* oracle = nullptr;
  const geo::WalkingNetwork* walking = nullptr;  // needed when z.d_w > 0
  FleetSpec fleet;
  domain::ConstraintSet z;
  SchedulerMode mode = SchedulerMode::Greedy;
  bool rebalance = true;
  stars::CostWeights weights;
  ilp::IlpOptions ilp;
  std::vector<Request> demand;
  TimeMs horizon = seconds_to_ms(3600);
  std::vector<std::uint32_t> region_map;  // optional per-node region for metric splits
  bool include_timing = false;
  int threads = 1;

  /// Throws std::invalid_argument on an unusable scenario.
  void validate() const;
};

/// Uniform seeded draws over intersections, duplicates allowed.
std::vector<NodeId> place_fleet(const geo::RoadNetwork& network, std::size_t size, std::uint64_t seed);

/// Constraint breaches observed while executing the plans.
struct Audit {
  std::uint64_t wait = 0;        // pickup - request time > T_wait
  std::uint64_t total = 0;       // dropoff - request time - direct > T_total
  std::uint64_t extra = 0;       // T_extra, when enabled
  std::uint64_t capacity = 0;
  std::uint64_t precedence = 0;  // dropoff without matching pickup, or pickup twice
  std::uint64_t walk = 0;        // either walk above D_w
  std::uint64_t teleport = 0;    // consecutive path nodes not joined by an edge
  std::uint64_t odometer = 0;    // odometer differs from the traversed edge lengths

  std::uint64_t violations() const { return wait + total + extra + capacity + precedence + walk + teleport + odometer; }
};

struct RunResult {
  domain::MetricsReport report;
  std::vector<Request> requests;  // final records, id = position
  std::vector<Vehicle> fleet;
  Audit audit;
  std::uint64_t served = 0, unserved = 0;
};

/// Mutable simulation state with a step interface for inspection.
class Simulation {
 public:
  explicit Simulation(const Scenario& s);

  TimeMs clock() const { return clock_; }
  const std::vector<Vehicle>& fleet() const { return fleet_; }
  const std::vector<Request>& requests() const { return requests_; }
  const std::vector<RequestId>& pending() const { return pending_; }
  const stars::RebalanceSet& rebalance_set() const { return rebalance_; }
  std::uint64_t served() const { return served_; }
  std::uint64_t unserved() const { return unserved_; }
  std::uint64_t released() const { return next_request_; }
  const Audit& audit() const { return audit_; }
  bool done() const;

  /// Moves every vehicle forward to `to` (>= clock), popping visited stops.
  void update_vehicle_positions(TimeMs to);
  /// Processes the next event (request arrival or batch tick). Returns false
  /// once all requests are resolved and the fleet is drained.
  bool step();

  RunResult finish();

 private:
  void advance_vehicle(Vehicle& v, TimeMs to);
  void extend_path(Vehicle& v, NodeId target);
  void depart(Vehicle& v, TimeMs at);
  void set_occupancy(Vehicle& v, int occ, TimeMs at);
  void assign_route(Vehicle& v, const std::vector<domain::RouteStop>& route,
                    const std::vector<domain::StopTiming>& timing);
  void send_roaming(Vehicle& v, NodeId target);
  stars::SchedulerContext context() const;
  void handle_arrival(RequestId id);
  void tick();
  bool try_greedy(RequestId id);
  std::uint32_t region_of(const Request& r) const;
  void run_batch();
  void run_ilp();
  void mark_unserved(RequestId id);
  void note_failure(RequestId id);
  void expire_pending();

  const Scenario& sc_;
  std::optional<geo::MeetingPointIndex> mp_;
  std::vector<Request> requests_;
  std::vector<Vehicle> fleet_;
  std::vector<RequestId> pending_;
  std::vector<char> failed_once_;
  stars::RebalanceSet rebalance_;
  std::vector<RequestId> batch_unserved_;
  domain::MetricsAccumulator metrics_;
  stars::AccumulatedCost cost_;
  Audit audit_;
  std::vector<Millimeters> traversed_;
  std::vector<std::uint64_t> boardings_;
  TimeMs clock_ = 0;
  TimeMs next_tick_ = 0;
  std::size_t next_request_ = 0;
  std::uint64_t served_ = 0, unserved_ = 0;
  double sched_ms_ = 0;
  std::uint64_t sched_calls_ = 0;
};

RunResult run(const Scenario& s);

}  // namespace poolsim::sim
