#include "poolsim/sim/sim.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace poolsim::sim {

using domain::Stop;
using domain::StopKind;
using domain::VehicleState;

const char* to_string(SchedulerMode m) {
  switch (m) {
    case SchedulerMode::Greedy: return "greedy";
    case SchedulerMode::BatchUnweighted: return "batch-u";
    case SchedulerMode::BatchWeighted: return "batch-w";
    case SchedulerMode::Ilp: return "ilp";
  }
  return "?";
}

std::optional<SchedulerMode> parse_mode(const std::string& s) {
  if (s == "greedy") return SchedulerMode::Greedy;
  if (s == "batch-u" || s == "batch-unweighted") return SchedulerMode::BatchUnweighted;
  if (s == "batch-w" || s == "batch-weighted") return SchedulerMode::BatchWeighted;
  if (s == "ilp") return SchedulerMode::Ilp;
  return std::nullopt;
}

void Scenario::validate() const {
  if (network == nullptr || oracle == nullptr) throw std::invalid_argument("scenario needs a network and a distance oracle");
  if (oracle->node_count() != network->node_count())
    throw std::invalid_argument("distance oracle does not match the network");
  if (fleet.size < 1) throw std::invalid_argument("fleet size must be at least 1");
  if (fleet.capacity < 1) throw std::invalid_argument("vehicle capacity must be at least 1");
  if (fleet.speed == 0) throw std::invalid_argument("vehicle speed must be positive");
  if (!fleet.initial.empty() && fleet.initial.size() != fleet.size)
    throw std::invalid_argument("initial fleet placement does not match the fleet size");
  for (NodeId v : fleet.initial)
    if (!network->contains(v)) throw std::invalid_argument("initial vehicle position outside the network");
  if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
  z.validate();
  if (z.d_w > 0 && walking == nullptr) throw std::invalid_argument("meeting points need a walking network");
  if (!region_map.empty() && region_map.size() != network->node_count())
    throw std::invalid_argument("region map does not cover the network");
  for (const Request& r : demand)
    if (!network->contains(r.origin) || !network->contains(r.destination))
      throw std::invalid_argument("request " + std::to_string(r.id) + " refers to an unknown node");
}

std::vector<NodeId> place_fleet(const geo::RoadNetwork& network, std::size_t size, std::uint64_t seed) {
  if (network.node_count() == 0) throw std::invalid_argument("cannot place a fleet on an empty network");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(network.node_count() - 1));
  std::vector<NodeId> out(size);
  for (NodeId& v : out) v = pick(rng);
  return out;
}

Simulation::Simulation(const Scenario& s) : sc_(s), metrics_(s.z.c_run) {
  s.validate();
  if (s.z.d_w > 0) mp_.emplace(*s.walking);
  for (const Request& r : s.demand)
    if (r.request_time >= 0 && r.request_time < s.horizon) requests_.push_back(r);
  std::stable_sort(requests_.begin(), requests_.end(),
                   [](const Request& a, const Request& b) { return a.request_time < b.request_time; });
  for (std::size_t i = 0; i < requests_.size(); ++i) {
    Request& r = requests_[i];
    r = domain::make_request(static_cast<RequestId>(i), r.origin, r.destination, r.request_time, r.group);
    r.direct_ms = travel_ms(s.oracle->dist(r.origin, r.destination), s.fleet.speed);
  }
  failed_once_.assign(requests_.size(), 0);
  const std::vector<NodeId> at =
      s.fleet.initial.empty() ? place_fleet(*s.network, s.fleet.size, s.fleet.seed) : s.fleet.initial;
  for (std::size_t i = 0; i < at.size(); ++i)
    fleet_.push_back(domain::make_vehicle(static_cast<VehicleId>(i), at[i], s.fleet.capacity, s.fleet.speed, 0));
  traversed_.assign(fleet_.size(), 0);
  boardings_.assign(fleet_.size(), 0);
  next_tick_ = s.z.delta;
}

bool Simulation::done() const {
  if (next_request_ < requests_.size() || !pending_.empty()) return false;
  return std::all_of(fleet_.begin(), fleet_.end(), [](const Vehicle& v) { return v.stops.empty(); });
}

stars::SchedulerContext Simulation::context() const {
  stars::SchedulerContext c;
  c.network = sc_.network;
  c.oracle = sc_.oracle;
  c.meeting_points = mp_ ? &*mp_ : nullptr;
  c.z = sc_.z;
  c.weights = sc_.weights;
  c.requests = &requests_;
  c.clock = clock_;
  c.threads = sc_.threads;
  return c;
}

void Simulation::set_occupancy(Vehicle& v, int occ, TimeMs at) {
  const TimeMs span = at - v.last_occupancy_change;
  v.occupancy_area += static_cast<TimeMs>(v.occupancy) * span;
  if (v.occupancy > 0) v.occupied_ms += span;
  v.last_occupancy_change = at;
  v.occupancy = occ;
}

void Simulation::extend_path(Vehicle& v, NodeId target) {
  const NodeId from = v.path.back();
  if (from == target) return;
  const geo::Digraph& g = sc_.network->graph();
  const std::vector<NodeId> nodes = spcache::shortest_path(*sc_.oracle, g, from, target);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const Millimeters len = g.arc_length(nodes[k - 1], nodes[k]);
    if (len == kUnreachable) {
      ++audit_.teleport;
      continue;
    }
    v.path.push_back(nodes[k]);
    v.path_mm.push_back(v.path_mm.back() + len);
  }
}

void Simulation::depart(Vehicle& v, TimeMs at) {
  const NodeId here = v.node();
  v.path = {here};
  v.path_mm = {0};
  v.path_pos = 0;
  v.anchor_time = at;
  if (!v.stops.empty()) extend_path(v, v.stops.front().node);
}

void Simulation::advance_vehicle(Vehicle& v, TimeMs to) {
  const geo::Digraph& g = sc_.network->graph();
  const domain::ConstraintSet& z = sc_.z;
  while (!v.stops.empty()) {
    if (v.at_front) {
      const Stop front = v.stops.front();
      Request& r = requests_[front.request];
      const TimeMs board = std::max(v.anchor_time, r.request_time + z.walk_ms(r.walk_pickup_mm));
      if (board > to) return;
      v.hold_ms += board - v.anchor_time;
      v.stops.erase(v.stops.begin());
      if (v.stops.empty() || v.stops.front().kind != StopKind::PickUp || v.stops.front().request != front.request)
        throw std::logic_error("wait stop without its pickup");
      v.state = domain::transition(v.state, StopKind::PickUp);
      v.stops.erase(v.stops.begin());
      if (r.pickup_time || r.vehicle != v.id) ++audit_.precedence;
      r.pickup_time = board;
      ++boardings_[v.id];
      set_occupancy(v, v.occupancy + r.group, board);
      if (v.occupancy > v.capacity) ++audit_.capacity;
      if (board - r.request_time > z.t_wait) ++audit_.wait;
      if (r.walk_pickup_mm > z.d_w) ++audit_.walk;
      metrics_.accumulate({domain::MetricsEvent::Kind::PickedUp, r.id, board, r.request_time, r.direct_ms,
                           r.walk_pickup_mm, region_of(r)});
      v.at_front = false;
      depart(v, board);
      continue;
    }
    while (v.path_pos + 1 < v.path.size() && v.time_at(v.path_pos + 1) <= to) {
      v.odometer += v.path_mm[v.path_pos + 1] - v.path_mm[v.path_pos];
      traversed_[v.id] += g.arc_length(v.path[v.path_pos], v.path[v.path_pos + 1]);
      ++v.path_pos;
    }
    if (v.path_pos + 1 < v.path.size()) return;
    const TimeMs arrival = v.time_at(v.path_pos);
    if (arrival > to) return;
    const Stop s = v.stops.front();
    if (v.node() != s.node) throw std::logic_error("vehicle " + std::to_string(v.id) + " reached the wrong node");
    switch (s.kind) {
      case StopKind::Roam:
        v.state = domain::transition(v.state, StopKind::Roam);
        v.stops.erase(v.stops.begin());
        v.state = domain::transition(v.state, StopKind::Idle);
        depart(v, arrival);
        break;
      case StopKind::WaitStop:
        v.state = domain::transition(v.state, StopKind::WaitStop);
        v.at_front = true;
        v.path = {v.node()};
        v.path_mm = {0};
        v.path_pos = 0;
        v.anchor_time = arrival;
        break;
      case StopKind::DropOff: {
        v.state = domain::transition(v.state, StopKind::DropOff);
        v.stops.erase(v.stops.begin());
        Request& r = requests_[s.request];
        if (!r.pickup_time || r.dropoff_time || r.vehicle != v.id) {
          ++audit_.precedence;
        } else {
          r.dropoff_time = arrival;
          ++served_;
          if (arrival - r.request_time - r.direct_ms > z.t_total) ++audit_.total;
          if (z.t_extra != kNoLimit && arrival - *r.pickup_time - r.direct_ms > z.t_extra) ++audit_.extra;
          if (r.walk_dropoff_mm > z.d_w) ++audit_.walk;
          metrics_.accumulate({domain::MetricsEvent::Kind::DroppedOff, r.id, arrival, r.request_time, r.direct_ms,
                               r.walk_dropoff_mm, region_of(r)});
        }
        set_occupancy(v, v.occupancy - r.group, arrival);
        if (v.occupancy < 0) ++audit_.capacity;
        if (v.occupancy == 0) {
          v.state = domain::transition(v.state, StopKind::WaitStop);
          v.state = domain::transition(v.state, StopKind::Idle);
        }
        depart(v, arrival);
        break;
      }
      default:
        throw std::logic_error(std::string("unexpected stop kind in plan: ") + domain::to_string(s.kind));
    }
  }
}

void Simulation::update_vehicle_positions(TimeMs to) {
  if (to < clock_) throw std::invalid_argument("simulation clock cannot move backwards");
  for (Vehicle& v : fleet_) advance_vehicle(v, to);
  clock_ = to;
}

void Simulation::assign_route(Vehicle& v, const std::vector<domain::RouteStop>& route,
                              const std::vector<domain::StopTiming>& timing) {
  if (route.empty()) throw std::logic_error("empty plan assigned");
  const domain::PlanOrigin planned = v.planning_origin(clock_);
  if (!v.at_front) {
    if (!v.stops.empty()) {
      std::size_t k = v.path_pos;
      while (k + 1 < v.path.size() && v.time_at(k) < clock_) ++k;
      v.path.resize(k + 1);
      v.path_mm.resize(k + 1);
    } else {
      v.path = {v.node()};
      v.path_mm = {0};
      v.path_pos = 0;
      v.anchor_time = std::max(clock_, v.anchor_time);
    }
  }
  v.stops = domain::stops_from_route(route, timing, domain::RequestView(requests_));
  for (const domain::RouteStop& s : route) {
    Request& r = requests_[s.request];
    r.vehicle = v.id;
    if (s.pickup) {
      r.pickup_node = s.node;
      r.walk_pickup_mm = s.walk;
    } else {
      r.dropoff_node = s.node;
      r.walk_dropoff_mm = s.walk;
    }
  }
  if (!v.at_front) extend_path(v, v.stops.front().node);
  const domain::PlanOrigin now = v.planning_origin(clock_);
  if (now.node != planned.node || now.base != planned.base || now.offset != planned.offset)
    throw std::logic_error("route assignment moved the planning origin of vehicle " + std::to_string(v.id));
}

void Simulation::send_roaming(Vehicle& v, NodeId target) {
  v.stops = {Stop::roam(target, sc_.oracle->dist(v.node(), target))};
  depart(v, std::max(clock_, v.anchor_time));
}

std::uint32_t Simulation::region_of(const Request& r) const {
  return sc_.region_map.empty() ? 0 : sc_.region_map[r.origin];
}

void Simulation::mark_unserved(RequestId id) {
  ++unserved_;
  metrics_.accumulate({domain::MetricsEvent::Kind::Unserved, id, clock_, 0, 0, 0, 0});
  cost_.unserved();
}

void Simulation::note_failure(RequestId id) {
  if (failed_once_[id]) return;
  failed_once_[id] = 1;
  rebalance_.add(requests_[id].origin, clock_);
}

void Simulation::expire_pending() {
  std::vector<RequestId> keep;
  for (RequestId id : pending_) {
    if (clock_ - requests_[id].request_time > sc_.z.t_wait)
      mark_unserved(id);
    else
      keep.push_back(id);
  }
  pending_ = std::move(keep);
}

bool Simulation::try_greedy(RequestId id) {
  const auto t0 = std::chrono::steady_clock::now();
  const stars::SchedulerContext c = context();
  std::optional<stars::InsertionPlan> plan = stars::serve_request_greedy(fleet_, requests_[id], c);
  sched_ms_ += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  ++sched_calls_;
  if (!plan) {
    note_failure(id);
    return false;
  }
  assign_route(fleet_[plan->vehicle], plan->route, plan->timing);
  cost_.served(plan->cost);
  metrics_.add_cost(plan->cost);
  return true;
}

void Simulation::handle_arrival(RequestId id) {
  const Request& r = requests_[id];
  ++next_request_;
  metrics_.accumulate({domain::MetricsEvent::Kind::Requested, id, r.request_time, r.request_time, r.direct_ms, 0,
                       region_of(r)});
  if (sc_.mode == SchedulerMode::Greedy) update_vehicle_positions(r.request_time);
  if (r.direct_ms == kNoLimit) {
    mark_unserved(id);
    return;
  }
  if (sc_.mode == SchedulerMode::Greedy && try_greedy(id)) return;
  pending_.push_back(id);
}

void Simulation::run_batch() {
  if (pending_.empty()) return;
  const auto t0 = std::chrono::steady_clock::now();
  const stars::BatchMode mode =
      sc_.mode == SchedulerMode::BatchWeighted ? stars::BatchMode::Weighted : stars::BatchMode::Unweighted;
  stars::BatchResult res = stars::batch_assign(pending_, fleet_, mode, context());
  sched_ms_ += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  ++sched_calls_;
  for (auto& [id, plan] : res.assigned) {
    assign_route(fleet_[plan.vehicle], plan.route, plan.timing);
    cost_.served(plan.cost);
    metrics_.add_cost(plan.cost);
  }
  for (RequestId id : res.unmatched) note_failure(id);
  pending_ = std::move(res.unmatched);
}

void Simulation::run_ilp() {
  batch_unserved_.clear();
  if (pending_.empty()) return;
  const auto t0 = std::chrono::steady_clock::now();
  const stars::SchedulerContext c = context();
  ilp::IlpOptions opts = sc_.ilp;
  opts.meeting_points = sc_.z.d_w > 0;
  const ilp::RvGraph rv = ilp::build_rv_graph(pending_, fleet_, c, opts);
  const ilp::RtvGraph rtv = ilp::build_rtv_graph(rv, fleet_, c, opts);
  const ilp::AssignmentSolution sol = ilp::solve_assignment(rtv, opts.c_ko(sc_.z), opts);
  sched_ms_ += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  ++sched_calls_;
  for (std::size_t e : sol.chosen_edges) {
    const ilp::TripEdge& edge = rtv.edges[e];
    assign_route(fleet_[edge.vehicle], edge.route, edge.timing);
    cost_.served(ms_to_seconds(edge.cost));
    metrics_.add_cost(ms_to_seconds(edge.cost));
  }
  for (RequestId id : sol.unserved) note_failure(id);
  pending_ = sol.unserved;
  batch_unserved_ = sol.unserved;
}

void Simulation::tick() {
  update_vehicle_positions(next_tick_);
  expire_pending();
  switch (sc_.mode) {
    case SchedulerMode::Greedy: {
      std::vector<RequestId> retry = std::move(pending_);
      pending_.clear();
      for (RequestId id : retry)
        if (!try_greedy(id)) pending_.push_back(id);
      break;
    }
    case SchedulerMode::BatchUnweighted:
    case SchedulerMode::BatchWeighted: run_batch(); break;
    case SchedulerMode::Ilp: run_ilp(); break;
  }
  rebalance_.evict(clock_, sc_.z.delta);
  if (sc_.rebalance && clock_ < sc_.horizon) {
    std::vector<stars::RebalanceMove> moves;
    if (sc_.mode == SchedulerMode::Ilp)
      moves = ilp::rebalance_ilp(fleet_, batch_unserved_, context());
    else
      moves = stars::rebalance_stars(fleet_, rebalance_, *sc_.oracle, clock_);
    for (const stars::RebalanceMove& m : moves) send_roaming(fleet_[m.vehicle], m.target);
  }
  next_tick_ += sc_.z.delta;
}

bool Simulation::step() {
  if (done()) return false;
  if (next_request_ < requests_.size() && requests_[next_request_].request_time <= next_tick_)
    handle_arrival(static_cast<RequestId>(next_request_));
  else
    tick();
  return true;
}

RunResult Simulation::finish() {
  const auto t0 = std::chrono::steady_clock::now();
  while (step()) {
  }
  RunResult out;
  for (Vehicle& v : fleet_) {
    set_occupancy(v, v.occupancy, clock_);
    if (v.odometer != traversed_[v.id]) ++audit_.odometer;
    domain::VehicleTotals t{v.odometer, v.hold_ms, v.occupancy_area, v.occupied_ms, boardings_[v.id]};
    metrics_.add_vehicle(t, v.speed);
  }
  out.report = metrics_.finalize(fleet_.size(), sc_.horizon);
  if (sc_.include_timing) {
    out.report.mean_t_iteration_ms = sched_calls_ ? sched_ms_ / static_cast<double>(sched_calls_) : 0.0;
    out.report.t_exe_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  out.requests = requests_;
  out.fleet = fleet_;
  out.audit = audit_;
  out.served = served_;
  out.unserved = unserved_;
  return out;
}

RunResult run(const Scenario& s) {
  Simulation sim(s);
  return sim.finish();
}

}  // namespace poolsim::sim
