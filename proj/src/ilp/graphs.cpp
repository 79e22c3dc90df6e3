#include <algorithm>
#include <map>
#include <set>

#include "poolsim/geo/geodesy.hpp"
#include "poolsim/ilp/ilp.hpp"

namespace poolsim::ilp {

using domain::ConstraintSet;

namespace {

ConstraintSet relaxed(const ConstraintSet& z, double phi) {
  ConstraintSet r = z;
  auto widen = [phi](TimeMs t) { return t == kNoLimit ? t : static_cast<TimeMs>(static_cast<double>(t) * (1.0 + phi)); };
  r.t_wait = widen(z.t_wait);
  r.t_total = widen(z.t_total);
  return r;
}

// Exact test without meeting points, or the relaxed door-to-door screen
// followed by the meeting-point insertion check.
TravelResult evaluate(const VehicleSnapshot& v, std::span<const RequestId> members, const SchedulerContext& sc,
                      const IlpOptions& opts) {
  TravelOptions exact{TravelMode::Exhaustive, opts.exhaustive_cap, false};
  if (!opts.meeting_points || sc.z.d_w == 0) return travel(v, members, sc, exact);
  SchedulerContext loose = sc;
  loose.z = relaxed(sc.z, opts.phi);
  if (!travel(v, members, loose, exact).valid) return {};
  return travel(v, members, sc, TravelOptions{TravelMode::Insertion, opts.exhaustive_cap, true});
}

TimeMs baseline_cost(const VehicleSnapshot& v, const SchedulerContext& sc, const IlpOptions& opts) {
  const TravelResult t = travel(v, {}, sc, TravelOptions{TravelMode::Exhaustive, opts.exhaustive_cap, false});
  if (t.valid) return t.cost;
  // The current plan was accepted earlier; fall back to its own timing.
  const domain::ScheduleCheck c =
      domain::check_schedule(v.ctx, v.base, domain::RequestView(*sc.requests), sc.z, *sc.oracle);
  return c.completion - v.ctx.origin.base;
}

VehicleSnapshot virtual_vehicle(NodeId at, TimeMs clock, MmPerSecond speed, int capacity) {
  VehicleSnapshot s;
  s.ctx = domain::VehicleContext{domain::PlanOrigin{at, clock, 0}, speed, capacity, 0};
  return s;
}

}  // namespace

bool RvGraph::shareable(RequestId a, RequestId b) const {
  if (a > b) std::swap(a, b);
  return std::binary_search(rr.begin(), rr.end(), std::make_pair(a, b));
}

std::vector<std::size_t> RvGraph::vehicles_of(RequestId r) const {
  std::vector<std::size_t> out;
  for (const RvEdge& e : rv)
    if (e.request == r) out.push_back(e.vehicle);
  return out;
}

RvGraph build_rv_graph(std::span<const RequestId> window, std::span<const Vehicle> fleet, const SchedulerContext& sc,
                       const IlpOptions& opts) {
  RvGraph g;
  g.requests.assign(window.begin(), window.end());
  std::sort(g.requests.begin(), g.requests.end());
  const auto& reqs = *sc.requests;
  const ConstraintSet screen = opts.meeting_points ? relaxed(sc.z, opts.phi) : sc.z;

  if (!fleet.empty()) {
    const MmPerSecond speed = fleet.front().speed;
    const int capacity = std::min(sc.z.capacity, fleet.front().capacity);
    const double reach = speed / 1000.0 * ms_to_seconds(screen.t_wait) + 2.0 * mm_to_meters(sc.z.d_w) + 1.0;
    for (std::size_t a = 0; a < g.requests.size(); ++a)
      for (std::size_t b = a + 1; b < g.requests.size(); ++b) {
        const Request& ra = reqs[g.requests[a]];
        const Request& rb = reqs[g.requests[b]];
        if (geo::haversine(sc.network->coord(ra.origin), sc.network->coord(rb.origin)) > reach) continue;
        const RequestId pair[2] = {ra.id, rb.id};
        bool ok = false;
        for (NodeId start : {ra.origin, rb.origin}) {
          if (evaluate(virtual_vehicle(start, sc.clock, speed, capacity), pair, sc, opts).valid) {
            ok = true;
            break;
          }
        }
        if (ok) g.rr.emplace_back(ra.id, rb.id);
      }
  }

  std::map<std::size_t, TimeMs> baseline;
  SchedulerContext pre = sc;
  pre.z = screen;
  for (RequestId id : g.requests) {
    const Request& r = reqs[id];
    std::vector<RvEdge> edges;
    for (std::size_t vi : stars::prune_vehicles(fleet, r, pre)) {
      const VehicleSnapshot s = stars::snapshot(fleet[vi], sc);
      const RequestId one[1] = {id};
      const TravelResult t = opts.meeting_points && sc.z.d_w > 0
                                 ? travel(s, one, pre, TravelOptions{TravelMode::Exhaustive, opts.exhaustive_cap, false})
                                 : travel(s, one, sc, TravelOptions{TravelMode::Exhaustive, opts.exhaustive_cap, false});
      if (!t.valid) continue;
      auto [it, fresh] = baseline.try_emplace(vi, 0);
      if (fresh) it->second = baseline_cost(s, sc, opts);
      edges.push_back({id, vi, std::max<TimeMs>(0, t.cost - it->second)});
    }
    std::stable_sort(edges.begin(), edges.end(), [](const RvEdge& x, const RvEdge& y) { return x.cost < y.cost; });
    if (edges.size() > opts.rv_cap) edges.resize(opts.rv_cap);
    if (opts.meeting_points && sc.z.d_w > 0) {
      std::vector<RvEdge> kept;
      for (const RvEdge& e : edges) {
        const VehicleSnapshot s = stars::snapshot(fleet[e.vehicle], sc);
        const RequestId one[1] = {id};
        const TravelResult t = travel(s, one, sc, TravelOptions{TravelMode::Insertion, opts.exhaustive_cap, true});
        if (t.valid) kept.push_back({id, e.vehicle, std::max<TimeMs>(0, t.cost - baseline[e.vehicle])});
      }
      std::stable_sort(kept.begin(), kept.end(), [](const RvEdge& x, const RvEdge& y) { return x.cost < y.cost; });
      edges = std::move(kept);
    }
    g.rv.insert(g.rv.end(), edges.begin(), edges.end());
  }
  return g;
}

std::vector<std::size_t> RtvGraph::edges_of_vehicle(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (edges[e].vehicle == v) out.push_back(e);
  return out;
}

std::vector<std::size_t> RtvGraph::edges_of_request(RequestId r) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& m = trips[edges[e].trip].members;
    if (std::binary_search(m.begin(), m.end(), r)) out.push_back(e);
  }
  return out;
}

RtvGraph build_rtv_graph(const RvGraph& rv, std::span<const Vehicle> fleet, const SchedulerContext& sc,
                         const IlpOptions& opts) {
  RtvGraph g;
  g.requests = rv.requests;
  std::map<std::vector<RequestId>, std::size_t> trip_index;
  auto trip_id = [&](const std::vector<RequestId>& m) {
    auto [it, fresh] = trip_index.try_emplace(m, g.trips.size());
    if (fresh) g.trips.push_back(Trip{m});
    return it->second;
  };

  std::map<std::size_t, std::vector<RequestId>> by_vehicle;
  for (const RvEdge& e : rv.rv) by_vehicle[e.vehicle].push_back(e.request);

  for (auto& [vi, cand] : by_vehicle) {
    std::sort(cand.begin(), cand.end());
    const VehicleSnapshot s = stars::snapshot(fleet[vi], sc);
    const TimeMs base = baseline_cost(s, sc, opts);
    const std::size_t max_size =
        std::min<std::size_t>(opts.max_trip_size, static_cast<std::size_t>(std::min(fleet[vi].capacity, sc.z.capacity)));
    std::vector<std::vector<RequestId>> level;
    std::set<std::vector<RequestId>> feasible;
    auto record = [&](const std::vector<RequestId>& members, TravelResult t) {
      g.edges.push_back(TripEdge{trip_id(members), vi, std::max<TimeMs>(0, t.cost - base), std::move(t.route),
                                 std::move(t.timing)});
      feasible.insert(members);
      level.push_back(members);
    };
    for (RequestId r : cand) {
      const RequestId one[1] = {r};
      TravelResult t = evaluate(s, one, sc, opts);
      if (t.valid) record({r}, std::move(t));
    }
    for (std::size_t k = 2; k <= max_size && !level.empty(); ++k) {
      std::vector<std::vector<RequestId>> prev = std::move(level);
      level.clear();
      for (const auto& trip : prev) {
        for (RequestId r : cand) {
          if (r <= trip.back()) continue;
          bool ok = true;
          for (RequestId t : trip)
            if (!rv.shareable(t, r)) ok = false;
          std::vector<RequestId> next = trip;
          next.push_back(r);
          for (std::size_t drop = 0; ok && drop + 1 < next.size(); ++drop) {
            std::vector<RequestId> sub = next;
            sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
            if (!feasible.count(sub)) ok = false;
          }
          if (!ok) continue;
          TravelResult t = evaluate(s, next, sc, opts);
          if (t.valid) record(next, std::move(t));
        }
      }
    }
  }
  std::stable_sort(g.edges.begin(), g.edges.end(), [](const TripEdge& a, const TripEdge& b) {
    return a.vehicle != b.vehicle ? a.vehicle < b.vehicle : a.trip < b.trip;
  });
  return g;
}

}  // namespace poolsim::ilp
