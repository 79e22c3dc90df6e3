#include "poolsim/stars/stars.hpp"

#include <algorithm>
#include <stdexcept>

#include "poolsim/geo/geodesy.hpp"

namespace poolsim::stars {

using domain::RequestView;
using domain::RouteStop;

VehicleSnapshot snapshot(const Vehicle& v, const SchedulerContext& sc) {
  VehicleSnapshot s;
  s.vehicle = &v;
  s.ctx = v.context(sc.clock);
  s.base = v.route(*sc.requests, sc.z);
  s.locked = v.locked_prefix();
  return s;
}

std::optional<InsertionPlan> sharing_cost(const VehicleSnapshot& v, const Request& r, NodeId m_p, Millimeters walk_p,
                                          NodeId m_d, Millimeters walk_d, const SchedulerContext& sc) {
  const RequestView reqs(*sc.requests, &r);
  const RouteStop pickup{m_p, r.id, true, r.request_time + sc.z.walk_ms(walk_p), walk_p};
  const RouteStop dropoff{m_d, r.id, false, 0, walk_d};
  const CostWeights w = sc.weights;
  const domain::InsertionCost cost = [w](const domain::ScheduleCheck&, TimeMs delta, TimeMs hold) {
    return w.c1 * ms_to_seconds(delta) + w.c2 * ms_to_seconds(hold);
  };
  const domain::Insertion ins =
      domain::best_insertion(v.ctx, v.base, v.locked, pickup, dropoff, reqs, sc.z, *sc.oracle, cost);
  if (!ins.feasible) return std::nullopt;
  InsertionPlan plan;
  plan.vehicle = v.vehicle->id;
  plan.pickup_index = ins.pickup_index;
  plan.dropoff_index = ins.dropoff_index;
  plan.m_p = m_p;
  plan.m_d = m_d;
  plan.walk_p = walk_p;
  plan.walk_d = walk_d;
  plan.cost = ins.cost;
  plan.hold = ins.hold;
  plan.drive_delta = ins.drive_delta;
  plan.route = domain::with_insertion(v.base, ins, pickup, dropoff);
  domain::check_schedule(v.ctx, plan.route, reqs, sc.z, *sc.oracle, &plan.timing);
  return plan;
}

std::optional<InsertionPlan> sharing_cost(const Vehicle& v, const Request& r, const SchedulerContext& sc) {
  return sharing_cost(snapshot(v, sc), r, r.origin, 0, r.destination, 0, sc);
}

namespace {

bool better(const InsertionPlan& a, Millimeters walk_a, const InsertionPlan& b, Millimeters walk_b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return walk_a < walk_b;
}

}  // namespace

MeetingSets meeting_sets(const Request& r, const SchedulerContext& sc) {
  MeetingSets out;
  if (sc.z.d_w == 0) {
    out.pickup = {{r.origin, 0}};
    out.dropoff = {{r.destination, 0}};
    return out;
  }
  if (sc.meeting_points == nullptr) throw std::invalid_argument("meeting points requested without an index");
  const geo::MeetingPointSet& mp = sc.meeting_points->get(r.origin, sc.z.d_w);
  const geo::MeetingPointSet& md = sc.meeting_points->get(r.destination, sc.z.d_w);
  for (const geo::MeetingPoint& m : mp.members)
    if (m.node != r.destination) out.pickup.push_back(m);
  for (const geo::MeetingPoint& m : md.members)
    if (m.node == r.destination || !mp.contains(m.node)) out.dropoff.push_back(m);
  return out;
}

std::optional<InsertionPlan> two_stage_meeting_points(const VehicleSnapshot& v, const Request& r,
                                                      const SchedulerContext& sc) {
  if (sc.z.d_w == 0) return sharing_cost(v, r, r.origin, 0, r.destination, 0, sc);
  const MeetingSets ms = meeting_sets(r, sc);

  std::optional<InsertionPlan> stage1;
  for (const geo::MeetingPoint& m : ms.pickup) {
    auto p = sharing_cost(v, r, m.node, m.walk, r.destination, 0, sc);
    if (p && (!stage1 || better(*p, m.walk, *stage1, stage1->walk_p))) stage1 = std::move(p);
  }
  if (!stage1) return std::nullopt;

  std::optional<InsertionPlan> stage2;
  for (const geo::MeetingPoint& m : ms.dropoff) {
    auto p = sharing_cost(v, r, stage1->m_p, stage1->walk_p, m.node, m.walk, sc);
    if (p && (!stage2 || better(*p, m.walk, *stage2, stage2->walk_d))) stage2 = std::move(p);
  }
  return stage2;
}

std::optional<InsertionPlan> plan_for(const VehicleSnapshot& v, const Request& r, const SchedulerContext& sc) {
  if (sc.z.d_w > 0) return two_stage_meeting_points(v, r, sc);
  return sharing_cost(v, r, r.origin, 0, r.destination, 0, sc);
}

std::vector<std::size_t> prune_vehicles(std::span<const Vehicle> fleet, const Request& r, const SchedulerContext& sc) {
  std::vector<std::size_t> out;
  const geo::LatLon& o = sc.network->coord(r.origin);
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    const Vehicle& v = fleet[i];
    const double bound = mm_to_meters(sc.z.d_w) + v.speed / 1000.0 * ms_to_seconds(sc.z.t_wait) + 1.0;
    const NodeId at = v.planning_origin(sc.clock).node;
    if (geo::haversine(sc.network->coord(at), o) <= bound) out.push_back(i);
  }
  return out;
}

namespace {

std::vector<std::optional<InsertionPlan>> evaluate(std::span<const Vehicle> fleet, std::span<const std::size_t> cand,
                                                   const Request& r, const SchedulerContext& sc) {
  std::vector<std::optional<InsertionPlan>> out(cand.size());
  const auto n = static_cast<std::ptrdiff_t>(cand.size());
#pragma omp parallel for schedule(dynamic) num_threads(sc.threads) if (sc.threads > 1)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const VehicleSnapshot s = snapshot(fleet[cand[static_cast<std::size_t>(k)]], sc);
    out[static_cast<std::size_t>(k)] = plan_for(s, r, sc);
  }
  return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

std::optional<InsertionPlan> serve_request_greedy(std::span<const Vehicle> fleet, const Request& r,
                                                  const SchedulerContext& sc, bool prune) {
  const std::vector<std::size_t> cand = prune ? prune_vehicles(fleet, r, sc) : all_indices(fleet.size());
  std::vector<std::optional<InsertionPlan>> plans = evaluate(fleet, cand, r, sc);
  std::optional<InsertionPlan> best;
  for (auto& p : plans) {
    if (!p) continue;
    if (!best || p->cost < best->cost || (p->cost == best->cost && p->vehicle < best->vehicle)) best = std::move(p);
  }
  return best;
}

BatchResult batch_assign(std::span<const RequestId> window, std::span<const Vehicle> fleet, BatchMode mode,
                         const SchedulerContext& sc, bool prune) {
  BatchResult out;
  std::vector<RequestId> reqs(window.begin(), window.end());
  std::sort(reqs.begin(), reqs.end());
  assign::CostMatrix m(reqs.size(), fleet.size());
  std::vector<std::vector<std::optional<InsertionPlan>>> plans(reqs.size());
  std::vector<std::vector<std::size_t>> cands(reqs.size());
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const Request& r = (*sc.requests)[reqs[i]];
    cands[i] = prune ? prune_vehicles(fleet, r, sc) : all_indices(fleet.size());
    plans[i] = evaluate(fleet, cands[i], r, sc);
    out.cost_evaluations += cands[i].size();
    for (std::size_t k = 0; k < cands[i].size(); ++k)
      if (plans[i][k]) m(i, cands[i][k]) = plans[i][k]->cost;
  }
  const assign::Matching match =
      mode == BatchMode::Weighted ? assign::min_cost_matching(m) : assign::max_cardinality_matching(m);
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const int c = match.row_to_col[i];
    if (c == assign::kUnmatched) {
      out.unmatched.push_back(reqs[i]);
      continue;
    }
    const auto vi = static_cast<std::size_t>(c);
    const auto it = std::find(cands[i].begin(), cands[i].end(), vi);
    out.assigned.emplace_back(reqs[i], std::move(*plans[i][static_cast<std::size_t>(it - cands[i].begin())]));
  }
  return out;
}

void RebalanceSet::evict(TimeMs now, TimeMs window) {
  std::erase_if(entries_, [&](const Entry& e) { return e.inserted < now - window; });
}

std::vector<RebalanceMove> rebalance_stars(std::span<const Vehicle> fleet, RebalanceSet& p,
                                           const spcache::DistanceOracle& oracle, TimeMs) {
  std::vector<RebalanceMove> out;
  for (std::size_t i = 0; i < fleet.size() && !p.empty(); ++i) {
    const Vehicle& v = fleet[i];
    if (!v.idle() || v.state != domain::VehicleState::ForHire) continue;
    std::size_t best = 0;
    Millimeters best_d = kUnreachable;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const Millimeters d = oracle.dist(v.node(), p.entries()[k].node);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    if (best_d == kUnreachable) continue;
    const NodeId target = p.entries()[best].node;
    p.erase(best);
    if (target != v.node()) out.push_back({i, target});
  }
  return out;
}

void AccumulatedCost::served(double cost_s) {
  if (cost_s < 0) throw std::invalid_argument("negative sharing cost");
  total_ += cost_s;
  ++served_;
}

}  // namespace poolsim::stars
