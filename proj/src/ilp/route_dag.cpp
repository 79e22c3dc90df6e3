#include "poolsim/ilp/route_dag.hpp"

#include <set>
#include <stdexcept>

namespace poolsim::ilp {

RouteDag build_route_dag(const domain::VehicleContext& ctx, std::span<const DagStop> stops,
                         const spcache::DistanceOracle& oracle) {
  RouteDag dag;
  dag.stops_.assign(stops.begin(), stops.end());
  dag.base_ = ctx.origin.base;
  dag.nodes_.push_back(RouteDag::Node{RouteDag::npos, 0, ctx.origin.node, 0});
  for (std::size_t j = 0; j < stops.size(); ++j) {
    if (stops[j].options.empty()) throw std::invalid_argument("empty meeting-point set in route DAG");
    dag.layer_begin_.push_back(dag.nodes_.size());
    for (std::size_t k = 0; k < stops[j].options.size(); ++k)
      dag.nodes_.push_back(RouteDag::Node{j, k, stops[j].options[k].node, stops[j].options[k].walk});
  }
  dag.layer_begin_.push_back(dag.nodes_.size());
  dag.nodes_.push_back(RouteDag::Node{RouteDag::npos, 0, kNoNode, 0});

  const std::size_t sink = dag.nodes_.size() - 1;
  dag.arc_begin_.assign(dag.nodes_.size() + 1, 0);
  auto arcs_from = [&](std::size_t u, std::size_t next_layer) {
    if (next_layer == stops.size()) {
      dag.arcs_.push_back({sink, 0});
      return;
    }
    for (std::size_t v = dag.layer_begin_[next_layer]; v < dag.layer_begin_[next_layer + 1]; ++v) {
      const Millimeters d = oracle.dist(dag.nodes_[u].node, dag.nodes_[v].node);
      if (d == kUnreachable) continue;
      const TimeMs w = u == 0 ? domain::first_leg_ms(ctx.origin, d, ctx.speed) : travel_ms(d, ctx.speed);
      dag.arcs_.push_back({v, w});
    }
  };
  for (std::size_t u = 0; u < dag.nodes_.size(); ++u) {
    dag.arc_begin_[u] = dag.arcs_.size();
    if (u == sink) continue;
    arcs_from(u, u == 0 ? 0 : dag.nodes_[u].layer + 1);
  }
  dag.arc_begin_[dag.nodes_.size()] = dag.arcs_.size();
  return dag;
}

NodeChecker make_checker(const RouteDag& dag, const domain::RequestView& reqs, const domain::ConstraintSet& z) {
  return [&dag, reqs, z](std::size_t u, TimeMs arrival) -> std::optional<TimeMs> {
    if (u == dag.sink()) return arrival;
    const RouteDag::Node& n = dag.node(u);
    const DagStop& s = dag.stop(n.layer);
    const domain::Request& r = reqs[s.request];
    if (n.walk > z.d_w) return std::nullopt;
    if (s.pickup) {
      const TimeMs dep = std::max(arrival, r.request_time + z.walk_ms(n.walk));
      if (dep - r.request_time > z.t_wait) return std::nullopt;
      return dep;
    }
    if (arrival - r.request_time - r.direct_ms > z.t_total) return std::nullopt;
    return arrival;
  };
}

RouteOptimum find_optimal_route(const RouteDag& dag, const NodeChecker& check) {
  const std::size_t n = dag.node_count();
  std::vector<TimeMs> dist(n, kNoLimit);
  std::vector<std::size_t> pred(n, RouteDag::npos);
  std::set<std::pair<TimeMs, std::size_t>> pq;
  dist[dag.root()] = dag.base_time();
  pq.insert({dist[dag.root()], dag.root()});
  while (!pq.empty()) {
    const auto [du, u] = *pq.begin();
    pq.erase(pq.begin());
    if (u == dag.sink()) break;
    for (const DagArc& a : dag.out(u)) {
      const std::optional<TimeMs> c = check(a.to, du + a.weight);
      if (!c || *c >= dist[a.to]) continue;
      if (dist[a.to] != kNoLimit) pq.erase({dist[a.to], a.to});
      dist[a.to] = *c;
      pred[a.to] = u;
      pq.insert({*c, a.to});
    }
  }
  RouteOptimum out;
  if (dist[dag.sink()] == kNoLimit) return out;
  out.valid = true;
  out.completion = dist[dag.sink()];
  out.chosen.assign(dag.layer_count(), 0);
  for (std::size_t v = pred[dag.sink()]; v != dag.root(); v = pred[v]) out.chosen[dag.node(v).layer] = dag.node(v).option;
  return out;
}

}  // namespace poolsim::ilp
