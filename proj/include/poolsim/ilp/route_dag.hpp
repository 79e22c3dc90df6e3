#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "poolsim/domain/schedule.hpp"
#include "poolsim/geo/meeting_points.hpp"

namespace poolsim::ilp {

/// One pickup or dropoff of a fixed visiting order together with the
/// intersections it may be served at.
struct DagStop {
  RequestId request = domain::kNoRequest;
  bool pickup = false;
  std::vector<geo::MeetingPoint> options;  // never empty
};

struct DagArc {
  std::size_t to;
  TimeMs weight;
};

/// Layered graph root -> M_1 -> ... -> M_a -> sink. Node 0 is the root, the
/// options of layer j follow in order, and the last node is the sink.
class RouteDag {
 public:
  struct Node {
    std::size_t layer = 0;  // npos for root and sink
    std::size_t option = 0;
    NodeId node = kNoNode;
    Millimeters walk = 0;
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t root() const { return 0; }
  std::size_t sink() const { return nodes_.size() - 1; }
  std::size_t layer_count() const { return stops_.size(); }
  std::size_t layer_begin(std::size_t j) const { return layer_begin_[j]; }
  std::size_t layer_size(std::size_t j) const { return layer_begin_[j + 1] - layer_begin_[j]; }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  const DagStop& stop(std::size_t layer) const { return stops_[layer]; }
  std::span<const DagArc> out(std::size_t u) const {
    return {arcs_.data() + arc_begin_[u], arcs_.data() + arc_begin_[u + 1]};
  }
  std::size_t arc_count() const { return arcs_.size(); }
  TimeMs base_time() const { return base_; }

 private:
  friend RouteDag build_route_dag(const domain::VehicleContext&, std::span<const DagStop>,
                                  const spcache::DistanceOracle&);
  std::vector<DagStop> stops_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> layer_begin_;
  std::vector<std::size_t> arc_begin_;
  std::vector<DagArc> arcs_;
  TimeMs base_ = 0;
};

/// Full bipartite arcs between consecutive layers weighted by drive time
/// (a point shared by consecutive layers costs 0), zero-weight arcs into the
/// sink. Throws std::invalid_argument for an empty option set.
RouteDag build_route_dag(const domain::VehicleContext& ctx, std::span<const DagStop> stops,
                         const spcache::DistanceOracle& oracle);

/// checkConstraints(node, arrival): nullopt when the node cannot be served
/// at that arrival, otherwise the departure time after any hold.
using NodeChecker = std::function<std::optional<TimeMs>(std::size_t dag_node, TimeMs arrival)>;

/// Waiting-time, total-time and walking limits of `z` at each DAG node.
/// T_extra is not checked here.
NodeChecker make_checker(const RouteDag& dag, const domain::RequestView& reqs, const domain::ConstraintSet& z);

struct RouteOptimum {
  bool valid = false;
  TimeMs completion = 0;           // departure from the last layer
  std::vector<std::size_t> chosen;  // option index per layer
};

/// Label-setting search from the root with a priority queue; labels are
/// departure times after holds.
RouteOptimum find_optimal_route(const RouteDag& dag, const NodeChecker& check);

}  // namespace poolsim::ilp
