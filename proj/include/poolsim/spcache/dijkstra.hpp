#pragma once

#include <vector>

#include "poolsim/common/types.hpp"
#include "poolsim/geo/road_network.hpp"

namespace poolsim::spcache {

/// Single-source shortest paths. Among equal-length predecessors the lowest
/// node id wins, so the tree is a pure function of the graph.
struct ShortestPathTree {
  NodeId source = kNoNode;
  std::vector<Millimeters> dist;  // kUnreachable when not reachable
  std::vector<NodeId> pred;       // kNoNode for the source and unreachable nodes

  bool reachable(NodeId v) const { return dist[v] != kUnreachable; }
  /// Tree path source..v, empty when v is unreachable.
  std::vector<NodeId> path_to(NodeId v) const;
};

ShortestPathTree shortest_path_tree(const geo::Digraph& g, NodeId source);
ShortestPathTree shortest_path_tree(const geo::RoadNetwork& rn, NodeId source);

/// Distances only, reusing caller-owned buffers.
class DijkstraWorkspace {
 public:
  explicit DijkstraWorkspace(std::size_t n);
  const std::vector<Millimeters>& run(const geo::Digraph& g, NodeId source);
  const std::vector<Millimeters>& dist() const { return dist_; }

 private:
  std::vector<Millimeters> dist_;
  std::vector<std::pair<Millimeters, NodeId>> heap_;
};

}  // namespace poolsim::spcache
