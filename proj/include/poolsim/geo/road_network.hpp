#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "poolsim/common/types.hpp"
#include "poolsim/geo/digraph.hpp"
#include "poolsim/geo/geodesy.hpp"

namespace poolsim::geo {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Directed driving network. Node ids are dense 0..n-1, edge lengths are
/// strictly positive millimeters.
class RoadNetwork {
 public:
  RoadNetwork() = default;
  RoadNetwork(std::vector<LatLon> coords, std::vector<Edge> edges);

  std::size_t node_count() const { return coords_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<LatLon>& coords() const { return coords_; }
  const LatLon& coord(NodeId v) const { return coords_.at(v); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Digraph& graph() const { return graph_; }
  bool contains(NodeId v) const { return v < coords_.size(); }

 private:
  std::vector<LatLon> coords_;
  std::vector<Edge> edges_;
  Digraph graph_;
};

/// Undirected pedestrian view over the same intersections.
class WalkingNetwork {
 public:
  WalkingNetwork() = default;
  WalkingNetwork(std::size_t node_count, std::vector<Edge> symmetric_edges);

  std::size_t node_count() const { return graph_.node_count(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Digraph& graph() const { return graph_; }

 private:
  std::vector<Edge> edges_;
  Digraph graph_;
};

/// Parses the text edge-list format:
///   nodes <n> edges <m>
///   node <id> <lat> <lon>      (n lines)
///   edge <from> <to> <meters>  (m lines)
/// Body lines may appear in any order; `#` starts a comment.
RoadNetwork load_network(std::istream& in);
RoadNetwork load_network_file(const std::string& path);
void write_network(std::ostream& out, const RoadNetwork& rn);

/// Each directed edge contributes both orientations; antiparallel or parallel
/// duplicates collapse to their minimum length.
WalkingNetwork derive_walking_network(const RoadNetwork& rn);

/// Nearest node by great-circle distance, lowest id on ties.
NodeId snap_to_node(const LatLon& p, const RoadNetwork& rn);

}  // namespace poolsim::geo
