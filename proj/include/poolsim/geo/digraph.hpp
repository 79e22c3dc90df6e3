#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "poolsim/common/types.hpp"

namespace poolsim::geo {

struct Edge {
  NodeId from;
  NodeId to;
  Millimeters length;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Arc {
  NodeId to;
  Millimeters length;
};

/// Compressed adjacency. Out-arcs of each node are sorted by (target, length),
/// which fixes the order every search visits neighbours in.
class Digraph {
 public:
  Digraph() = default;
  Digraph(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t arc_count() const { return arcs_.size(); }

  std::span<const Arc> out(NodeId u) const {
    return {arcs_.data() + offsets_[u], arcs_.data() + offsets_[u + 1]};
  }

  std::size_t max_out_degree() const;

  /// Same nodes, every arc flipped.
  Digraph reversed() const;

  /// Shortest arc u->v, or kUnreachable when v is not an out-neighbour.
  Millimeters arc_length(NodeId u, NodeId v) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
};

}  // namespace poolsim::geo
