#pragma once

#include <vector>

#include "poolsim/geo/digraph.hpp"

namespace poolsim::spcache {

/// Uncompressed n x n distance table built by one Dijkstra per source. The
/// serial reference the cache is compared against.
class FullDistanceMatrix {
 public:
  FullDistanceMatrix() = default;
  /// threads = 1 runs the plain serial loop.
  explicit FullDistanceMatrix(const geo::Digraph& g, int threads = 1);

  std::size_t node_count() const { return n_; }
  Millimeters dist(NodeId u, NodeId v) const { return d_[static_cast<std::size_t>(u) * n_ + v]; }
  std::size_t stored_entries() const { return d_.size(); }

 private:
  std::size_t n_ = 0;
  std::vector<Millimeters> d_;
};

}  // namespace poolsim::spcache
