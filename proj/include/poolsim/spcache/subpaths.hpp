#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "poolsim/geo/digraph.hpp"
#include "poolsim/spcache/dijkstra.hpp"

namespace poolsim::spcache {

using NodePath = std::vector<NodeId>;

struct SubPathSet {
  NodeId source = kNoNode;
  std::vector<NodePath> subpaths;
};

class UnreachableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Extracts the part of a shortest-path tree that leads to a destination set
/// and walks it from the root. Scratch buffers are reused across calls, so one
/// instance per thread.
class RelevantSubtree {
 public:
  explicit RelevantSubtree(std::size_t n) : mark_(n, 0) {}

  /// Marks every tree node on a root->d path. Unreachable destinations are
  /// skipped unless `strict`, in which case UnreachableError is thrown.
  void reset(const geo::Digraph& g, const ShortestPathTree& tree, std::span<const NodeId> destinations,
             bool strict);

  bool relevant(NodeId v) const { return mark_[v] != 0; }
  bool is_destination(NodeId v) const { return mark_[v] == 2; }
  /// Relevant tree children of x, ascending node id.
  void children(NodeId x, std::vector<NodeId>& out) const;

  NodePath common_subpath() const;
  SubPathSet fork_subpaths(unsigned L) const;

 private:
  const geo::Digraph* g_ = nullptr;
  const ShortestPathTree* tree_ = nullptr;
  std::vector<unsigned char> mark_;
  std::vector<NodeId> touched_;

  void extend_chain(NodePath& p, unsigned L) const;
};

/// Longest tree prefix shared by the paths to every destination: it stops at
/// the first destination node or the first fork.
NodePath common_subpath(const geo::Digraph& g, const ShortestPathTree& tree,
                        std::span<const NodeId> destinations);

/// Splits the common sub-path at its fork into one sub-path per branch,
/// repeating until each sub-path has at least L nodes or ends at a
/// destination.
SubPathSet fork_subpaths(const geo::Digraph& g, const ShortestPathTree& tree, std::span<const NodeId> destinations,
                         unsigned L);

}  // namespace poolsim::spcache
