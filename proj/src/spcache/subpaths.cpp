#include "poolsim/spcache/subpaths.hpp"

#include <string>

namespace poolsim::spcache {

void RelevantSubtree::reset(const geo::Digraph& g, const ShortestPathTree& tree,
                            std::span<const NodeId> destinations, bool strict) {
  for (NodeId v : touched_) mark_[v] = 0;
  touched_.clear();
  g_ = &g;
  tree_ = &tree;
  mark_[tree.source] = 1;
  touched_.push_back(tree.source);
  for (NodeId d : destinations) {
    if (!tree.reachable(d)) {
      if (strict) throw UnreachableError("destination " + std::to_string(d) + " unreachable from " +
                                         std::to_string(tree.source));
      continue;
    }
    if (mark_[d] == 0) touched_.push_back(d);
    mark_[d] = 2;
    for (NodeId x = tree.pred[d]; x != kNoNode && mark_[x] == 0; x = tree.pred[x]) {
      mark_[x] = 1;
      touched_.push_back(x);
    }
  }
}

void RelevantSubtree::children(NodeId x, std::vector<NodeId>& out) const {
  out.clear();
  NodeId last = kNoNode;
  for (const geo::Arc& a : g_->out(x)) {
    if (a.to == last) continue;
    if (mark_[a.to] != 0 && tree_->pred[a.to] == x) {
      out.push_back(a.to);
      last = a.to;
    }
  }
}

NodePath RelevantSubtree::common_subpath() const {
  NodePath p{tree_->source};
  std::vector<NodeId> kids;
  while (!is_destination(p.back())) {
    children(p.back(), kids);
    if (kids.size() != 1) break;
    p.push_back(kids[0]);
  }
  return p;
}

void RelevantSubtree::extend_chain(NodePath& p, unsigned L) const {
  std::vector<NodeId> kids;
  while (p.size() < L && !is_destination(p.back())) {
    children(p.back(), kids);
    if (kids.size() != 1) break;
    p.push_back(kids[0]);
  }
}

SubPathSet RelevantSubtree::fork_subpaths(unsigned L) const {
  if (L == 0) throw std::invalid_argument("sub-path threshold L must be at least 1");
  SubPathSet out{tree_->source, {}};
  std::vector<NodePath> open{common_subpath()};
  std::vector<NodeId> kids;
  while (!open.empty()) {
    NodePath p = std::move(open.back());
    open.pop_back();
    if (p.size() >= L || is_destination(p.back())) {
      out.subpaths.push_back(std::move(p));
      continue;
    }
    children(p.back(), kids);
    if (kids.empty()) {
      out.subpaths.push_back(std::move(p));
      continue;
    }
    // Push in reverse so branches come out in ascending child order.
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      NodePath q = p;
      q.push_back(*it);
      extend_chain(q, L);
      open.push_back(std::move(q));
    }
  }
  return out;
}

NodePath common_subpath(const geo::Digraph& g, const ShortestPathTree& tree, std::span<const NodeId> destinations) {
  RelevantSubtree rs(g.node_count());
  rs.reset(g, tree, destinations, true);
  return rs.common_subpath();
}

SubPathSet fork_subpaths(const geo::Digraph& g, const ShortestPathTree& tree, std::span<const NodeId> destinations,
                         unsigned L) {
  RelevantSubtree rs(g.node_count());
  rs.reset(g, tree, destinations, true);
  return rs.fork_subpaths(L);
}

}  // namespace poolsim::spcache
