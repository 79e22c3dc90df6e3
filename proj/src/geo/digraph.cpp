#include "poolsim/geo/digraph.hpp"

#include <algorithm>

namespace poolsim::geo {

Digraph::Digraph(std::size_t node_count, std::span<const Edge> edges) {
  offsets_.assign(node_count + 1, 0);
  for (const Edge& e : edges) ++offsets_[e.from + 1];
  for (std::size_t i = 0; i < node_count; ++i) offsets_[i + 1] += offsets_[i];
  arcs_.resize(edges.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges) arcs_[fill[e.from]++] = Arc{e.to, e.length};
  for (std::size_t u = 0; u < node_count; ++u) {
    std::sort(arcs_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]),
              arcs_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]),
              [](const Arc& a, const Arc& b) {
                return a.to != b.to ? a.to < b.to : a.length < b.length;
              });
  }
}

std::size_t Digraph::max_out_degree() const {
  std::size_t best = 0;
  for (std::size_t u = 0; u + 1 < offsets_.size(); ++u) best = std::max(best, offsets_[u + 1] - offsets_[u]);
  return best;
}

Digraph Digraph::reversed() const {
  std::vector<Edge> flipped;
  flipped.reserve(arcs_.size());
  for (std::size_t u = 0; u < node_count(); ++u)
    for (const Arc& a : out(static_cast<NodeId>(u)))
      flipped.push_back(Edge{a.to, static_cast<NodeId>(u), a.length});
  return Digraph(node_count(), flipped);
}

Millimeters Digraph::arc_length(NodeId u, NodeId v) const {
  auto arcs = out(u);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), v, [](const Arc& a, NodeId t) { return a.to < t; });
  if (it == arcs.end() || it->to != v) return kUnreachable;
  return it->length;
}

}  // namespace poolsim::geo
