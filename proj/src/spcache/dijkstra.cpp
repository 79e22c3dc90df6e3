#include "poolsim/spcache/dijkstra.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

namespace poolsim::spcache {

std::vector<NodeId> ShortestPathTree::path_to(NodeId v) const {
  if (dist.at(v) == kUnreachable) return {};
  std::vector<NodeId> path;
  for (NodeId x = v; x != kNoNode; x = pred[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

ShortestPathTree shortest_path_tree(const geo::Digraph& g, NodeId source) {
  const std::size_t n = g.node_count();
  if (source >= n) throw std::out_of_range("unknown node " + std::to_string(source));
  ShortestPathTree t{source, std::vector<Millimeters>(n, kUnreachable), std::vector<NodeId>(n, kNoNode)};
  std::vector<char> done(n, 0);
  using Item = std::pair<Millimeters, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  t.dist[source] = 0;
  pq.emplace(0, source);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (const geo::Arc& a : g.out(u)) {
      if (done[a.to]) continue;
      const Millimeters nd = d + a.length;
      if (nd < t.dist[a.to]) {
        t.dist[a.to] = nd;
        t.pred[a.to] = u;
        pq.emplace(nd, a.to);
      } else if (nd == t.dist[a.to] && u < t.pred[a.to]) {
        t.pred[a.to] = u;
      }
    }
  }
  return t;
}

ShortestPathTree shortest_path_tree(const geo::RoadNetwork& rn, NodeId source) {
  return shortest_path_tree(rn.graph(), source);
}

DijkstraWorkspace::DijkstraWorkspace(std::size_t n) : dist_(n, kUnreachable) {}

const std::vector<Millimeters>& DijkstraWorkspace::run(const geo::Digraph& g, NodeId source) {
  std::fill(dist_.begin(), dist_.end(), kUnreachable);
  heap_.clear();
  auto cmp = std::greater<>();
  dist_[source] = 0;
  heap_.emplace_back(0, source);
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), cmp);
    auto [d, u] = heap_.back();
    heap_.pop_back();
    if (d != dist_[u]) continue;
    for (const geo::Arc& a : g.out(u)) {
      const Millimeters nd = d + a.length;
      if (nd < dist_[a.to]) {
        dist_[a.to] = nd;
        heap_.emplace_back(nd, a.to);
        std::push_heap(heap_.begin(), heap_.end(), cmp);
      }
    }
  }
  return dist_;
}

}  // namespace poolsim::spcache
