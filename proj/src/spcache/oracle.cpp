#include "poolsim/spcache/oracle.hpp"

#include <stdexcept>
#include <string>

#include "poolsim/spcache/cache.hpp"
#include "poolsim/spcache/full_matrix.hpp"
#include "poolsim/spcache/subpaths.hpp"

namespace poolsim::spcache {

Millimeters CacheOracle::dist(NodeId u, NodeId v) const { return c_->dist(u, v); }
std::size_t CacheOracle::node_count() const { return c_->node_count(); }
Millimeters MatrixOracle::dist(NodeId u, NodeId v) const { return m_->dist(u, v); }
std::size_t MatrixOracle::node_count() const { return m_->node_count(); }

std::vector<NodeId> shortest_path(const DistanceOracle& oracle, const geo::Digraph& g, NodeId u, NodeId v) {
  const Millimeters total = oracle.dist(u, v);
  if (total == kUnreachable)
    throw UnreachableError("node " + std::to_string(v) + " unreachable from " + std::to_string(u));
  std::vector<NodeId> path{u};
  Millimeters acc = 0;
  NodeId x = u;
  while (x != v) {
    bool moved = false;
    for (const geo::Arc& a : g.out(x)) {
      if (a.to == x) continue;
      const Millimeters rest = oracle.dist(a.to, v);
      if (rest != kUnreachable && acc + a.length + rest == total) {
        acc += a.length;
        x = a.to;
        path.push_back(x);
        moved = true;
        break;
      }
    }
    if (!moved) throw std::logic_error("oracle distances are inconsistent with the graph");
  }
  return path;
}

}  // namespace poolsim::spcache
