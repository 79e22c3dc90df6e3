#pragma once

#include <vector>

#include "poolsim/geo/digraph.hpp"

namespace poolsim::spcache {

class DistanceCache;
class FullDistanceMatrix;

/// Exact point-to-point road distances, the only view of the network the
/// schedulers need.
class DistanceOracle {
 public:
  virtual ~DistanceOracle() = default;
  virtual Millimeters dist(NodeId u, NodeId v) const = 0;
  virtual std::size_t node_count() const = 0;
};

class CacheOracle final : public DistanceOracle {
 public:
  explicit CacheOracle(const DistanceCache& c) : c_(&c) {}
  Millimeters dist(NodeId u, NodeId v) const override;
  std::size_t node_count() const override;

 private:
  const DistanceCache* c_;
};

class MatrixOracle final : public DistanceOracle {
 public:
  explicit MatrixOracle(const FullDistanceMatrix& m) : m_(&m) {}
  Millimeters dist(NodeId u, NodeId v) const override;
  std::size_t node_count() const override;

 private:
  const FullDistanceMatrix* m_;
};

/// One shortest u->v node sequence, walking only nodes that lie on some
/// shortest path according to `oracle`. Throws UnreachableError.
std::vector<NodeId> shortest_path(const DistanceOracle& oracle, const geo::Digraph& g, NodeId u, NodeId v);

}  // namespace poolsim::spcache
