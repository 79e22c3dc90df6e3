#pragma once

#include <cstdint>
#include <vector>

#include "poolsim/geo/road_network.hpp"
#include "poolsim/spcache/partition.hpp"

namespace poolsim::spcache {

struct CacheStats {
  std::size_t node_count = 0;
  std::size_t stored_entries = 0;         // destination-side partitions
  std::size_t source_side_entries = 0;    // source-side partitions
  double mean_cover_size = 0.0;           // over (source, destination partition) pairs
  std::size_t max_cover_size = 0;
  std::size_t total_cover_rows = 0;       // cover rows that are not destinations

  double compression_ratio() const {
    const double full = static_cast<double>(node_count) * static_cast<double>(node_count);
    return full > 0 ? static_cast<double>(stored_entries) / full : 0.0;
  }
};

/// Partitioned all-pairs distance oracle. One partition per region answers
/// queries into that region; a mirrored set built on the reversed graph
/// answers queries out of each region.
class DistanceCache {
 public:
  DistanceCache() = default;

  unsigned L() const { return L_; }
  std::size_t node_count() const { return node_region_.size(); }
  const std::vector<CachePartition>& partitions() const { return dest_parts_; }
  const std::vector<CachePartition>& source_partitions() const { return source_parts_; }
  std::uint32_t partition_of(NodeId v) const { return node_region_[v]; }

  Millimeters dist(NodeId u, NodeId v) const {
    if (u == v) return 0;
    return dest_parts_[node_region_[v]].distance(u, node_column_[v]);
  }

  /// Same answer, computed through the source-side partitions.
  Millimeters dist_by_source(NodeId u, NodeId v) const {
    if (u == v) return 0;
    return source_parts_[node_region_[u]].distance(v, node_column_[u]);
  }

  CacheStats stats() const;

  friend bool operator==(const DistanceCache&, const DistanceCache&) = default;

 private:
  friend DistanceCache build_cache(const geo::Digraph&, const std::vector<std::uint32_t>&, const BuildOptions&);
  friend DistanceCache assemble_cache(unsigned, std::size_t, std::vector<CachePartition>,
                                      std::vector<CachePartition>);

  unsigned L_ = 0;
  std::vector<std::uint32_t> node_region_;  // partition index per node
  std::vector<std::uint32_t> node_column_;  // index within its partition's destinations
  std::vector<CachePartition> dest_parts_;
  std::vector<CachePartition> source_parts_;
};

/// `region_map[v]` is the region id of node v; partitions are ordered by
/// ascending region id.
DistanceCache build_cache(const geo::Digraph& g, const std::vector<std::uint32_t>& region_map,
                          const BuildOptions& opts = {});
DistanceCache build_cache(const geo::RoadNetwork& rn, const std::vector<std::uint32_t>& region_map,
                          const BuildOptions& opts = {});

/// Validates partition layout and wires up the lookup maps; throws
/// std::invalid_argument on inconsistent input.
DistanceCache assemble_cache(unsigned L, std::size_t node_count, std::vector<CachePartition> dest_parts,
                             std::vector<CachePartition> source_parts);

/// Node sequence of one shortest u->v path, found by a depth-first walk that
/// only enters nodes w with dist(u,w) + dist(w,v) = dist(u,v). Throws
/// UnreachableError when v cannot be reached.
std::vector<NodeId> path_query(const DistanceCache& cache, const geo::Digraph& g, NodeId u, NodeId v);

/// One region per line "node region"; missing nodes are an error.
std::vector<std::uint32_t> load_region_map(const std::string& path, std::size_t node_count);

}  // namespace poolsim::spcache
