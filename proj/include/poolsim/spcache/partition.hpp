#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "poolsim/common/types.hpp"
#include "poolsim/geo/digraph.hpp"

namespace poolsim::spcache {

struct CoverEntry {
  std::uint32_t row;  // index into CachePartition::rows
  Millimeters dist;   // dist(source, rows[row])

  friend bool operator==(const CoverEntry&, const CoverEntry&) = default;
};

/// Distances from every node into one destination set D. Each source keeps a
/// few cover nodes with its distance to them; the local matrix holds the
/// distances from every cover node and every destination to every
/// destination.
struct CachePartition {
  std::uint32_t region = 0;
  std::vector<NodeId> destinations;         // sorted
  std::vector<NodeId> rows;                 // sorted, superset of destinations
  std::vector<std::uint64_t> cover_offset;  // per source, CSR offsets into cover_entries
  std::vector<CoverEntry> cover_entries;
  std::vector<Millimeters> local;  // rows.size() x destinations.size(), row-major

  std::size_t source_count() const { return cover_offset.empty() ? 0 : cover_offset.size() - 1; }

  std::span<const CoverEntry> cover(NodeId u) const {
    return {cover_entries.data() + cover_offset[u], cover_entries.data() + cover_offset[u + 1]};
  }

  Millimeters local_at(std::uint32_t row, std::uint32_t col) const {
    return local[static_cast<std::size_t>(row) * destinations.size() + col];
  }

  /// Shortest distance from u to destinations[col].
  Millimeters distance(NodeId u, std::uint32_t col) const {
    Millimeters best = kUnreachable;
    for (const CoverEntry& c : cover(u)) {
      const Millimeters tail = local_at(c.row, col);
      if (tail == kUnreachable) continue;
      const Millimeters d = c.dist + tail;
      if (d < best) best = d;
    }
    return best;
  }

  std::vector<NodeId> cover_nodes(NodeId u) const;
  /// Index of d in destinations, or -1.
  std::int64_t column_of(NodeId d) const;
  std::size_t stored_entries() const { return cover_entries.size() + local.size(); }

  friend bool operator==(const CachePartition&, const CachePartition&) = default;
};

struct BuildOptions {
  unsigned L = 2;
  int threads = 0;  // 0 = worker_threads() default, 1 = serial
  // Let destinations cover sub-paths that contain them without counting
  // towards the hitting set.
  bool destinations_as_free_covers = true;
};

/// Builds a partition over every source node of `g`.
CachePartition build_partition(const geo::Digraph& g, std::span<const NodeId> destinations,
                               const BuildOptions& opts = {});

}  // namespace poolsim::spcache
