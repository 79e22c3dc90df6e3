#include <omp.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "poolsim/common/parallel.hpp"
#include "poolsim/spcache/cache.hpp"
#include "poolsim/spcache/dijkstra.hpp"
#include "poolsim/spcache/hitting_set.hpp"
#include "poolsim/spcache/oracle.hpp"
#include "poolsim/spcache/subpaths.hpp"

namespace poolsim::spcache {

namespace {

// Sub-paths of one source into one partition, flattened.
struct SourcePaths {
  std::vector<NodeId> nodes;
  std::vector<Millimeters> dists;
  std::vector<std::uint32_t> offsets{0};
};

std::vector<CachePartition> build_partitions(const geo::Digraph& g,
                                             const std::vector<std::vector<NodeId>>& dest_sets,
                                             const std::vector<std::uint32_t>& region_ids, const BuildOptions& opts) {
  if (opts.L == 0) throw std::invalid_argument("sub-path threshold L must be at least 1");
  const std::size_t n = g.node_count();
  const std::size_t k = dest_sets.size();
  const int threads = worker_threads(opts.threads);

  // Which partition (if any) lists a node as destination and at which column.
  std::vector<std::int64_t> home(n, -1), home_col(n, -1);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < dest_sets[i].size(); ++c) {
      home[dest_sets[i][c]] = static_cast<std::int64_t>(i);
      home_col[dest_sets[i][c]] = static_cast<std::int64_t>(c);
    }

  std::vector<std::vector<SourcePaths>> paths(k, std::vector<SourcePaths>(n));
  // Distances from each destination to the rest of its own partition.
  std::vector<std::vector<Millimeters>> own_rows(n);

#pragma omp parallel num_threads(threads)
  {
    RelevantSubtree rs(n);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t ui = 0; ui < static_cast<std::int64_t>(n); ++ui) {
      const auto u = static_cast<NodeId>(ui);
      const ShortestPathTree tree = shortest_path_tree(g, u);
      for (std::size_t i = 0; i < k; ++i) {
        rs.reset(g, tree, dest_sets[i], false);
        SubPathSet s = rs.fork_subpaths(opts.L);
        SourcePaths& sp = paths[i][u];
        for (const NodePath& p : s.subpaths) {
          for (NodeId x : p) {
            sp.nodes.push_back(x);
            sp.dists.push_back(tree.dist[x]);
          }
          sp.offsets.push_back(static_cast<std::uint32_t>(sp.nodes.size()));
        }
      }
      if (home[u] >= 0) {
        const auto& d = dest_sets[static_cast<std::size_t>(home[u])];
        auto& row = own_rows[u];
        row.resize(d.size());
        for (std::size_t c = 0; c < d.size(); ++c) row[c] = tree.dist[d[c]];
      }
    }
  }

  std::vector<CachePartition> parts(k);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(k); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    CachePartition& part = parts[i];
    part.region = region_ids[i];
    part.destinations = dest_sets[i];

    std::vector<std::vector<NodeId>> sets;
    for (NodeId u = 0; u < n; ++u) {
      const SourcePaths& sp = paths[i][u];
      for (std::size_t s = 0; s + 1 < sp.offsets.size(); ++s)
        sets.emplace_back(sp.nodes.begin() + sp.offsets[s], sp.nodes.begin() + sp.offsets[s + 1]);
    }
    std::span<const NodeId> free_nodes;
    if (opts.destinations_as_free_covers) free_nodes = part.destinations;
    const HittingSet hs = greedy_hitting_set(sets, free_nodes);

    part.rows = part.destinations;
    part.rows.insert(part.rows.end(), hs.nodes.begin(), hs.nodes.end());
    std::sort(part.rows.begin(), part.rows.end());
    part.rows.erase(std::unique(part.rows.begin(), part.rows.end()), part.rows.end());
    auto row_of = [&](NodeId v) {
      return static_cast<std::uint32_t>(std::lower_bound(part.rows.begin(), part.rows.end(), v) - part.rows.begin());
    };

    part.cover_offset.assign(n + 1, 0);
    std::size_t set_idx = 0;
    std::vector<CoverEntry> mine;
    for (NodeId u = 0; u < n; ++u) {
      const SourcePaths& sp = paths[i][u];
      mine.clear();
      for (std::size_t s = 0; s + 1 < sp.offsets.size(); ++s, ++set_idx) {
        const NodeId c = hs.hit_by[set_idx];
        for (std::uint32_t p = sp.offsets[s]; p < sp.offsets[s + 1]; ++p)
          if (sp.nodes[p] == c) {
            mine.push_back(CoverEntry{row_of(c), sp.dists[p]});
            break;
          }
      }
      std::sort(mine.begin(), mine.end(), [](const CoverEntry& a, const CoverEntry& b) { return a.row < b.row; });
      mine.erase(std::unique(mine.begin(), mine.end()), mine.end());
      part.cover_entries.insert(part.cover_entries.end(), mine.begin(), mine.end());
      part.cover_offset[u + 1] = part.cover_entries.size();
    }
    part.local.assign(part.rows.size() * part.destinations.size(), kUnreachable);
  }
  paths.clear();

  // Fill the local matrices: destination rows come from phase one, extra
  // cover rows need their own search.
  struct RowJob {
    std::size_t part;
    std::uint32_t row;
  };
  std::vector<RowJob> jobs;
  for (std::size_t i = 0; i < k; ++i)
    for (std::uint32_t r = 0; r < parts[i].rows.size(); ++r) jobs.push_back(RowJob{i, r});

#pragma omp parallel num_threads(threads)
  {
    DijkstraWorkspace ws(n);
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(jobs.size()); ++j) {
      const RowJob job = jobs[static_cast<std::size_t>(j)];
      CachePartition& part = parts[job.part];
      const NodeId src = part.rows[job.row];
      const std::size_t width = part.destinations.size();
      Millimeters* out = part.local.data() + static_cast<std::size_t>(job.row) * width;
      if (home[src] == static_cast<std::int64_t>(job.part)) {
        std::copy(own_rows[src].begin(), own_rows[src].end(), out);
      } else {
        const auto& d = ws.run(g, src);
        for (std::size_t c = 0; c < width; ++c) out[c] = d[part.destinations[c]];
      }
    }
  }
  return parts;
}

void check_destinations(std::span<const NodeId> destinations, std::size_t n) {
  if (destinations.empty()) throw std::invalid_argument("partition needs at least one destination");
  for (NodeId d : destinations)
    if (d >= n) throw std::out_of_range("unknown destination node " + std::to_string(d));
}

}  // namespace

std::vector<NodeId> CachePartition::cover_nodes(NodeId u) const {
  std::vector<NodeId> out;
  for (const CoverEntry& c : cover(u)) out.push_back(rows[c.row]);
  return out;
}

std::int64_t CachePartition::column_of(NodeId d) const {
  auto it = std::lower_bound(destinations.begin(), destinations.end(), d);
  if (it == destinations.end() || *it != d) return -1;
  return it - destinations.begin();
}

CachePartition build_partition(const geo::Digraph& g, std::span<const NodeId> destinations, const BuildOptions& opts) {
  check_destinations(destinations, g.node_count());
  std::vector<NodeId> d(destinations.begin(), destinations.end());
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  auto parts = build_partitions(g, {d}, {0}, opts);
  return std::move(parts.front());
}

DistanceCache assemble_cache(unsigned L, std::size_t node_count, std::vector<CachePartition> dest_parts,
                             std::vector<CachePartition> source_parts) {
  if (dest_parts.size() != source_parts.size())
    throw std::invalid_argument("destination and source partition counts differ");
  DistanceCache c;
  c.L_ = L;
  c.node_region_.assign(node_count, UINT32_MAX);
  c.node_column_.assign(node_count, UINT32_MAX);
  for (std::size_t i = 0; i < dest_parts.size(); ++i) {
    const CachePartition& p = dest_parts[i];
    const CachePartition& q = source_parts[i];
    if (p.destinations != q.destinations || p.region != q.region)
      throw std::invalid_argument("source partition " + std::to_string(i) + " does not mirror its destination side");
    if (i > 0 && dest_parts[i - 1].region >= p.region)
      throw std::invalid_argument("partitions are not in ascending region order");
    for (const CachePartition* part : {&p, &q}) {
      if (!std::is_sorted(part->destinations.begin(), part->destinations.end()) ||
          !std::is_sorted(part->rows.begin(), part->rows.end()) || part->destinations.empty())
        throw std::invalid_argument("partition node lists are not sorted");
      if (part->cover_offset.size() != node_count + 1 || part->cover_offset.front() != 0 ||
          part->cover_offset.back() != part->cover_entries.size() ||
          !std::is_sorted(part->cover_offset.begin(), part->cover_offset.end()))
        throw std::invalid_argument("partition cover offsets are inconsistent");
      if (part->local.size() != part->rows.size() * part->destinations.size())
        throw std::invalid_argument("partition local matrix has the wrong size");
      for (const CoverEntry& e : part->cover_entries)
        if (e.row >= part->rows.size()) throw std::invalid_argument("cover entry row out of range");
      for (NodeId v : part->rows)
        if (v >= node_count) throw std::invalid_argument("partition row node out of range");
      if (!std::includes(part->rows.begin(), part->rows.end(), part->destinations.begin(),
                         part->destinations.end()))
        throw std::invalid_argument("partition rows do not include its destinations");
    }
    for (std::size_t col = 0; col < p.destinations.size(); ++col) {
      const NodeId v = p.destinations[col];
      if (v >= node_count) throw std::invalid_argument("destination node out of range");
      if (c.node_region_[v] != UINT32_MAX)
        throw std::invalid_argument("node " + std::to_string(v) + " is in two partitions");
      c.node_region_[v] = static_cast<std::uint32_t>(i);
      c.node_column_[v] = static_cast<std::uint32_t>(col);
    }
  }
  for (std::size_t v = 0; v < node_count; ++v)
    if (c.node_region_[v] == UINT32_MAX) throw std::invalid_argument("node " + std::to_string(v) + " has no partition");
  c.dest_parts_ = std::move(dest_parts);
  c.source_parts_ = std::move(source_parts);
  return c;
}

DistanceCache build_cache(const geo::Digraph& g, const std::vector<std::uint32_t>& region_map,
                          const BuildOptions& opts) {
  const std::size_t n = g.node_count();
  if (region_map.size() != n)
    throw std::invalid_argument("region map covers " + std::to_string(region_map.size()) + " of " +
                                std::to_string(n) + " nodes");
  std::map<std::uint32_t, std::vector<NodeId>> by_region;
  for (NodeId v = 0; v < n; ++v) by_region[region_map[v]].push_back(v);
  std::vector<std::vector<NodeId>> sets;
  std::vector<std::uint32_t> ids;
  for (auto& [r, nodes] : by_region) {
    ids.push_back(r);
    sets.push_back(std::move(nodes));
  }
  auto dest = build_partitions(g, sets, ids, opts);
  auto src = build_partitions(g.reversed(), sets, ids, opts);
  return assemble_cache(opts.L, n, std::move(dest), std::move(src));
}

DistanceCache build_cache(const geo::RoadNetwork& rn, const std::vector<std::uint32_t>& region_map,
                          const BuildOptions& opts) {
  return build_cache(rn.graph(), region_map, opts);
}

CacheStats DistanceCache::stats() const {
  CacheStats s;
  s.node_count = node_count();
  std::size_t cover_total = 0, pairs = 0;
  for (const CachePartition& p : dest_parts_) {
    s.stored_entries += p.stored_entries();
    s.total_cover_rows += p.rows.size() - p.destinations.size();
    for (NodeId u = 0; u < p.source_count(); ++u) {
      const std::size_t c = p.cover(u).size();
      cover_total += c;
      s.max_cover_size = std::max(s.max_cover_size, c);
      ++pairs;
    }
  }
  for (const CachePartition& p : source_parts_) s.source_side_entries += p.stored_entries();
  s.mean_cover_size = pairs ? static_cast<double>(cover_total) / static_cast<double>(pairs) : 0.0;
  return s;
}

std::vector<NodeId> path_query(const DistanceCache& cache, const geo::Digraph& g, NodeId u, NodeId v) {
  if (u >= g.node_count() || v >= g.node_count()) throw std::out_of_range("unknown node in path query");
  return shortest_path(CacheOracle(cache), g, u, v);
}

std::vector<std::uint32_t> load_region_map(const std::string& path, std::size_t node_count) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open region file " + path);
  std::vector<std::uint32_t> region(node_count, UINT32_MAX);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = line.substr(0, line.find('#'));
    std::istringstream ss(line);
    long long node = 0, r = 0;
    if (!(ss >> node)) continue;
    if (!(ss >> r) || node < 0 || r < 0 || static_cast<std::size_t>(node) >= node_count)
      throw geo::ParseError(lineno, "expected '<node> <region>'");
    region[static_cast<std::size_t>(node)] = static_cast<std::uint32_t>(r);
  }
  for (std::size_t v = 0; v < node_count; ++v)
    if (region[v] == UINT32_MAX) throw std::invalid_argument("node " + std::to_string(v) + " missing from region map");
  return region;
}

}  // namespace poolsim::spcache
