#include "poolsim/spcache/hitting_set.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace poolsim::spcache {

HittingSet greedy_hitting_set(std::span<const std::vector<NodeId>> sets, std::span<const NodeId> free_nodes) {
  HittingSet out;
  out.hit_by.assign(sets.size(), kNoNode);

  // Compact the universe so buckets and counters are dense arrays.
  std::unordered_map<NodeId, std::uint32_t> index;
  std::vector<NodeId> universe;
  std::vector<std::vector<std::uint32_t>> members(sets.size());
  for (std::size_t s = 0; s < sets.size(); ++s) {
    if (sets[s].empty()) throw std::invalid_argument("hitting set input contains an empty set");
    for (NodeId v : sets[s]) {
      auto [it, fresh] = index.emplace(v, static_cast<std::uint32_t>(universe.size()));
      if (fresh) universe.push_back(v);
      members[s].push_back(it->second);
    }
    std::sort(members[s].begin(), members[s].end());
    members[s].erase(std::unique(members[s].begin(), members[s].end()), members[s].end());
  }
  const std::size_t u = universe.size();
  std::vector<std::uint32_t> offsets(u + 1, 0);
  for (const auto& m : members)
    for (auto x : m) ++offsets[x + 1];
  for (std::size_t i = 0; i < u; ++i) offsets[i + 1] += offsets[i];
  std::vector<std::uint32_t> containing(offsets.back());
  {
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (std::uint32_t s = 0; s < members.size(); ++s)
      for (auto x : members[s]) containing[fill[x]++] = s;
  }
  std::vector<std::uint32_t> freq(u);
  for (std::size_t x = 0; x < u; ++x) freq[x] = offsets[x + 1] - offsets[x];

  std::vector<char> hit(sets.size(), 0);
  std::vector<char> taken(u, 0);
  auto take = [&](std::uint32_t x) {
    taken[x] = 1;
    for (std::uint32_t i = offsets[x]; i < offsets[x + 1]; ++i) {
      const std::uint32_t s = containing[i];
      if (hit[s]) continue;
      hit[s] = 1;
      out.hit_by[s] = universe[x];
      for (auto y : members[s]) --freq[y];
    }
  };

  if (!free_nodes.empty()) {
    std::vector<NodeId> sorted(free_nodes.begin(), free_nodes.end());
    std::sort(sorted.begin(), sorted.end());
    for (NodeId v : sorted) {
      auto it = index.find(v);
      if (it != index.end() && !taken[it->second]) take(it->second);
    }
  }

  std::uint32_t top = 0;
  for (auto f : freq) top = std::max(top, f);
  std::vector<std::vector<std::uint32_t>> buckets(top + 1);
  for (std::uint32_t x = 0; x < u; ++x)
    if (freq[x] > 0) buckets[freq[x]].push_back(x);

  // A bucket only receives entries from the bucket above it, so once it is
  // the highest non-empty bucket its content is final and can be sorted.
  while (top > 0) {
    auto& b = buckets[top];
    std::sort(b.begin(), b.end(), [&](std::uint32_t a, std::uint32_t c) { return universe[a] < universe[c]; });
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::uint32_t x = b[i];
      if (taken[x] || freq[x] != top) continue;
      // Nodes whose count drops land one bucket lower for later rounds.
      std::vector<std::uint32_t> dropped;
      for (std::uint32_t k = offsets[x]; k < offsets[x + 1]; ++k) {
        const std::uint32_t s = containing[k];
        if (hit[s]) continue;
        for (auto y : members[s])
          if (y != x) dropped.push_back(y);
      }
      take(x);
      out.nodes.push_back(universe[x]);
      for (auto y : dropped)
        if (!taken[y] && freq[y] > 0) buckets[freq[y]].push_back(y);
    }
    b.clear();
    b.shrink_to_fit();
    --top;
  }
  return out;
}

}  // namespace poolsim::spcache
