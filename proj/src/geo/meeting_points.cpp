#include "poolsim/geo/meeting_points.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace poolsim::geo {

bool MeetingPointSet::contains(NodeId v) const {
  auto it = std::lower_bound(members.begin(), members.end(), v,
                             [](const MeetingPoint& m, NodeId x) { return m.node < x; });
  return it != members.end() && it->node == v;
}

MeetingPointSet meeting_points(const WalkingNetwork& wn, NodeId center, Millimeters radius) {
  if (center >= wn.node_count()) throw std::out_of_range("unknown node " + std::to_string(center));
  using Item = std::pair<Millimeters, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  std::unordered_map<NodeId, Millimeters> dist;
  dist[center] = 0;
  pq.emplace(0, center);
  MeetingPointSet out{center, radius, {}};
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d != dist[u]) continue;
    out.members.push_back(MeetingPoint{u, d});
    for (const Arc& a : wn.graph().out(u)) {
      const Millimeters nd = d + a.length;
      if (nd > radius) continue;
      auto it = dist.find(a.to);
      if (it == dist.end() || nd < it->second) {
        dist[a.to] = nd;
        pq.emplace(nd, a.to);
      }
    }
  }
  std::sort(out.members.begin(), out.members.end(),
            [](const MeetingPoint& a, const MeetingPoint& b) { return a.node < b.node; });
  return out;
}

const MeetingPointSet& MeetingPointIndex::get(NodeId center, Millimeters radius) const {
  const auto key = std::pair{center, radius};
  {
    std::shared_lock lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return *it->second;
  }
  auto fresh = std::make_unique<MeetingPointSet>(meeting_points(*wn_, center, radius));
  std::unique_lock lock(mu_);
  auto [it, inserted] = memo_.emplace(key, std::move(fresh));
  return *it->second;
}

std::size_t MeetingPointIndex::cached() const {
  std::shared_lock lock(mu_);
  return memo_.size();
}

}  // namespace poolsim::geo
