#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "poolsim/common/types.hpp"
#include "poolsim/geo/road_network.hpp"

namespace poolsim::geo {

struct MeetingPoint {
  NodeId node;
  Millimeters walk;  // walking distance from the center
};

struct MeetingPointSet {
  NodeId center = kNoNode;
  Millimeters radius = 0;
  std::vector<MeetingPoint> members;  // sorted by node id

  bool contains(NodeId v) const;
};

/// Bounded Dijkstra over the walking graph: every node whose walking distance
/// from `center` is at most `radius`.
MeetingPointSet meeting_points(const WalkingNetwork& wn, NodeId center, Millimeters radius);

/// Lazily memoized meeting_points() keyed by (node, radius). Safe for
/// concurrent use.
class MeetingPointIndex {
 public:
  explicit MeetingPointIndex(const WalkingNetwork& wn) : wn_(&wn) {}

  const MeetingPointSet& get(NodeId center, Millimeters radius) const;
  std::size_t cached() const;

 private:
  const WalkingNetwork* wn_;
  mutable std::shared_mutex mu_;
  mutable std::map<std::pair<NodeId, Millimeters>, std::unique_ptr<MeetingPointSet>> memo_;
};

}  // namespace poolsim::geo
