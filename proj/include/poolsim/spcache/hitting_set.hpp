#pragma once

#include <span>
#include <vector>

#include "poolsim/common/types.hpp"

namespace poolsim::spcache {

struct HittingSet {
  std::vector<NodeId> nodes;   // in selection order
  std::vector<NodeId> hit_by;  // per input set, the selected node that first covered it
};

/// Greedy hitting set: repeatedly selects the node contained in the most
/// still-unhit sets, lowest node id on ties. Nodes in `free_nodes` are taken
/// up front at no cost; they are reported in `hit_by` but not in `nodes`.
/// Throws std::invalid_argument on an empty input set.
HittingSet greedy_hitting_set(std::span<const std::vector<NodeId>> sets, std::span<const NodeId> free_nodes = {});

}  // namespace poolsim::spcache
