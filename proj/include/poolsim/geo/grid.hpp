#pragma once

#include <cstdint>
#include <vector>

#include "poolsim/geo/road_network.hpp"

namespace poolsim::geo {

struct GridSpec {
  std::uint32_t rows = 8;
  std::uint32_t cols = 8;
  double spacing_m = 100.0;
  // Each directed edge gets length spacing * (1 + U[0, jitter)).
  double jitter = 0.0;
  std::uint64_t seed = 0;
  LatLon origin{40.70, -74.00};
};

/// Bidirectional rows x cols lattice; node id = row * cols + col. Edge lengths
/// never undercut the great-circle distance between their endpoints.
RoadNetwork make_grid_network(const GridSpec& spec);

/// Region id per node for a lattice cut into block_rows x block_cols blocks.
std::vector<std::uint32_t> grid_block_regions(std::uint32_t rows, std::uint32_t cols,
                                              std::uint32_t block_rows, std::uint32_t block_cols);

}  // namespace poolsim::geo
