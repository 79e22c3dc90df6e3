#include "poolsim/geo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace poolsim::geo {

RoadNetwork make_grid_network(const GridSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0) throw std::invalid_argument("grid needs at least one row and column");
  if (!(spec.spacing_m > 0)) throw std::invalid_argument("grid spacing must be positive");
  const double lat_step = spec.spacing_m / kEarthRadiusMeters * 180.0 / std::numbers::pi;
  const double lon_step = lat_step / std::cos(spec.origin.lat * std::numbers::pi / 180.0);
  std::vector<LatLon> coords;
  coords.reserve(static_cast<std::size_t>(spec.rows) * spec.cols);
  for (std::uint32_t r = 0; r < spec.rows; ++r)
    for (std::uint32_t c = 0; c < spec.cols; ++c)
      coords.push_back(LatLon{spec.origin.lat + r * lat_step, spec.origin.lon + c * lon_step});

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  auto id = [&](std::uint32_t r, std::uint32_t c) { return static_cast<NodeId>(r * spec.cols + c); };
  auto add = [&](NodeId a, NodeId b) {
    double len = spec.spacing_m * (1.0 + (spec.jitter > 0 ? spec.jitter * unit(rng) : 0.0));
    len = std::max(len, haversine(coords[a], coords[b]));
    edges.push_back(Edge{a, b, static_cast<Millimeters>(std::ceil(len * 1000.0))});
  };
  for (std::uint32_t r = 0; r < spec.rows; ++r) {
    for (std::uint32_t c = 0; c < spec.cols; ++c) {
      if (c + 1 < spec.cols) {
        add(id(r, c), id(r, c + 1));
        add(id(r, c + 1), id(r, c));
      }
      if (r + 1 < spec.rows) {
        add(id(r, c), id(r + 1, c));
        add(id(r + 1, c), id(r, c));
      }
    }
  }
  return RoadNetwork(std::move(coords), std::move(edges));
}

std::vector<std::uint32_t> grid_block_regions(std::uint32_t rows, std::uint32_t cols, std::uint32_t block_rows,
                                              std::uint32_t block_cols) {
  if (block_rows == 0 || block_cols == 0) throw std::invalid_argument("block counts must be positive");
  std::vector<std::uint32_t> region(static_cast<std::size_t>(rows) * cols);
  for (std::uint32_t r = 0; r < rows; ++r)
    for (std::uint32_t c = 0; c < cols; ++c) {
      const std::uint32_t br = std::min(block_rows - 1, r * block_rows / rows);
      const std::uint32_t bc = std::min(block_cols - 1, c * block_cols / cols);
      region[static_cast<std::size_t>(r) * cols + c] = br * block_cols + bc;
    }
  return region;
}

}  // namespace poolsim::geo
