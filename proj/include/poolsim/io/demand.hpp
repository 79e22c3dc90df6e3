#pragma once

#include <cstdint>
#include <vector>

#include "poolsim/domain/request.hpp"
#include "poolsim/geo/road_network.hpp"

namespace poolsim::io {

struct Cluster {
  NodeId center = 0;
  double sigma_m = 300.0;  // standard deviation of the offset, per axis
  double weight = 1.0;
};

enum class Spatial { Uniform, Clustered };

struct DemandSpec {
  // Requests per hour; hour h of the horizon uses entry h modulo the size.
  std::vector<double> rate_per_hour{100.0};
  TimeMs horizon = seconds_to_ms(3600);
  std::uint64_t seed = 1;
  Spatial origins = Spatial::Uniform;
  Spatial destinations = Spatial::Uniform;
  std::vector<Cluster> clusters;  // used by Clustered draws
};

/// Poisson arrivals with piecewise-constant hourly rate. Clustered points
/// are Gaussian offsets around a cluster center snapped to the nearest node.
/// Ids are 0..k-1 in time order.
std::vector<domain::Request> generate_demand(const geo::RoadNetwork& net, const DemandSpec& spec);

}  // namespace poolsim::io
