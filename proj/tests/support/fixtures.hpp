#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <vector>

#include "poolsim/domain/constraints.hpp"
#include "poolsim/domain/request.hpp"
#include "poolsim/domain/vehicle.hpp"
#include "poolsim/geo/grid.hpp"
#include "poolsim/geo/meeting_points.hpp"
#include "poolsim/geo/road_network.hpp"
#include "poolsim/spcache/full_matrix.hpp"
#include "poolsim/spcache/oracle.hpp"
#include "poolsim/stars/stars.hpp"

namespace poolsim::testing {

inline constexpr double kMetersPerDegree = 111194.9;  // along the equator, R = 6371 km

inline geo::LatLon offset(const geo::LatLon& o, double north_m, double east_m) {
  const double lat = o.lat + north_m / kMetersPerDegree;
  const double lon = o.lon + east_m / (kMetersPerDegree * std::cos(o.lat * 3.14159265358979323846 / 180.0));
  return {lat, lon};
}

/// Strongly connected digraph: a directed cycle through a random permutation
/// plus `extra` random arcs. Lengths are at least the great-circle distance.
inline geo::RoadNetwork random_network(std::size_t n, std::size_t extra, std::uint64_t seed, double box_m = 3000.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, box_m), stretch(0.0, 0.6);
  const geo::LatLon origin{40.70, -74.00};
  std::vector<geo::LatLon> coords(n);
  for (auto& c : coords) c = offset(origin, pos(rng), pos(rng));
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<geo::Edge> edges;
  auto add = [&](NodeId a, NodeId b) {
    const double m = geo::haversine(coords[a], coords[b]) * (1.0 + stretch(rng)) + 1.0;
    edges.push_back({a, b, meters_to_mm(m) + 1});
  };
  for (std::size_t i = 0; i < n && n > 1; ++i) add(perm[i], perm[(i + 1) % n]);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  for (std::size_t k = 0; k < extra; ++k) {
    const NodeId a = pick(rng), b = pick(rng);
    if (a != b) add(a, b);
  }
  return geo::RoadNetwork(std::move(coords), std::move(edges));
}

/// Bidirectional chain 0-1-...-k with the given edge lengths in meters, laid
/// out on a straight line slightly shorter than the edges.
inline geo::RoadNetwork path_network(const std::vector<double>& meters) {
  std::vector<geo::LatLon> coords{{0.0, 0.0}};
  std::vector<geo::Edge> edges;
  double at = 0.0;
  for (std::size_t i = 0; i < meters.size(); ++i) {
    at += meters[i] * 0.99;
    coords.push_back({0.0, at / kMetersPerDegree});
    const auto a = static_cast<NodeId>(i), b = static_cast<NodeId>(i + 1);
    edges.push_back({a, b, meters_to_mm(meters[i])});
    edges.push_back({b, a, meters_to_mm(meters[i])});
  }
  return geo::RoadNetwork(std::move(coords), std::move(edges));
}

inline geo::RoadNetwork grid(std::uint32_t rows, std::uint32_t cols, double spacing = 200.0) {
  geo::GridSpec g;
  g.rows = rows;
  g.cols = cols;
  g.spacing_m = spacing;
  return geo::make_grid_network(g);
}

/// A network with exact distances and a scheduler context over it.
struct World {
  geo::RoadNetwork net;
  geo::WalkingNetwork walk;
  spcache::FullDistanceMatrix mat;
  spcache::MatrixOracle oracle;
  geo::MeetingPointIndex mpi;
  std::vector<domain::Request> reqs;
  stars::SchedulerContext sc;
  MmPerSecond speed;

  World(geo::RoadNetwork n, const domain::ConstraintSet& z, MmPerSecond sp)
      : net(std::move(n)),
        walk(geo::derive_walking_network(net)),
        mat(net.graph()),
        oracle(mat),
        mpi(walk),
        speed(sp) {
    sc.network = &net;
    sc.oracle = &oracle;
    sc.meeting_points = &mpi;
    sc.z = z;
    sc.requests = &reqs;
  }

  domain::Request& add_request(NodeId o, NodeId d, TimeMs t, int group = 1) {
    domain::Request r = domain::make_request(static_cast<RequestId>(reqs.size()), o, d, t, group);
    r.direct_ms = travel_ms(mat.dist(o, d), speed);
    reqs.push_back(r);
    return reqs.back();
  }

  domain::Vehicle vehicle(VehicleId id, NodeId at, int capacity = 4) const {
    return domain::make_vehicle(id, at, capacity, speed, sc.clock);
  }
};

/// Installs a plan on a stationary vehicle the way the simulator would.
inline void commit(World& w, domain::Vehicle& v, const std::vector<domain::RouteStop>& route,
                   const std::vector<domain::StopTiming>& timing) {
  v.stops = domain::stops_from_route(route, timing, domain::RequestView(w.reqs));
  for (const domain::RouteStop& s : route) {
    domain::Request& r = w.reqs[s.request];
    r.vehicle = v.id;
    if (s.pickup) {
      r.pickup_node = s.node;
      r.walk_pickup_mm = s.walk;
    } else {
      r.dropoff_node = s.node;
      r.walk_dropoff_mm = s.walk;
    }
  }
}

inline void commit(World& w, domain::Vehicle& v, const stars::InsertionPlan& p) { commit(w, v, p.route, p.timing); }

inline std::unique_ptr<World> make_world(geo::RoadNetwork net, const domain::ConstraintSet& z = {},
                                         MmPerSecond speed = 10000) {
  return std::make_unique<World>(std::move(net), z, speed);
}

}  // namespace poolsim::testing
