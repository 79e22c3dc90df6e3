#include "poolsim/io/demand.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace poolsim::io {

namespace {

class PointSampler {
 public:
  PointSampler(const geo::RoadNetwork& net, const DemandSpec& spec) : net_(net), spec_(spec) {
    if (!spec.clusters.empty()) {
      std::vector<double> w;
      for (const Cluster& c : spec.clusters) {
        if (!net.contains(c.center)) throw std::invalid_argument("cluster center outside the network");
        if (c.weight < 0 || c.sigma_m < 0) throw std::invalid_argument("cluster weight and sigma must be non-negative");
        w.push_back(c.weight);
      }
      pick_cluster_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
    }
  }

  NodeId draw(Spatial s, std::mt19937_64& rng) {
    if (s == Spatial::Uniform || spec_.clusters.empty()) {
      std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(net_.node_count() - 1));
      return pick(rng);
    }
    const Cluster& c = spec_.clusters[pick_cluster_(rng)];
    std::normal_distribution<double> off(0.0, 1.0);
    const double north = off(rng) * c.sigma_m;
    const double east = off(rng) * c.sigma_m;
    const geo::LatLon& o = net_.coord(c.center);
    constexpr double deg = 180.0 / std::numbers::pi;
    geo::LatLon p{o.lat + north / geo::kEarthRadiusMeters * deg,
                  o.lon + east / (geo::kEarthRadiusMeters * std::cos(o.lat / deg)) * deg};
    p.lat = std::clamp(p.lat, -90.0, 90.0);
    p.lon = std::clamp(p.lon, -180.0, 180.0);
    return geo::snap_to_node(p, net_);
  }

 private:
  const geo::RoadNetwork& net_;
  const DemandSpec& spec_;
  std::discrete_distribution<std::size_t> pick_cluster_;
};

}  // namespace

std::vector<domain::Request> generate_demand(const geo::RoadNetwork& net, const DemandSpec& spec) {
  std::vector<domain::Request> out;
  if (spec.rate_per_hour.empty()) throw std::invalid_argument("demand needs at least one hourly rate");
  for (double r : spec.rate_per_hour)
    if (!(r >= 0) || !std::isfinite(r)) throw std::invalid_argument("hourly rates must be finite and non-negative");
  if (net.node_count() < 2 || spec.horizon <= 0) return out;
  std::mt19937_64 rng(spec.seed);
  PointSampler points(net, spec);
  const TimeMs hour = seconds_to_ms(3600);
  for (TimeMs start = 0; start < spec.horizon; start += hour) {
    const double rate = spec.rate_per_hour[static_cast<std::size_t>(start / hour) % spec.rate_per_hour.size()];
    if (rate <= 0) continue;
    std::exponential_distribution<double> gap(rate / 3600.0);
    const TimeMs end = std::min(start + hour, spec.horizon);
    double t = ms_to_seconds(start);
    for (;;) {
      t += gap(rng);
      const auto at = static_cast<TimeMs>(std::floor(t * 1000.0));
      if (at >= end) break;
      const NodeId o = points.draw(spec.origins, rng);
      NodeId d = points.draw(spec.destinations, rng);
      for (int tries = 0; d == o && tries < 100; ++tries) d = points.draw(spec.destinations, rng);
      if (d == o) continue;
      out.push_back(domain::make_request(static_cast<RequestId>(out.size()), o, d, at));
    }
  }
  return out;
}

}  // namespace poolsim::io
