#pragma once

namespace poolsim::geo {

inline constexpr double kEarthRadiusMeters = 6371000.0;

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

/// Great-circle distance in meters. Throws std::out_of_range for coordinates
/// outside [-90,90] x [-180,180].
double haversine(const LatLon& a, const LatLon& b);

}  // namespace poolsim::geo
