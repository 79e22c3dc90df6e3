#include "poolsim/geo/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace poolsim::geo {

namespace {

void check_range(const LatLon& p) {
  if (!(p.lat >= -90.0 && p.lat <= 90.0) || !(p.lon >= -180.0 && p.lon <= 180.0))
    throw std::out_of_range("coordinate out of range");
}

double rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

double haversine(const LatLon& a, const LatLon& b) {
  check_range(a);
  check_range(b);
  const double dlat = rad(b.lat - a.lat);
  const double dlon = rad(b.lon - a.lon);
  const double s = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(rad(a.lat)) * std::cos(rad(b.lat)) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(s)));
}

}  // namespace poolsim::geo
