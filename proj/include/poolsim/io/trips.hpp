#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "poolsim/domain/request.hpp"
#include "poolsim/geo/road_network.hpp"

namespace poolsim::io {

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header names of the columns ingestion reads; everything else is ignored.
struct ColumnMap {
  std::string pickup_time = "pickup_datetime";
  std::string dropoff_time = "dropoff_datetime";
  std::string pickup_lat = "pickup_latitude";
  std::string pickup_lon = "pickup_longitude";
  std::string dropoff_lat = "dropoff_latitude";
  std::string dropoff_lon = "dropoff_longitude";
  std::string passengers = "passenger_count";

  /// Yellow-cab trip_data layout of 2013 (best effort).
  static ColumnMap tlc2013() { return {}; }
};

struct TripRecord {
  std::int64_t pickup_s = 0;   // seconds since 1970-01-01, timezone-naive
  std::int64_t dropoff_s = 0;
  geo::LatLon pickup;
  geo::LatLon dropoff;
  int passengers = 1;
};

struct IngestOptions {
  ColumnMap columns;
  bool clamp_group = false;  // every request carries one passenger
  // "YYYY-MM-DD HH:MM:SS"; request times count from here. Defaults to the
  // midnight before the earliest valid pickup.
  std::optional<std::string> start;
  double bbox_margin_m = 0.0;
};

inline constexpr const char* kDropMalformed = "malformed";
inline constexpr const char* kDropInconsistentTime = "inconsistent_time";
inline constexpr const char* kDropOutOfRegion = "out_of_region";
inline constexpr const char* kDropEqualSnap = "equal_snap";
inline constexpr const char* kDropBeforeStart = "before_start";

struct IngestResult {
  std::vector<domain::Request> requests;  // time order, ids 0..k-1
  std::size_t rows = 0;
  std::map<std::string, std::size_t> dropped;  // by reason
  std::int64_t time_origin_s = 0;
};

/// "YYYY-MM-DD HH:MM:SS" (or with 'T') to seconds since the epoch.
std::optional<std::int64_t> parse_timestamp(const std::string& s);

/// Reads a header line and data rows. Throws IngestError when a mapped
/// column is missing from the header.
IngestResult ingest_csv(std::istream& in, const geo::RoadNetwork& net, const IngestOptions& opts = {});
IngestResult ingest_csv_file(const std::string& path, const geo::RoadNetwork& net, const IngestOptions& opts = {});

}  // namespace poolsim::io
