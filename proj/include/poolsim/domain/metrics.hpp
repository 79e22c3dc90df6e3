#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "poolsim/domain/request.hpp"

namespace poolsim::domain {

inline constexpr double kMetersPerMile = 1609.344;

struct RegionMetrics {
  std::uint32_t region = 0;
  std::uint64_t total = 0;
  std::uint64_t served = 0;
  double service_rate = 0.0;
  double mean_t_wait_s = 0.0;
  double mean_t_extra_s = 0.0;
  double mean_t_total_s = 0.0;
  double mean_w_total_m = 0.0;
};

struct MetricsReport {
  std::uint64_t total_requests = 0;
  std::uint64_t served = 0;
  std::uint64_t unserved = 0;
  bool no_requests = false;  // service_rate reported as 1.0
  double service_rate = 0.0;
  double mean_t_wait_s = 0.0;   // includes the C_run surcharge
  double mean_t_extra_s = 0.0;
  double mean_t_total_s = 0.0;  // t_wait + t_extra
  double mean_vmt_miles = 0.0;  // per vehicle
  double mean_d_hold_miles = 0.0;  // per vehicle, hold time x vehicle speed
  double mean_occupancy = 0.0;  // weighted over time with passengers aboard
  double mean_occupancy_all_time = 0.0;
  double mean_w_pick_m = 0.0;
  double mean_w_drop_m = 0.0;
  double mean_w_total_m = 0.0;
  std::uint64_t boardings = 0;
  double bph = 0.0;  // boardings per simulated hour, whole fleet
  double accumulated_cost_s = 0.0;
  std::uint64_t fleet_size = 0;
  double horizon_h = 0.0;
  std::optional<double> mean_t_iteration_ms;  // only with timing enabled
  std::optional<double> t_exe_s;
  std::vector<RegionMetrics> regions;
};

class MetricsError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct MetricsEvent {
  enum class Kind { Requested, PickedUp, DroppedOff, Unserved } kind;
  RequestId request = 0;
  TimeMs time = 0;
  TimeMs request_time = 0;
  TimeMs direct_ms = 0;
  Millimeters walk_mm = 0;  // pickup or dropoff walk
  std::uint32_t region = 0;
};

struct VehicleTotals {
  Millimeters odometer = 0;
  TimeMs hold_ms = 0;
  TimeMs occupancy_area = 0;  // passenger-milliseconds
  TimeMs occupied_ms = 0;
  std::uint64_t boardings = 0;
};

/// Single collector for request lifecycle events and vehicle totals.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(TimeMs c_run = 0) : c_run_(c_run) {}

  /// Throws MetricsError on out-of-order lifecycle events.
  void accumulate(const MetricsEvent& e);
  void add_vehicle(const VehicleTotals& v, MmPerSecond speed);
  void add_cost(double seconds) { cost_s_ += seconds; }

  MetricsReport finalize(std::uint64_t fleet_size, TimeMs horizon) const;

 private:
  struct Record {
    TimeMs request_time = 0, direct_ms = 0;
    std::optional<TimeMs> pickup, dropoff;
    Millimeters walk_pick = 0, walk_drop = 0;
    std::uint32_t region = 0;
    bool unserved = false;
  };
  TimeMs c_run_;
  std::map<RequestId, Record> records_;
  double vmt_m_ = 0, hold_m_ = 0;
  double occ_area_ = 0, occ_time_ = 0;
  std::uint64_t boardings_ = 0;
  double cost_s_ = 0;
};

}  // namespace poolsim::domain
