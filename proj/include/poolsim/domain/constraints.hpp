#pragma once

#include "poolsim/common/types.hpp"

namespace poolsim::domain {

/// The constraint set Z plus the timing parameters it is evaluated with.
struct ConstraintSet {
  TimeMs t_wait = seconds_to_ms(300);
  TimeMs t_total = seconds_to_ms(600);
  TimeMs t_extra = kNoLimit;  // disabled unless configured
  int capacity = 4;
  Millimeters d_w = 0;        // 0 disables meeting points
  MmPerSecond walk_speed = mps_to_mmps(1.4);
  TimeMs c_run = 0;           // surcharge added to reported waiting times only
  TimeMs delta = seconds_to_ms(30);

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;

  TimeMs walk_ms(Millimeters walk) const { return walk == 0 ? 0 : travel_ms(walk, walk_speed); }
};

}  // namespace poolsim::domain
