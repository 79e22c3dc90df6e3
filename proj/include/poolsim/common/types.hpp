#pragma once

#include <cstdint>
#include <limits>

namespace poolsim {

using NodeId = std::uint32_t;
using RequestId = std::uint32_t;
using VehicleId = std::uint32_t;

// Distances are integer millimeters so that path sums compose exactly.
using Millimeters = std::uint64_t;
// Simulation time is integer milliseconds.
using TimeMs = std::int64_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr Millimeters kUnreachable = std::numeric_limits<Millimeters>::max();
inline constexpr TimeMs kNoLimit = std::numeric_limits<TimeMs>::max();

// Speeds are integer millimeters per second.
using MmPerSecond = std::uint32_t;

constexpr Millimeters meters_to_mm(double meters) {
  return static_cast<Millimeters>(meters * 1000.0 + 0.5);
}

constexpr double mm_to_meters(Millimeters mm) { return static_cast<double>(mm) / 1000.0; }

constexpr TimeMs seconds_to_ms(double s) {
  return static_cast<TimeMs>(s * 1000.0 + (s >= 0 ? 0.5 : -0.5));
}

constexpr double ms_to_seconds(TimeMs ms) { return static_cast<double>(ms) / 1000.0; }

constexpr MmPerSecond mps_to_mmps(double mps) { return static_cast<MmPerSecond>(mps * 1000.0 + 0.5); }

// Time to cover `mm` at `speed`, rounded up to the next millisecond. Exact
// for distances below ~1.8e7 km.
constexpr TimeMs travel_ms(Millimeters mm, MmPerSecond speed) {
  if (mm == kUnreachable) return kNoLimit;
  return static_cast<TimeMs>((mm * 1000u + speed - 1) / speed);
}

// Distance covered in `ms` at `speed`, rounded down.
constexpr Millimeters covered_mm(TimeMs ms, MmPerSecond speed) {
  if (ms <= 0) return 0;
  return static_cast<Millimeters>(static_cast<std::uint64_t>(ms) * speed / 1000u);
}

}  // namespace poolsim
