#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "poolsim/common/types.hpp"

namespace poolsim::domain {

inline constexpr RequestId kNoRequest = std::numeric_limits<RequestId>::max();

enum class StopKind : std::uint8_t { DropOff, PickUp, WaitStop, Deactivate, Activate, Roam, Idle };
enum class VehicleState : std::uint8_t { ForHire, TransitionHold, ForShare };

inline constexpr StopKind kAllStopKinds[] = {StopKind::DropOff, StopKind::PickUp, StopKind::WaitStop,
                                             StopKind::Deactivate, StopKind::Activate, StopKind::Roam,
                                             StopKind::Idle};
inline constexpr VehicleState kAllStates[] = {VehicleState::ForHire, VehicleState::TransitionHold,
                                              VehicleState::ForShare};

const char* to_string(StopKind k);
const char* to_string(VehicleState s);

struct Stop {
  StopKind kind = StopKind::Idle;
  TimeMs s_wait = 0;            // planned hold at the stop
  int s_pass = 0;               // passengers boarding (+) or alighting (-)
  Millimeters s_distance = 0;   // road distance from the previous stop
  NodeId node = kNoNode;
  RequestId request = kNoRequest;

  static Stop wait_stop(NodeId node, RequestId r, TimeMs hold, Millimeters dist) {
    return {StopKind::WaitStop, hold, 0, dist, node, r};
  }
  static Stop pick_up(NodeId node, RequestId r, int group) { return {StopKind::PickUp, 0, group, 0, node, r}; }
  static Stop drop_off(NodeId node, RequestId r, int group, Millimeters dist) {
    return {StopKind::DropOff, 0, -group, dist, node, r};
  }
  static Stop roam(NodeId node, Millimeters dist) { return {StopKind::Roam, 0, 0, dist, node, kNoRequest}; }
  static Stop idle(NodeId node) { return {StopKind::Idle, 0, 0, 0, node, kNoRequest}; }

  friend bool operator==(const Stop&, const Stop&) = default;
};

class ClassificationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Maps a stop signature onto the input table. Overlapping rows are resolved
/// as: any passenger change is PickUp/DropOff (and needs s_wait = 0); with no
/// passenger change (0,0,0) is Idle, or Activate when `activate` is set,
/// (>0,0,0) is Deactivate, (0,0,>0) is Roam and (>0,0,>0) is WaitStop.
StopKind classify_stop(TimeMs s_wait, int s_pass, std::int64_t s_distance, bool activate = false);

/// True when the fields of `s` are admissible for its declared kind.
bool signature_matches(const Stop& s);

class TransitionError : public std::logic_error {
 public:
  TransitionError(VehicleState s, StopKind k)
      : std::logic_error(std::string("invalid transition: ") + to_string(s) + " on " + to_string(k)),
        state_(s),
        stop_(k) {}
  VehicleState state() const { return state_; }
  StopKind stop() const { return stop_; }

 private:
  VehicleState state_;
  StopKind stop_;
};

/// Next state, or nullopt for a dash entry of the transition table. Activate
/// behaves as Idle.
std::optional<VehicleState> try_transition(VehicleState s, StopKind k);
/// Same, throwing TransitionError on an invalid pair.
VehicleState transition(VehicleState s, StopKind k);

}  // namespace poolsim::domain
