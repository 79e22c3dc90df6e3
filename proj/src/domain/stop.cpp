#include "poolsim/domain/stop.hpp"

namespace poolsim::domain {

const char* to_string(StopKind k) {
  switch (k) {
    case StopKind::DropOff: return "DropOff";
    case StopKind::PickUp: return "PickUp";
    case StopKind::WaitStop: return "WaitStop";
    case StopKind::Deactivate: return "Deactivate";
    case StopKind::Activate: return "Activate";
    case StopKind::Roam: return "Roam";
    case StopKind::Idle: return "Idle";
  }
  return "?";
}

const char* to_string(VehicleState s) {
  switch (s) {
    case VehicleState::ForHire: return "For-hire";
    case VehicleState::TransitionHold: return "Transition-hold";
    case VehicleState::ForShare: return "For-share";
  }
  return "?";
}

StopKind classify_stop(TimeMs s_wait, int s_pass, std::int64_t s_distance, bool activate) {
  if (s_wait < 0 || s_distance < 0)
    throw ClassificationError("stop signature has a negative wait or distance");
  if (s_pass != 0) {
    if (s_wait != 0) throw ClassificationError("passenger change with a non-zero wait matches no stop");
    return s_pass > 0 ? StopKind::PickUp : StopKind::DropOff;
  }
  if (s_wait == 0 && s_distance == 0) return activate ? StopKind::Activate : StopKind::Idle;
  if (s_distance == 0) return StopKind::Deactivate;
  if (s_wait == 0) return StopKind::Roam;
  return StopKind::WaitStop;
}

bool signature_matches(const Stop& s) {
  if (s.s_wait < 0) return false;
  switch (s.kind) {
    case StopKind::DropOff: return s.s_wait == 0 && s.s_pass < 0;
    case StopKind::PickUp: return s.s_wait == 0 && s.s_pass > 0;
    case StopKind::WaitStop: return s.s_pass == 0;
    case StopKind::Deactivate: return s.s_wait > 0 && s.s_pass == 0 && s.s_distance == 0;
    case StopKind::Activate:
    case StopKind::Idle: return s.s_wait == 0 && s.s_pass == 0 && s.s_distance == 0;
    case StopKind::Roam: return s.s_wait == 0 && s.s_pass == 0 && s.s_distance > 0;
  }
  return false;
}

std::optional<VehicleState> try_transition(VehicleState s, StopKind k) {
  using S = VehicleState;
  if (k == StopKind::Activate) k = StopKind::Idle;
  switch (s) {
    case S::ForHire:
      switch (k) {
        case StopKind::Idle:
        case StopKind::Roam: return S::ForHire;
        case StopKind::Deactivate:
        case StopKind::WaitStop: return S::TransitionHold;
        default: return std::nullopt;
      }
    case S::TransitionHold:
      switch (k) {
        case StopKind::Idle: return S::ForHire;
        case StopKind::PickUp: return S::ForShare;
        default: return std::nullopt;
      }
    case S::ForShare:
      switch (k) {
        case StopKind::WaitStop: return S::TransitionHold;
        case StopKind::PickUp:
        case StopKind::DropOff: return S::ForShare;
        default: return std::nullopt;
      }
  }
  return std::nullopt;
}

VehicleState transition(VehicleState s, StopKind k) {
  if (auto next = try_transition(s, k)) return *next;
  throw TransitionError(s, k);
}

}  // namespace poolsim::domain
