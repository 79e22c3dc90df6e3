#include "poolsim/domain/schedule.hpp"

#include <algorithm>

namespace poolsim::domain {

const char* to_string(Violation v) {
  switch (v) {
    case Violation::None: return "none";
    case Violation::Precedence: return "precedence";
    case Violation::Capacity: return "capacity";
    case Violation::WaitTime: return "T_wait";
    case Violation::TotalTime: return "T_total";
    case Violation::ExtraTime: return "T_extra";
    case Violation::WalkDistance: return "D_w";
    case Violation::Unreachable: return "unreachable";
  }
  return "?";
}

TimeMs first_leg_ms(const PlanOrigin& o, Millimeters d, MmPerSecond speed) {
  if (d == kUnreachable) return kNoLimit;
  return travel_ms(o.offset + d, speed);
}

ScheduleCheck check_schedule(const VehicleContext& ctx, std::span<const RouteStop> stops, const RequestView& reqs,
                             const ConstraintSet& z, const spcache::DistanceOracle& oracle,
                             std::vector<StopTiming>* timing) {
  ScheduleCheck out;
  if (timing) timing->clear();
  TimeMs t = ctx.origin.base;
  NodeId cur = ctx.origin.node;
  int load = ctx.load;
  // (request, pickup time, dropped) for requests picked up within this plan.
  struct Seen {
    RequestId r;
    TimeMs picked;
    bool dropped;
  };
  Seen seen_buf[16];
  std::vector<Seen> seen_heap;
  std::size_t seen_n = 0;
  auto find_seen = [&](RequestId r) -> Seen* {
    for (std::size_t i = 0; i < seen_n; ++i) {
      Seen& s = seen_n <= 16 ? seen_buf[i] : seen_heap[i];
      if (s.r == r) return &s;
    }
    return nullptr;
  };
  auto add_seen = [&](const Seen& s) {
    if (seen_n < 16) {
      seen_buf[seen_n++] = s;
      return;
    }
    if (seen_n == 16) seen_heap.assign(seen_buf, seen_buf + 16);
    seen_heap.push_back(s);
    ++seen_n;
  };
  std::vector<RequestId> dropped_onboard;
  auto fail = [&](Violation v, std::size_t k, RequestId r) {
    out.violation = v;
    out.stop_index = k;
    out.request = r;
    out.completion = t;
    return out;
  };

  for (std::size_t k = 0; k < stops.size(); ++k) {
    const RouteStop& s = stops[k];
    const Millimeters d = oracle.dist(cur, s.node);
    if (d == kUnreachable) return fail(Violation::Unreachable, k, s.request);
    const TimeMs leg = k == 0 ? first_leg_ms(ctx.origin, d, ctx.speed) : travel_ms(d, ctx.speed);
    const TimeMs arrival = t + leg;
    out.drive_ms += leg;
    const Request& r = reqs[s.request];
    TimeMs dep = arrival;
    if (s.pickup) {
      if (r.pickup_time.has_value() || find_seen(s.request) != nullptr)
        return fail(Violation::Precedence, k, s.request);
      if (s.walk > z.d_w) return fail(Violation::WalkDistance, k, s.request);
      dep = std::max(arrival, s.ready);
      out.hold_ms += dep - arrival;
      t = dep;
      if (dep - r.request_time > z.t_wait) return fail(Violation::WaitTime, k, s.request);
      load += r.group;
      if (load > ctx.capacity) return fail(Violation::Capacity, k, s.request);
      add_seen(Seen{s.request, dep, false});
    } else {
      TimeMs picked = 0;
      if (Seen* sn = find_seen(s.request)) {
        if (sn->dropped) return fail(Violation::Precedence, k, s.request);
        sn->dropped = true;
        picked = sn->picked;
      } else if (r.pickup_time.has_value()) {
        if (std::find(dropped_onboard.begin(), dropped_onboard.end(), s.request) != dropped_onboard.end())
          return fail(Violation::Precedence, k, s.request);
        dropped_onboard.push_back(s.request);
        picked = *r.pickup_time;
      } else {
        return fail(Violation::Precedence, k, s.request);
      }
      t = dep;
      if (s.walk > z.d_w) return fail(Violation::WalkDistance, k, s.request);
      if (arrival - r.request_time - r.direct_ms > z.t_total) return fail(Violation::TotalTime, k, s.request);
      if (z.t_extra != kNoLimit && arrival - picked - r.direct_ms > z.t_extra)
        return fail(Violation::ExtraTime, k, s.request);
      load -= r.group;
    }
    if (timing) timing->push_back(StopTiming{arrival, dep, d, load});
    cur = s.node;
  }
  for (std::size_t i = 0; i < seen_n; ++i) {
    const Seen& s = seen_n <= 16 ? seen_buf[i] : seen_heap[i];
    if (!s.dropped) return fail(Violation::Precedence, stops.size(), s.r);
  }
  if (load != 0) return fail(Violation::Precedence, stops.size(), kNoRequest);
  out.completion = t;
  return out;
}

namespace {

template <bool Prune>
Insertion search(const VehicleContext& ctx, std::span<const RouteStop> base, std::size_t locked,
                 const RouteStop& pickup, const RouteStop& dropoff, const RequestView& reqs, const ConstraintSet& z,
                 const spcache::DistanceOracle& oracle, const InsertionCost& cost) {
  Insertion best;
  const std::size_t m = base.size();
  const Request& nr = reqs[pickup.request];
  std::vector<StopTiming> base_t;
  const ScheduleCheck base_check = check_schedule(ctx, base, reqs, z, oracle, &base_t);
  if (Prune && !base_check.ok()) return best;
  const TimeMs base_drive = base_check.drive_ms;

  std::vector<RouteStop> cand(m + 2);
  std::vector<StopTiming> t;
  for (std::size_t i = locked; i <= m; ++i) {
    if constexpr (Prune) {
      const TimeMs before = i == 0 ? ctx.origin.base : base_t[i - 1].departure;
      if (before - nr.request_time > z.t_wait) break;
      const int load_before = i == 0 ? ctx.load : base_t[i - 1].load_after;
      if (load_before + nr.group > ctx.capacity) continue;
    }
    for (std::size_t j = i + 1; j <= m + 1; ++j) {
      if constexpr (Prune) {
        // Base stop j-2 now sits between the new pickup and dropoff.
        if (j >= i + 2 && base_t[j - 2].load_after + nr.group > ctx.capacity) break;
      }
      std::size_t w = 0;
      for (std::size_t k = 0; k <= m; ++k) {
        if (w == i) cand[w++] = pickup;
        if (w == j) cand[w++] = dropoff;
        if (k < m) cand[w++] = base[k];
      }
      const ScheduleCheck c = check_schedule(ctx, cand, reqs, z, oracle, &t);
      if (!c.ok()) continue;
      const TimeMs hold = t[i].departure - t[i].arrival;
      const TimeMs delta = c.drive_ms - base_drive;
      const double value = cost(c, delta, hold);
      if (!best.feasible || value < best.cost) {
        best = Insertion{true, i, j, value, delta, hold, c};
      }
    }
  }
  return best;
}

}  // namespace

Insertion best_insertion(const VehicleContext& ctx, std::span<const RouteStop> base, std::size_t locked,
                         const RouteStop& pickup, const RouteStop& dropoff, const RequestView& reqs,
                         const ConstraintSet& z, const spcache::DistanceOracle& oracle, const InsertionCost& cost) {
  return search<true>(ctx, base, locked, pickup, dropoff, reqs, z, oracle, cost);
}

Insertion best_insertion_exhaustive(const VehicleContext& ctx, std::span<const RouteStop> base, std::size_t locked,
                                    const RouteStop& pickup, const RouteStop& dropoff, const RequestView& reqs,
                                    const ConstraintSet& z, const spcache::DistanceOracle& oracle,
                                    const InsertionCost& cost) {
  return search<false>(ctx, base, locked, pickup, dropoff, reqs, z, oracle, cost);
}

std::vector<RouteStop> with_insertion(std::span<const RouteStop> base, const Insertion& ins, const RouteStop& pickup,
                                      const RouteStop& dropoff) {
  std::vector<RouteStop> out;
  out.reserve(base.size() + 2);
  for (std::size_t k = 0; k <= base.size(); ++k) {
    if (out.size() == ins.pickup_index) out.push_back(pickup);
    if (out.size() == ins.dropoff_index) out.push_back(dropoff);
    if (k < base.size()) out.push_back(base[k]);
  }
  return out;
}

}  // namespace poolsim::domain
