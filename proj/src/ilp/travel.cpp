#include <algorithm>
#include <limits>

#include "poolsim/ilp/ilp.hpp"

namespace poolsim::ilp {

using domain::ConstraintSet;
using domain::RequestView;
using domain::StopTiming;

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::size_t request_count(std::span<const RouteStop> committed, std::span<const RequestId> extra) {
  std::vector<RequestId> ids;
  for (const RouteStop& s : committed) ids.push_back(s.request);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids.size() + extra.size();
}

RouteStop door_pickup(const Request& r) { return RouteStop{r.origin, r.id, true, r.request_time, 0}; }
RouteStop door_dropoff(const Request& r) { return RouteStop{r.destination, r.id, false, 0, 0}; }

TravelResult finalize(const VehicleSnapshot& v, std::vector<RouteStop> route, const RequestView& reqs,
                      const ConstraintSet& z, const spcache::DistanceOracle& oracle) {
  TravelResult out;
  const domain::ScheduleCheck c = domain::check_schedule(v.ctx, route, reqs, z, oracle, &out.timing);
  if (!c.ok()) {
    out.timing.clear();
    return out;
  }
  out.valid = true;
  out.cost = c.completion - v.ctx.origin.base;
  out.route = std::move(route);
  return out;
}

// Depth-first search over all precedence-respecting orders, cutting a prefix
// as soon as it breaks Z or cannot beat the incumbent.
class OrderSearch {
 public:
  OrderSearch(const VehicleSnapshot& v, std::vector<RouteStop> items, const RequestView& reqs, const ConstraintSet& z,
              const spcache::DistanceOracle& oracle)
      : v_(v), items_(std::move(items)), reqs_(reqs), z_(z) {
    const std::size_t n = items_.size();
    dep_.assign(n, kNone);
    for (std::size_t i = 0; i < n; ++i) {
      if (items_[i].pickup) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (items_[j].pickup && items_[j].request == items_[i].request) dep_[i] = j;
    }
    // Distances between the origin (index n) and item nodes.
    dist_.assign((n + 1) * (n + 1), 0);
    auto node_of = [&](std::size_t i) { return i == n ? v.ctx.origin.node : items_[i].node; };
    for (std::size_t a = 0; a <= n; ++a)
      for (std::size_t b = 0; b < n; ++b) dist_[a * (n + 1) + b] = oracle.dist(node_of(a), node_of(b));
    placed_.assign(n, 0);
    picked_.assign(n, 0);
    order_.reserve(n);
  }

  // Only orders whose first `locked` items keep their positions.
  std::optional<std::vector<RouteStop>> best(std::size_t locked) {
    locked_ = locked;
    dfs(items_.size(), v_.ctx.origin.base, v_.ctx.load);
    if (!found_) return std::nullopt;
    std::vector<RouteStop> out;
    for (std::size_t i : best_order_) out.push_back(items_[i]);
    return out;
  }

 private:
  void dfs(std::size_t cur, TimeMs t, int load) {
    const std::size_t n = items_.size();
    if (found_ && t >= best_time_) return;
    if (order_.size() == n) {
      found_ = true;
      best_time_ = t;
      best_order_ = order_;
      return;
    }
    const std::size_t depth = order_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (placed_[i]) continue;
      if (depth < locked_ && i != depth) continue;
      if (dep_[i] != kNone && !placed_[dep_[i]]) continue;
      const RouteStop& s = items_[i];
      const Millimeters d = dist_[cur * (n + 1) + i];
      if (d == kUnreachable) continue;
      const TimeMs leg = depth == 0 ? domain::first_leg_ms(v_.ctx.origin, d, v_.ctx.speed) : travel_ms(d, v_.ctx.speed);
      const TimeMs arr = t + leg;
      const Request& r = reqs_[s.request];
      if (s.walk > z_.d_w) continue;
      TimeMs dep = arr;
      int nl = load;
      if (s.pickup) {
        dep = std::max(arr, s.ready);
        if (dep - r.request_time > z_.t_wait) continue;
        nl += r.group;
        if (nl > v_.ctx.capacity) continue;
        picked_[i] = dep;
      } else {
        if (arr - r.request_time - r.direct_ms > z_.t_total) continue;
        if (z_.t_extra != kNoLimit) {
          const TimeMs picked = dep_[i] != kNone ? picked_[dep_[i]] : r.pickup_time.value_or(arr);
          if (arr - picked - r.direct_ms > z_.t_extra) continue;
        }
        nl -= r.group;
      }
      placed_[i] = 1;
      order_.push_back(i);
      dfs(i, dep, nl);
      order_.pop_back();
      placed_[i] = 0;
    }
  }

  const VehicleSnapshot& v_;
  std::vector<RouteStop> items_;
  const RequestView& reqs_;
  const ConstraintSet& z_;
  std::vector<std::size_t> dep_;
  std::vector<Millimeters> dist_;
  std::vector<char> placed_;
  std::vector<TimeMs> picked_;
  std::vector<std::size_t> order_;
  std::size_t locked_ = 0;
  bool found_ = false;
  TimeMs best_time_ = 0;
  std::vector<std::size_t> best_order_;
};

struct Options {
  std::vector<geo::MeetingPoint> pickup, dropoff;
};

// Option sets per stop of `order`: committed stops keep their node, new
// requests offer their meeting points.
std::vector<DagStop> dag_stops(std::span<const RouteStop> order, std::span<const RequestId> extra,
                               std::span<const Options> opts) {
  std::vector<DagStop> out;
  for (const RouteStop& s : order) {
    DagStop d{s.request, s.pickup, {}};
    const auto it = std::find(extra.begin(), extra.end(), s.request);
    if (it == extra.end()) {
      d.options.push_back({s.node, s.walk});
    } else {
      const Options& o = opts[static_cast<std::size_t>(it - extra.begin())];
      d.options = s.pickup ? o.pickup : o.dropoff;
    }
    out.push_back(std::move(d));
  }
  return out;
}

bool loads_fit(const VehicleSnapshot& v, std::span<const RouteStop> order, const RequestView& reqs) {
  int load = v.ctx.load;
  for (const RouteStop& s : order) {
    load += s.pickup ? reqs[s.request].group : -reqs[s.request].group;
    if (load > v.ctx.capacity) return false;
  }
  return true;
}

// Best meeting points for a fixed order; nullopt when no choice is valid.
std::optional<std::pair<TimeMs, std::vector<RouteStop>>> cost_order(const VehicleSnapshot& v,
                                                                   std::span<const RouteStop> order,
                                                                   std::span<const RequestId> extra,
                                                                   std::span<const Options> opts,
                                                                   const RequestView& reqs, const SchedulerContext& sc) {
  if (!loads_fit(v, order, reqs)) return std::nullopt;
  const std::vector<DagStop> stops = dag_stops(order, extra, opts);
  const RouteDag dag = build_route_dag(v.ctx, stops, *sc.oracle);
  const RouteOptimum best = find_optimal_route(dag, make_checker(dag, reqs, sc.z));
  if (!best.valid) return std::nullopt;
  std::vector<RouteStop> route(order.begin(), order.end());
  for (std::size_t j = 0; j < route.size(); ++j) {
    const geo::MeetingPoint& m = stops[j].options[best.chosen[j]];
    route[j].node = m.node;
    route[j].walk = m.walk;
    if (route[j].pickup) route[j].ready = reqs[route[j].request].request_time + sc.z.walk_ms(m.walk);
  }
  const domain::ScheduleCheck c = domain::check_schedule(v.ctx, route, reqs, sc.z, *sc.oracle);
  if (!c.ok()) return std::nullopt;
  return std::make_pair(c.completion, std::move(route));
}

std::vector<Options> meeting_options(std::span<const RequestId> extra, const RequestView& reqs,
                                     const SchedulerContext& sc) {
  std::vector<Options> out;
  for (RequestId id : extra) {
    const Request& r = reqs[id];
    Options o;
    if (sc.z.d_w > 0 && sc.meeting_points != nullptr) {
      stars::MeetingSets ms = stars::meeting_sets(r, sc);
      o.pickup = std::move(ms.pickup);
      o.dropoff = std::move(ms.dropoff);
    } else {
      o.pickup = {{r.origin, 0}};
      o.dropoff = {{r.destination, 0}};
    }
    out.push_back(std::move(o));
  }
  return out;
}

// Every precedence-respecting order (locked prefix kept) fed to `visit`.
template <class F>
void for_each_order(std::vector<RouteStop>& items, std::size_t locked, F&& visit) {
  const std::size_t n = items.size();
  std::vector<char> placed(n, 0);
  std::vector<RouteStop> order;
  auto rec = [&](auto&& self) -> void {
    if (order.size() == n) {
      visit(order);
      return;
    }
    const std::size_t depth = order.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (placed[i] || (depth < locked && i != depth)) continue;
      if (!items[i].pickup) {
        bool blocked = false;
        for (std::size_t j = 0; j < n; ++j)
          if (items[j].pickup && items[j].request == items[i].request && !placed[j]) blocked = true;
        if (blocked) continue;
      }
      placed[i] = 1;
      order.push_back(items[i]);
      self(self);
      order.pop_back();
      placed[i] = 0;
    }
  };
  rec(rec);
}

}  // namespace

TravelResult travel(const VehicleSnapshot& v, std::span<const RequestId> extra_in, const SchedulerContext& sc,
                    const TravelOptions& opts) {
  std::vector<RequestId> extra(extra_in.begin(), extra_in.end());
  std::sort(extra.begin(), extra.end());
  const RequestView reqs(*sc.requests);
  const ConstraintSet& z = sc.z;
  const bool exhaustive =
      opts.mode == TravelMode::Exhaustive && request_count(v.base, extra) <= opts.exhaustive_cap;

  if (!opts.meeting_points) {
    if (exhaustive) {
      std::vector<RouteStop> items(v.base.begin(), v.base.end());
      for (RequestId id : extra) {
        items.push_back(door_pickup(reqs[id]));
        items.push_back(door_dropoff(reqs[id]));
      }
      OrderSearch search(v, std::move(items), reqs, z, *sc.oracle);
      auto best = search.best(v.locked);
      if (!best) return {};
      return finalize(v, std::move(*best), reqs, z, *sc.oracle);
    }
    std::vector<RouteStop> route(v.base.begin(), v.base.end());
    if (!domain::check_schedule(v.ctx, route, reqs, z, *sc.oracle).ok()) return {};
    const domain::InsertionCost by_completion = [](const domain::ScheduleCheck& c, TimeMs, TimeMs) {
      return static_cast<double>(c.completion);
    };
    for (RequestId id : extra) {
      const RouteStop p = door_pickup(reqs[id]);
      const RouteStop d = door_dropoff(reqs[id]);
      const domain::Insertion ins = domain::best_insertion(v.ctx, route, v.locked, p, d, reqs, z, *sc.oracle, by_completion);
      if (!ins.feasible) return {};
      route = domain::with_insertion(route, ins, p, d);
    }
    return finalize(v, std::move(route), reqs, z, *sc.oracle);
  }

  const std::vector<Options> options = meeting_options(extra, reqs, sc);
  std::optional<std::pair<TimeMs, std::vector<RouteStop>>> best;
  auto consider = [&](std::span<const RouteStop> order) {
    auto r = cost_order(v, order, extra, options, reqs, sc);
    if (r && (!best || r->first < best->first)) best = std::move(r);
  };
  if (exhaustive) {
    std::vector<RouteStop> items(v.base.begin(), v.base.end());
    for (RequestId id : extra) {
      items.push_back(door_pickup(reqs[id]));
      items.push_back(door_dropoff(reqs[id]));
    }
    for_each_order(items, v.locked, consider);
    if (!best) return {};
    return finalize(v, std::move(best->second), reqs, z, *sc.oracle);
  }
  // Insertion: place each new request at its best position pair, with every
  // new stop placed so far free to move between its meeting points.
  std::vector<RouteStop> order(v.base.begin(), v.base.end());
  for (std::size_t q = 0; q < extra.size(); ++q) {
    const RouteStop p = door_pickup(reqs[extra[q]]);
    const RouteStop d = door_dropoff(reqs[extra[q]]);
    const std::span<const RequestId> placed(extra.data(), q + 1);
    best.reset();
    std::vector<RouteStop> best_order;
    for (std::size_t i = v.locked; i <= order.size(); ++i)
      for (std::size_t j = i + 1; j <= order.size() + 1; ++j) {
        domain::Insertion at;
        at.pickup_index = i;
        at.dropoff_index = j;
        std::vector<RouteStop> cand = domain::with_insertion(order, at, p, d);
        auto r = cost_order(v, cand, placed, options, reqs, sc);
        if (r && (!best || r->first < best->first)) {
          best = std::move(r);
          best_order = std::move(cand);
        }
      }
    if (!best) return {};
    order = std::move(best_order);
  }
  if (!best) {
    auto r = cost_order(v, order, {}, {}, reqs, sc);
    if (!r) return {};
    best = std::move(r);
  }
  return finalize(v, std::move(best->second), reqs, z, *sc.oracle);
}

}  // namespace poolsim::ilp
