#include "poolsim/domain/metrics.hpp"

namespace poolsim::domain {

void MetricsAccumulator::accumulate(const MetricsEvent& e) {
  using K = MetricsEvent::Kind;
  if (e.kind == K::Requested) {
    auto [it, fresh] = records_.emplace(e.request, Record{});
    if (!fresh) throw MetricsError("request " + std::to_string(e.request) + " registered twice");
    it->second.request_time = e.request_time;
    it->second.direct_ms = e.direct_ms;
    it->second.region = e.region;
    return;
  }
  auto it = records_.find(e.request);
  if (it == records_.end()) throw MetricsError("event for unknown request " + std::to_string(e.request));
  Record& r = it->second;
  switch (e.kind) {
    case K::PickedUp:
      if (r.pickup || r.unserved) throw MetricsError("duplicate pickup for request " + std::to_string(e.request));
      r.pickup = e.time;
      r.walk_pick = e.walk_mm;
      break;
    case K::DroppedOff:
      if (!r.pickup) throw MetricsError("dropoff without pickup for request " + std::to_string(e.request));
      if (r.dropoff) throw MetricsError("duplicate dropoff for request " + std::to_string(e.request));
      if (e.time < *r.pickup) throw MetricsError("dropoff before pickup for request " + std::to_string(e.request));
      r.dropoff = e.time;
      r.walk_drop = e.walk_mm;
      break;
    case K::Unserved:
      if (r.pickup) throw MetricsError("picked-up request " + std::to_string(e.request) + " marked unserved");
      r.unserved = true;
      break;
    case K::Requested: break;
  }
}

void MetricsAccumulator::add_vehicle(const VehicleTotals& v, MmPerSecond speed) {
  vmt_m_ += mm_to_meters(v.odometer);
  hold_m_ += ms_to_seconds(v.hold_ms) * speed / 1000.0;
  occ_area_ += static_cast<double>(v.occupancy_area);
  occ_time_ += static_cast<double>(v.occupied_ms);
  boardings_ += v.boardings;
}

MetricsReport MetricsAccumulator::finalize(std::uint64_t fleet_size, TimeMs horizon) const {
  MetricsReport m;
  m.fleet_size = fleet_size;
  m.horizon_h = ms_to_seconds(horizon) / 3600.0;
  m.total_requests = records_.size();
  struct Sums {
    std::uint64_t total = 0, served = 0;
    double wait = 0, extra = 0, walk_pick = 0, walk_drop = 0;
  };
  Sums all;
  std::map<std::uint32_t, Sums> by_region;
  for (const auto& [id, r] : records_) {
    Sums& reg = by_region[r.region];
    ++all.total;
    ++reg.total;
    if (!r.dropoff) continue;
    const double wait = ms_to_seconds(*r.pickup - r.request_time + c_run_);
    const double extra = ms_to_seconds(*r.dropoff - *r.pickup - r.direct_ms);
    for (Sums* s : {&all, &reg}) {
      ++s->served;
      s->wait += wait;
      s->extra += extra;
      s->walk_pick += mm_to_meters(r.walk_pick);
      s->walk_drop += mm_to_meters(r.walk_drop);
    }
  }
  m.served = all.served;
  m.unserved = all.total - all.served;
  m.no_requests = all.total == 0;
  m.service_rate = all.total ? static_cast<double>(all.served) / static_cast<double>(all.total) : 1.0;
  if (all.served) {
    const double n = static_cast<double>(all.served);
    m.mean_t_wait_s = all.wait / n;
    m.mean_t_extra_s = all.extra / n;
    m.mean_t_total_s = m.mean_t_wait_s + m.mean_t_extra_s;
    m.mean_w_pick_m = all.walk_pick / n;
    m.mean_w_drop_m = all.walk_drop / n;
    m.mean_w_total_m = m.mean_w_pick_m + m.mean_w_drop_m;
  }
  if (fleet_size) {
    const double f = static_cast<double>(fleet_size);
    m.mean_vmt_miles = vmt_m_ / f / kMetersPerMile;
    m.mean_d_hold_miles = hold_m_ / f / kMetersPerMile;
    if (horizon > 0) m.mean_occupancy_all_time = occ_area_ / (f * static_cast<double>(horizon));
  }
  m.boardings = boardings_;
  if (horizon > 0) m.bph = static_cast<double>(boardings_) / m.horizon_h;
  m.mean_occupancy = occ_time_ > 0 ? occ_area_ / occ_time_ : 0.0;
  m.accumulated_cost_s = cost_s_;
  for (const auto& [region, s] : by_region) {
    RegionMetrics rm;
    rm.region = region;
    rm.total = s.total;
    rm.served = s.served;
    rm.service_rate = s.total ? static_cast<double>(s.served) / static_cast<double>(s.total) : 1.0;
    if (s.served) {
      const double n = static_cast<double>(s.served);
      rm.mean_t_wait_s = s.wait / n;
      rm.mean_t_extra_s = s.extra / n;
      rm.mean_t_total_s = rm.mean_t_wait_s + rm.mean_t_extra_s;
      rm.mean_w_total_m = (s.walk_pick + s.walk_drop) / n;
    }
    m.regions.push_back(rm);
  }
  return m;
}

}  // namespace poolsim::domain
