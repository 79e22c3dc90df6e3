#include "poolsim/io/trips.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

namespace poolsim::io {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

template <class T>
std::optional<T> number(const std::string& s) {
  T v{};
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) return std::nullopt;
  return v;
}

struct Box {
  double lat_lo, lat_hi, lon_lo, lon_hi;
  bool contains(const geo::LatLon& p) const {
    return p.lat >= lat_lo && p.lat <= lat_hi && p.lon >= lon_lo && p.lon <= lon_hi;
  }
};

Box bounding_box(const geo::RoadNetwork& net, double margin_m) {
  Box b{90, -90, 180, -180};
  for (const geo::LatLon& c : net.coords()) {
    b.lat_lo = std::min(b.lat_lo, c.lat);
    b.lat_hi = std::max(b.lat_hi, c.lat);
    b.lon_lo = std::min(b.lon_lo, c.lon);
    b.lon_hi = std::max(b.lon_hi, c.lon);
  }
  const double dlat = margin_m / geo::kEarthRadiusMeters * 180.0 / std::numbers::pi;
  const double mid = (b.lat_lo + b.lat_hi) / 2 * std::numbers::pi / 180.0;
  const double dlon = dlat / std::max(1e-9, std::cos(mid));
  return {b.lat_lo - dlat, b.lat_hi + dlat, b.lon_lo - dlon, b.lon_hi + dlon};
}

}  // namespace

std::optional<std::int64_t> parse_timestamp(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || (s[10] != ' ' && s[10] != 'T') || s[13] != ':' || s[16] != ':')
    return std::nullopt;
  auto field = [&](std::size_t at, std::size_t len) { return number<int>(s.substr(at, len)); };
  const auto y = field(0, 4), mo = field(5, 2), d = field(8, 2), h = field(11, 2), mi = field(14, 2), se = field(17, 2);
  if (!y || !mo || !d || !h || !mi || !se) return std::nullopt;
  using namespace std::chrono;
  const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *h > 23 || *mi > 59 || *se > 60) return std::nullopt;
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + *h * 3600 + *mi * 60 + *se;
}

IngestResult ingest_csv(std::istream& in, const geo::RoadNetwork& net, const IngestOptions& opts) {
  IngestResult res;
  std::string line;
  if (!std::getline(in, line)) throw IngestError("empty trip file");
  const std::vector<std::string> header = split(line);
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw IngestError("unknown column layout: no '" + name + "' column");
    return static_cast<std::size_t>(it - header.begin());
  };
  const ColumnMap& cm = opts.columns;
  const std::size_t c_pt = column(cm.pickup_time), c_dt = column(cm.dropoff_time), c_plat = column(cm.pickup_lat),
                    c_plon = column(cm.pickup_lon), c_dlat = column(cm.dropoff_lat), c_dlon = column(cm.dropoff_lon),
                    c_pass = column(cm.passengers);
  const std::size_t need = std::max({c_pt, c_dt, c_plat, c_plon, c_dlat, c_dlon, c_pass}) + 1;
  for (const char* reason : {kDropMalformed, kDropInconsistentTime, kDropOutOfRegion, kDropEqualSnap, kDropBeforeStart})
    res.dropped[reason] = 0;

  const Box box = bounding_box(net, opts.bbox_margin_m);
  struct Kept {
    TripRecord rec;
    NodeId o, d;
    std::size_t row;
  };
  std::vector<Kept> kept;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++res.rows;
    const std::vector<std::string> f = split(line);
    TripRecord rec;
    const auto pt = f.size() >= need ? parse_timestamp(f[c_pt]) : std::nullopt;
    const auto dt = f.size() >= need ? parse_timestamp(f[c_dt]) : std::nullopt;
    const auto plat = f.size() >= need ? number<double>(f[c_plat]) : std::nullopt;
    const auto plon = f.size() >= need ? number<double>(f[c_plon]) : std::nullopt;
    const auto dlat = f.size() >= need ? number<double>(f[c_dlat]) : std::nullopt;
    const auto dlon = f.size() >= need ? number<double>(f[c_dlon]) : std::nullopt;
    const auto pass = f.size() >= need ? number<int>(f[c_pass]) : std::nullopt;
    if (!pt || !dt || !plat || !plon || !dlat || !dlon || !pass || *pass < 1) {
      ++res.dropped[kDropMalformed];
      continue;
    }
    rec = TripRecord{*pt, *dt, {*plat, *plon}, {*dlat, *dlon}, opts.clamp_group ? 1 : *pass};
    if (rec.pickup_s >= rec.dropoff_s) {
      ++res.dropped[kDropInconsistentTime];
      continue;
    }
    if (!box.contains(rec.pickup) || !box.contains(rec.dropoff)) {
      ++res.dropped[kDropOutOfRegion];
      continue;
    }
    const NodeId o = geo::snap_to_node(rec.pickup, net);
    const NodeId d = geo::snap_to_node(rec.dropoff, net);
    if (o == d) {
      ++res.dropped[kDropEqualSnap];
      continue;
    }
    kept.push_back({rec, o, d, res.rows});
  }

  if (opts.start) {
    const auto s = parse_timestamp(*opts.start);
    if (!s) throw IngestError("bad start timestamp '" + *opts.start + "'");
    res.time_origin_s = *s;
  } else if (!kept.empty()) {
    std::int64_t first = std::numeric_limits<std::int64_t>::max();
    for (const Kept& k : kept) first = std::min(first, k.rec.pickup_s);
    res.time_origin_s = first - ((first % 86400) + 86400) % 86400;
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Kept& a, const Kept& b) { return a.rec.pickup_s < b.rec.pickup_s; });
  for (const Kept& k : kept) {
    if (k.rec.pickup_s < res.time_origin_s) {
      ++res.dropped[kDropBeforeStart];
      continue;
    }
    res.requests.push_back(domain::make_request(static_cast<RequestId>(res.requests.size()), k.o, k.d,
                                                seconds_to_ms(static_cast<double>(k.rec.pickup_s - res.time_origin_s)),
                                                k.rec.passengers));
  }
  return res;
}

IngestResult ingest_csv_file(const std::string& path, const geo::RoadNetwork& net, const IngestOptions& opts) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot read trip file '" + path + "'");
  return ingest_csv(in, net, opts);
}

}  // namespace poolsim::io
