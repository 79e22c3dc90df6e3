#include "poolsim/io/report.hpp"

#include <cstdio>
#include <iomanip>
#include <vector>

namespace poolsim::io {

std::optional<ReportFormat> parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "text") return ReportFormat::Text;
  return std::nullopt;
}

namespace {

struct Field {
  const char* name;
  double value;
};

std::vector<Field> summary_fields(const domain::MetricsReport& r) {
  std::vector<Field> f = {
      {"service_rate", r.service_rate},
      {"t_wait_s", r.mean_t_wait_s},
      {"t_extra_s", r.mean_t_extra_s},
      {"t_total_s", r.mean_t_total_s},
      {"vmt_miles_per_vehicle", r.mean_vmt_miles},
      {"d_hold_miles_per_vehicle", r.mean_d_hold_miles},
      {"occupancy", r.mean_occupancy},
      {"occupancy_all_time", r.mean_occupancy_all_time},
      {"w_pick_m", r.mean_w_pick_m},
      {"w_drop_m", r.mean_w_drop_m},
      {"w_total_m", r.mean_w_total_m},
      {"bph", r.bph},
      {"accumulated_cost_s", r.accumulated_cost_s},
  };
  if (r.mean_t_iteration_ms) f.push_back({"t_iteration_ms", *r.mean_t_iteration_ms});
  if (r.t_exe_s) f.push_back({"t_exe_s", *r.t_exe_s});
  return f;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

nlohmann::ordered_json report_json(const domain::MetricsReport& r, const ReportHeader& h) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["scenario"] = h.scenario;
  j["mode"] = h.mode;
  j["meeting_points"] = h.meeting_points;
  j["seed"] = h.seed;
  j["fleet_size"] = r.fleet_size;
  j["horizon_h"] = r.horizon_h;
  j["total_requests"] = r.total_requests;
  j["served"] = r.served;
  j["unserved"] = r.unserved;
  j["no_requests"] = r.no_requests;
  j["boardings"] = r.boardings;
  for (const Field& f : summary_fields(r)) j[f.name] = f.value;
  auto regions = nlohmann::ordered_json::array();
  for (const domain::RegionMetrics& m : r.regions) {
    nlohmann::ordered_json x;
    x["region"] = m.region;
    x["total_requests"] = m.total;
    x["served"] = m.served;
    x["service_rate"] = m.service_rate;
    x["t_wait_s"] = m.mean_t_wait_s;
    x["t_extra_s"] = m.mean_t_extra_s;
    x["t_total_s"] = m.mean_t_total_s;
    x["w_total_m"] = m.mean_w_total_m;
    regions.push_back(std::move(x));
  }
  j["regions"] = std::move(regions);
  return j;
}

void emit_report(std::ostream& out, const domain::MetricsReport& r, ReportFormat f, const ReportHeader& h) {
  switch (f) {
    case ReportFormat::Json:
      out << report_json(r, h).dump(2) << '\n';
      return;
    case ReportFormat::Csv: {
      out << "scope,region,total_requests,served,service_rate,t_wait_s,t_extra_s,t_total_s,w_total_m\n";
      out << "summary,," << r.total_requests << ',' << r.served << ',' << fmt(r.service_rate) << ','
          << fmt(r.mean_t_wait_s) << ',' << fmt(r.mean_t_extra_s) << ',' << fmt(r.mean_t_total_s) << ','
          << fmt(r.mean_w_total_m) << '\n';
      for (const domain::RegionMetrics& m : r.regions)
        out << "region," << m.region << ',' << m.total << ',' << m.served << ',' << fmt(m.service_rate) << ','
            << fmt(m.mean_t_wait_s) << ',' << fmt(m.mean_t_extra_s) << ',' << fmt(m.mean_t_total_s) << ','
            << fmt(m.mean_w_total_m) << '\n';
      return;
    }
    case ReportFormat::Text: {
      auto line = [&](const std::string& k, const std::string& v) {
        out << std::left << std::setw(26) << k << v << '\n';
      };
      if (!h.scenario.empty()) line("scenario", h.scenario);
      if (!h.mode.empty()) line("mode", h.mode + (h.meeting_points ? " (meeting points)" : ""));
      line("fleet_size", std::to_string(r.fleet_size));
      line("total_requests", std::to_string(r.total_requests));
      line("served", std::to_string(r.served));
      line("unserved", std::to_string(r.unserved));
      for (const Field& x : summary_fields(r)) line(x.name, fmt(x.value));
      for (const domain::RegionMetrics& m : r.regions)
        line("region " + std::to_string(m.region),
             "service_rate " + fmt(m.service_rate) + ", t_wait_s " + fmt(m.mean_t_wait_s) + ", requests " +
                 std::to_string(m.total));
      return;
    }
  }
}

}  // namespace poolsim::io
