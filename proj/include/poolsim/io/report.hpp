#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "poolsim/domain/metrics.hpp"
#include <json.hpp>

namespace poolsim::io {

enum class ReportFormat { Json, Csv, Text };
std::optional<ReportFormat> parse_format(const std::string& s);

/// Run metadata printed alongside the metrics.
struct ReportHeader {
  std::string scenario;
  std::string mode;
  bool meeting_points = false;
  std::uint64_t seed = 0;
};

nlohmann::ordered_json report_json(const domain::MetricsReport& r, const ReportHeader& h = {});

/// JSON object, CSV with one summary row plus one row per region, or an
/// aligned name/value listing.
void emit_report(std::ostream& out, const domain::MetricsReport& r, ReportFormat f, const ReportHeader& h = {});

}  // namespace poolsim::io
