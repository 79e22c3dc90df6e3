#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <set>

#include <unistd.h>

#include "fixtures.hpp"
#include "poolsim/cli/cli.hpp"
#include "poolsim/io/demand.hpp"
#include "poolsim/io/report.hpp"
#include "poolsim/io/scenario_config.hpp"
#include "poolsim/io/trips.hpp"

using namespace poolsim;
using namespace poolsim::io;
namespace fs = std::filesystem;

namespace {

std::string coord(double x) {
  std::ostringstream o;
  o << std::setprecision(17) << x;
  return o.str();
}

std::string row(const std::string& pickup, const std::string& dropoff, const geo::LatLon& a, const geo::LatLon& b,
                int passengers = 1) {
  return "CMT,1,N," + pickup + "," + dropoff + "," + std::to_string(passengers) + ",400,1.2," + coord(a.lon) + "," +
         coord(a.lat) + "," + coord(b.lon) + "," + coord(b.lat) + "\n";
}

const char* kHeader =
    "medallion,rate_code,store_and_fwd_flag,pickup_datetime,dropoff_datetime,passenger_count,trip_time_in_secs,"
    "trip_distance,pickup_longitude,pickup_latitude,dropoff_longitude,dropoff_latitude\n";

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("poolsim_test_" + std::to_string(::getpid()) + "_" + std::to_string(count_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content = {}) const {
    const fs::path p = path_ / name;
    if (!content.empty()) std::ofstream(p) << content;
    return p.string();
  }
  std::string dir() const { return path_.string(); }

 private:
  static inline int count_ = 0;
  fs::path path_;
};

struct CliResult {
  int code;
  std::string out, err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "poolsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const char* kSmallScenario = R"(version = 1
name = tiny

[network]
source = grid:6x6:200
regions = quadrants

[fleet]
size = 4
seed = 3

[constraints]
t_wait_s = 240
t_total_s = 480
delta_s = 30

[scheduler]
mode = greedy

[demand]
horizon_s = 900
seed = 5
rate_per_hour = 120

[output]
split_regions = true
)";

}  // namespace

TEST_CASE("trip CSV ingestion") {
  const geo::RoadNetwork net = testing::grid(5, 5, 200);
  const auto& c = net.coords();

  SUBCASE("dropoff before pickup") {
    std::istringstream in(std::string(kHeader) +
                          row("2013-01-01 10:05:00", "2013-01-01 10:00:00", c[0], c[24]));
    const IngestResult r = ingest_csv(in, net);
    CHECK(r.requests.empty());
    CHECK(r.dropped.at(kDropInconsistentTime) == 1);
  }
  SUBCASE("outside the bounding box") {
    std::istringstream in(std::string(kHeader) + row("2013-01-01 10:00:00", "2013-01-01 10:05:00",
                                                     testing::offset(c[0], -500, 0), c[24]));
    const IngestResult r = ingest_csv(in, net);
    CHECK(r.requests.empty());
    CHECK(r.dropped.at(kDropOutOfRegion) == 1);
  }
  SUBCASE("ten rows with two bad ones") {
    std::string csv = kHeader;
    // Pickup minute per row; rows arrive out of order.
    const int minute[10] = {30, 5, 45, 10, 0, 55, 20, 15, 40, 25};
    for (int i = 0; i < 10; ++i) {
      char p[32], d[32];
      std::snprintf(p, sizeof p, "2013-01-01 08:%02d:00", minute[i]);
      std::snprintf(d, sizeof d, "2013-01-01 09:%02d:00", minute[i]);
      if (i == 3) csv += row(d, p, c[i], c[24 - i]);
      else if (i == 6) csv += row(p, d, testing::offset(c[0], 0, -900), c[3]);
      else csv += row(p, d, c[i], c[24 - i], 1 + i % 3);
    }
    std::istringstream in(csv);
    const IngestResult r = ingest_csv(in, net);
    CHECK(r.rows == 10);
    REQUIRE(r.requests.size() == 8);
    std::size_t dropped = 0;
    for (const auto& [reason, n] : r.dropped) dropped += n;
    CHECK(r.requests.size() + dropped == r.rows);
    CHECK(r.dropped.at(kDropInconsistentTime) == 1);
    CHECK(r.dropped.at(kDropOutOfRegion) == 1);
    const std::vector<int> kept_minutes{0, 5, 15, 25, 30, 40, 45, 55};
    for (std::size_t k = 0; k < 8; ++k) {
      CHECK(r.requests[k].id == k);
      CHECK(r.requests[k].request_time == seconds_to_ms(8 * 3600 + 60 * kept_minutes[k]));
    }
    // Minute 0 is row 4: origin node 4, destination node 20, group 2.
    CHECK(r.requests[0].origin == 4);
    CHECK(r.requests[0].destination == 20);
    CHECK(r.requests[0].group == 2);

    IngestOptions clamp;
    clamp.clamp_group = true;
    clamp.start = "2013-01-01 08:00:00";
    std::istringstream again(csv);
    const IngestResult rc = ingest_csv(again, net, clamp);
    CHECK(rc.requests.size() == 8);
    for (const auto& q : rc.requests) CHECK(q.group == 1);
    CHECK(rc.requests[0].request_time == 0);
  }
  SUBCASE("identical input gives identical requests") {
    std::string csv = kHeader;
    for (int i = 0; i < 6; ++i) csv += row("2013-01-01 08:1" + std::to_string(i) + ":00", "2013-01-01 09:00:00", c[i], c[i + 10]);
    std::istringstream a(csv), b(csv);
    const IngestResult x = ingest_csv(a, net), y = ingest_csv(b, net);
    REQUIRE(x.requests.size() == y.requests.size());
    for (std::size_t i = 0; i < x.requests.size(); ++i) {
      CHECK(x.requests[i].origin == y.requests[i].origin);
      CHECK(x.requests[i].destination == y.requests[i].destination);
      CHECK(x.requests[i].request_time == y.requests[i].request_time);
    }
  }
  SUBCASE("equal snaps, malformed rows and early rows") {
    std::string csv = kHeader;
    csv += row("2013-01-01 08:00:00", "2013-01-01 08:10:00", c[7], testing::offset(c[7], 10, 10));
    csv += "CMT,1,N,yesterday,2013-01-01 08:10:00,1,400,1.2,0,0,0,0\n";
    csv += "CMT,1,N\n";
    csv += row("2012-12-31 23:00:00", "2013-01-01 00:10:00", c[1], c[2]);
    csv += row("2013-01-01 08:00:00", "2013-01-01 08:10:00", c[1], c[2]);
    IngestOptions o;
    o.start = "2013-01-01 00:00:00";
    std::istringstream in(csv);
    const IngestResult r = ingest_csv(in, net, o);
    CHECK(r.rows == 5);
    CHECK(r.requests.size() == 1);
    CHECK(r.dropped.at(kDropEqualSnap) == 1);
    CHECK(r.dropped.at(kDropMalformed) == 2);
    CHECK(r.dropped.at(kDropBeforeStart) == 1);
  }
  SUBCASE("unknown layouts and unreadable files") {
    std::istringstream in("a,b,c\n1,2,3\n");
    CHECK_THROWS_AS(ingest_csv(in, net), IngestError);
    CHECK_THROWS_AS(ingest_csv_file("/nonexistent/trips.csv", net), IngestError);
  }
  SUBCASE("timestamps") {
    CHECK(parse_timestamp("1970-01-01 00:00:00") == 0);
    CHECK(parse_timestamp("2013-01-01T00:00:01") == 1356998401);
    CHECK_FALSE(parse_timestamp("2013-02-30 00:00:00"));
    CHECK_FALSE(parse_timestamp("2013-01-01"));
  }
}

TEST_CASE("synthetic demand") {
  const geo::RoadNetwork net = testing::grid(6, 6, 200);
  SUBCASE("Poisson counts over thirty seeds") {
    DemandSpec d;
    d.rate_per_hour = {100.0};
    d.horizon = seconds_to_ms(10 * 3600);
    double sum = 0.0;
    const int seeds = 30;
    for (int s = 0; s < seeds; ++s) {
      d.seed = 500 + static_cast<std::uint64_t>(s);
      sum += static_cast<double>(generate_demand(net, d).size());
    }
    const double mean = sum / seeds;
    const double sigma = std::sqrt(1000.0 / seeds);
    CHECK(std::abs(mean - 1000.0) <= 3.0 * sigma);
  }
  SUBCASE("zero rate") {
    DemandSpec d;
    d.rate_per_hour = {0.0};
    CHECK(generate_demand(net, d).empty());
  }
  SUBCASE("fixed seed twice") {
    DemandSpec d;
    d.seed = 42;
    const auto a = generate_demand(net, d), b = generate_demand(net, d);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].origin == b[i].origin);
      CHECK(a[i].destination == b[i].destination);
      CHECK(a[i].request_time == b[i].request_time);
    }
  }
  SUBCASE("requests are ordered, in range and never loops") {
    DemandSpec d;
    d.rate_per_hour = {0.0, 300.0};
    d.horizon = seconds_to_ms(7200);
    const auto a = generate_demand(net, d);
    REQUIRE_FALSE(a.empty());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].id == i);
      CHECK(a[i].request_time >= seconds_to_ms(3600));
      CHECK(a[i].request_time < d.horizon);
      CHECK(a[i].origin != a[i].destination);
      if (i) CHECK(a[i - 1].request_time <= a[i].request_time);
    }
  }
  SUBCASE("clustered origins concentrate near their center") {
    DemandSpec d;
    d.rate_per_hour = {2000.0};
    d.origins = Spatial::Clustered;
    d.clusters = {Cluster{0, 100.0, 1.0}};
    const auto a = generate_demand(net, d);
    REQUIRE(a.size() > 500);
    std::size_t near = 0;
    for (const auto& r : a)
      if (geo::haversine(net.coord(r.origin), net.coord(0)) < 450.0) ++near;
    CHECK(static_cast<double>(near) > 0.95 * static_cast<double>(a.size()));
  }
}

TEST_CASE("report emission") {
  domain::MetricsReport r;
  r.total_requests = 10;
  r.served = 7;
  r.unserved = 3;
  r.service_rate = 0.7;
  r.mean_t_wait_s = 61.5;
  r.mean_vmt_miles = 12.25;
  r.bph = 3.5;
  r.fleet_size = 2;
  r.horizon_h = 1.0;
  r.mean_t_iteration_ms = 0.25;
  r.t_exe_s = 1.5;
  r.regions = {domain::RegionMetrics{0, 6, 5, 5.0 / 6, 50, 10, 60, 0}, domain::RegionMetrics{1, 4, 2, 0.5, 70, 5, 75, 0}};
  const ReportHeader h{"fixture", "greedy", true, 9};

  SUBCASE("json round trip") {
    std::ostringstream out;
    emit_report(out, r, ReportFormat::Json, h);
    const nlohmann::json j = nlohmann::json::parse(out.str());
    const nlohmann::json expected = report_json(r, h);
    CHECK(j == expected);
    for (const char* key : {"service_rate", "t_wait_s", "t_extra_s", "t_total_s", "vmt_miles_per_vehicle",
                            "d_hold_miles_per_vehicle", "occupancy", "w_pick_m", "w_drop_m", "w_total_m",
                            "t_iteration_ms", "t_exe_s", "bph"}) {
      CAPTURE(key);
      REQUIRE(j.contains(key));
      CHECK(j[key].is_number());
    }
    CHECK(j["served"].get<int>() == 7);
    CHECK(j["regions"].size() == 2);
    CHECK(j["vmt_miles_per_vehicle"].get<double>() == 12.25);
  }
  SUBCASE("text lists every metric") {
    std::ostringstream out;
    emit_report(out, r, ReportFormat::Text, h);
    for (const char* key : {"service_rate", "t_wait_s", "t_extra_s", "t_total_s", "vmt_miles_per_vehicle",
                            "d_hold_miles_per_vehicle", "occupancy", "w_pick_m", "w_drop_m", "w_total_m",
                            "t_iteration_ms", "t_exe_s", "bph"}) {
      CAPTURE(key);
      CHECK(out.str().find(key) != std::string::npos);
    }
  }
  SUBCASE("csv has a summary row and one row per region") {
    std::ostringstream out;
    emit_report(out, r, ReportFormat::Csv, h);
    std::istringstream in(out.str());
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    REQUIRE(lines.size() == 1 + 1 + 2);
    CHECK(lines[1].rfind("summary,", 0) == 0);
    CHECK(lines[2].rfind("region,0,", 0) == 0);
    CHECK(lines[3].rfind("region,1,", 0) == 0);
  }
  SUBCASE("format names") {
    CHECK(parse_format("json") == ReportFormat::Json);
    CHECK(parse_format("csv") == ReportFormat::Csv);
    CHECK(parse_format("text") == ReportFormat::Text);
    CHECK_FALSE(parse_format("xml"));
  }
}

TEST_CASE("scenario files") {
  SUBCASE("a complete scenario") {
    std::istringstream in(kSmallScenario);
    const ScenarioConfig c = parse_scenario(in);
    CHECK(c.name == "tiny");
    CHECK(c.network == "grid:6x6:200");
    CHECK(c.fleet.size == 4);
    CHECK(c.z.t_wait == seconds_to_ms(240));
    CHECK(c.z.d_w == 0);
    CHECK(c.horizon == seconds_to_ms(900));
    CHECK(c.synthetic.horizon == c.horizon);
    CHECK(c.split_regions);
  }
  SUBCASE("meeting points turn the walking radius on") {
    std::istringstream in(std::string(kSmallScenario) + "[scheduler]\nmeeting_points = true\n");
    CHECK(parse_scenario(in).z.d_w == meters_to_mm(300));
  }
  auto fails = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_scenario(in), ConfigError);
  };
  SUBCASE("errors") {
    fails("name = x\n");
    fails("version = 2\n");
    fails("version = 1\nnot_a_key = 3\n");
    fails("version = 1\n[fleet]\nsize = many\n");
    fails("version = 1\n[scheduler]\nmode = fastest\n");
    fails("version = 1\n[constraints]\nt_wait_s = -5\n");
    fails("version = 1\n[scheduler]\nmeeting_points = perhaps\n");
  }
  SUBCASE("grid and region specs") {
    const auto g = parse_grid_spec("grid:3x4:150");
    REQUIRE(g);
    CHECK(g->rows == 3);
    CHECK(g->cols == 4);
    CHECK(g->spacing_m == 150.0);
    CHECK_FALSE(parse_grid_spec("roads.txt"));
    const auto q = load_regions_spec("quadrants", "grid:6x6", 36);
    CHECK(std::set<std::uint32_t>(q.begin(), q.end()).size() == 4);
    const auto b = load_regions_spec("blocks:2x3", "grid:6x6", 36);
    CHECK(std::set<std::uint32_t>(b.begin(), b.end()).size() == 6);
    const auto s = load_regions_spec("single", "grid:6x6", 36);
    CHECK(std::all_of(s.begin(), s.end(), [](std::uint32_t r) { return r == 0; }));
    CHECK_THROWS_AS(load_regions_spec("quadrants", "roads.txt", 36), ConfigError);
  }
  SUBCASE("materialized scenarios run") {
    std::istringstream in(kSmallScenario);
    const auto loaded = materialize(parse_scenario(in));
    CHECK(loaded->network.node_count() == 36);
    CHECK(loaded->scenario.region_map.size() == 36);
    const sim::RunResult r = sim::run(loaded->scenario);
    CHECK(r.audit.violations() == 0);
    CHECK(r.report.regions.size() == 4);
  }
}

TEST_CASE("command line") {
  TempDir tmp;
  const std::string cfg = tmp.file("tiny.cfg", kSmallScenario);

  SUBCASE("run writes a parseable report") {
    const CliResult r = invoke({"run", cfg, "--format", "json"});
    REQUIRE(r.code == cli::kExitOk);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["scenario"] == "tiny");
    CHECK(j["fleet_size"] == 4);
  }
  SUBCASE("overrides") {
    const std::string report = tmp.file("out.csv");
    const CliResult r = invoke({"run", cfg, "--mode", "batch-w", "--meeting-points", "--fleet", "3", "--seed", "8",
                             "--report", report, "--format", "csv"});
    REQUIRE(r.code == cli::kExitOk);
    std::ifstream f(report);
    std::string header, summary;
    std::getline(f, header);
    std::getline(f, summary);
    CHECK(summary.rfind("summary,", 0) == 0);
  }
  SUBCASE("configuration errors exit with 2") {
    CHECK(invoke({}).code == cli::kExitConfig);
    CHECK(invoke({"fly"}).code == cli::kExitConfig);
    CHECK(invoke({"run", cfg, "--mode", "fastest"}).code == cli::kExitConfig);
    CHECK(invoke({"run", tmp.file("bad.cfg", "version = 1\nbogus = 1\n")}).code == cli::kExitConfig);
    CHECK(invoke({"run", cfg, "--format", "xml"}).code == cli::kExitConfig);
  }
  SUBCASE("data errors exit with 3") {
    CHECK(invoke({"run", tmp.dir() + "/missing.cfg"}).code == cli::kExitData);
    CHECK(invoke({"run", tmp.file("net.cfg", "version = 1\n[network]\nsource = missing_network.txt\n")}).code ==
          cli::kExitData);
    CHECK(invoke({"validate", tmp.dir() + "/missing.txt"}).code == cli::kExitData);
    CHECK(invoke({"validate", tmp.file("junk.txt", "nodes 2 edges 1\nnode 0 0 0\n")}).code == cli::kExitData);
  }
  SUBCASE("cache build and validation") {
    const std::string cache = tmp.file("grid.spc");
    const CliResult b = invoke({"build-cache", "grid:6x6:200", "--regions", "quadrants", "--L", "2", "-o", cache});
    REQUIRE(b.code == cli::kExitOk);
    CHECK(b.out.find("partitions") != std::string::npos);
    const CliResult v = invoke({"validate", cache, "--network", "grid:6x6:200"});
    CHECK(v.code == cli::kExitOk);
    CHECK(v.out.rfind("cache ok", 0) == 0);
    CHECK(invoke({"validate", cache, "--network", "grid:5x5:200"}).code == cli::kExitData);
    {
      std::ifstream in(cache, std::ios::binary);
      std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      bytes.resize(bytes.size() / 2);
      std::ofstream(cache, std::ios::binary | std::ios::trunc) << bytes;
    }
    CHECK(invoke({"validate", cache}).code == cli::kExitData);
  }
  SUBCASE("network and csv validation") {
    CHECK(invoke({"validate", "grid:4x4"}).code == cli::kExitOk);
    const geo::RoadNetwork net = testing::grid(4, 4, 200);
    std::ostringstream txt;
    geo::write_network(txt, net);
    const std::string path = tmp.file("net.txt", txt.str());
    const CliResult v = invoke({"validate", path});
    CHECK(v.code == cli::kExitOk);
    CHECK(v.out.find("16 nodes") != std::string::npos);
    const std::string csv =
        tmp.file("trips.csv", std::string(kHeader) + row("2013-01-01 08:00:00", "2013-01-01 08:10:00",
                                                         net.coord(0), net.coord(15)));
    CHECK(invoke({"validate", csv}).code == cli::kExitConfig);
    const CliResult c = invoke({"validate", csv, "--network", path});
    CHECK(c.code == cli::kExitOk);
    CHECK(c.out.find("1 kept") != std::string::npos);
  }
}
