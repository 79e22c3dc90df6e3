#include "poolsim/cli/cli.hpp"

#include <CLI11.hpp>
#include <cstring>
#include <fstream>
#include <sstream>

#include "poolsim/io/report.hpp"
#include "poolsim/io/scenario_config.hpp"
#include "poolsim/spcache/serialize.hpp"

namespace poolsim::cli {

namespace {

struct BuildCacheArgs {
  std::string network;
  std::string regions = "single";
  unsigned L = 2;
  std::string output;
};

struct RunArgs {
  std::string scenario;
  std::string mode;
  bool meeting_points = false;
  std::size_t fleet = 0;
  std::optional<std::uint64_t> seed;
  std::string report;
  std::string format = "json";
};

struct ValidateArgs {
  std::string path;
  std::string network;
};

int build_cache_cmd(const BuildCacheArgs& a, std::ostream& out) {
  const geo::RoadNetwork net = io::load_network_spec(a.network);
  const auto regions = io::load_regions_spec(a.regions, a.network, net.node_count());
  if (a.L < 1) throw io::ConfigError("--L must be at least 1");
  spcache::BuildOptions bo;
  bo.L = a.L;
  const spcache::DistanceCache cache = spcache::build_cache(net, regions, bo);
  spcache::write_cache_file(a.output, cache);
  const spcache::CacheStats st = cache.stats();
  out << "wrote " << a.output << "\n"
      << "nodes " << st.node_count << "\n"
      << "partitions " << cache.partitions().size() << "\n"
      << "L " << cache.L() << "\n"
      << "stored_entries " << st.stored_entries << "\n"
      << "compression_ratio " << st.compression_ratio() << "\n"
      << "mean_cover " << st.mean_cover_size << "\n";
  return kExitOk;
}

int run_cmd(const RunArgs& a, std::ostream& out, std::ostream& err) {
  io::ScenarioConfig cfg = io::load_scenario_file(a.scenario);
  if (!a.mode.empty()) {
    const auto m = sim::parse_mode(a.mode);
    if (!m) throw io::ConfigError("unknown mode '" + a.mode + "'");
    cfg.mode = *m;
  }
  if (a.meeting_points) cfg.meeting_points = true;
  cfg.z.d_w = cfg.meeting_points ? meters_to_mm(cfg.d_w_m) : 0;
  if (a.fleet > 0) cfg.fleet.size = a.fleet;
  if (a.seed) {
    cfg.fleet.seed = *a.seed;
    cfg.synthetic.seed = *a.seed;
  }
  const auto format = io::parse_format(a.format);
  if (!format) throw io::ConfigError("unknown format '" + a.format + "'");

  const auto loaded = io::materialize(cfg);
  if (loaded->ingest) {
    err << "ingested " << loaded->ingest->requests.size() << " of " << loaded->ingest->rows << " rows";
    for (const auto& [reason, n] : loaded->ingest->dropped) err << ", " << reason << " " << n;
    err << "\n";
  }
  const sim::RunResult res = sim::run(loaded->scenario);

  io::ReportHeader h;
  h.scenario = cfg.name;
  h.mode = sim::to_string(cfg.mode);
  h.meeting_points = cfg.meeting_points;
  h.seed = cfg.fleet.seed;
  if (a.report.empty()) {
    io::emit_report(out, res.report, *format, h);
  } else {
    std::ofstream f(a.report, std::ios::binary);
    if (!f) throw io::DataError("cannot write report '" + a.report + "'");
    io::emit_report(f, res.report, *format, h);
    if (!f) throw io::DataError("failed writing report '" + a.report + "'");
  }
  if (res.audit.violations() > 0) {
    err << "constraint audit failed: " << res.audit.violations() << " violations\n";
    return kExitRuntime;
  }
  return kExitOk;
}

bool looks_like_cache(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  char magic[4] = {};
  f.read(magic, 4);
  return f.gcount() == 4 && std::memcmp(magic, "SPC", 3) == 0;
}

bool looks_like_csv(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return true;
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  return line.find(',') != std::string::npos;
}

int validate_cmd(const ValidateArgs& a, std::ostream& out) {
  if (io::parse_grid_spec(a.path) || (!looks_like_cache(a.path) && !looks_like_csv(a.path))) {
    if (a.path.rfind("grid:", 0) != 0) {
      std::ifstream probe(a.path);
      if (!probe) throw io::DataError("cannot read '" + a.path + "'");
    }
    const geo::RoadNetwork net = io::load_network_spec(a.path);
    out << "network ok: " << net.node_count() << " nodes, " << net.edge_count() << " edges\n";
    return kExitOk;
  }
  if (looks_like_cache(a.path)) {
    spcache::DistanceCache cache;
    try {
      cache = spcache::read_cache_file(a.path);
    } catch (const std::exception& e) {
      throw io::DataError("cache '" + a.path + "': " + e.what());
    }
    if (!a.network.empty()) {
      const geo::RoadNetwork net = io::load_network_spec(a.network);
      if (net.node_count() != cache.node_count()) throw io::DataError("cache does not match the network");
    }
    const spcache::CacheStats st = cache.stats();
    out << "cache ok: " << st.node_count << " nodes, " << cache.partitions().size() << " partitions, L "
        << cache.L() << ", " << st.stored_entries << " stored entries\n";
    return kExitOk;
  }
  if (a.network.empty()) throw io::ConfigError("validating a trip CSV needs --network");
  const geo::RoadNetwork net = io::load_network_spec(a.network);
  io::IngestResult r;
  try {
    r = io::ingest_csv_file(a.path, net);
  } catch (const io::IngestError& e) {
    throw io::DataError(e.what());
  }
  out << "csv ok: " << r.rows << " rows, " << r.requests.size() << " kept";
  for (const auto& [reason, n] : r.dropped) out << ", " << reason << " " << n;
  out << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ride-pooling fleet simulator with meeting points", "poolsim"};
  app.require_subcommand(1);

  BuildCacheArgs bc;
  auto* build = app.add_subcommand("build-cache", "Precompute the partitioned distance cache");
  build->add_option("network", bc.network, "Network file or grid:RxC[:spacing_m]")->required();
  build->add_option("--regions", bc.regions, "Region file, single, quadrants or blocks:RxC");
  build->add_option("--L", bc.L, "Maximum sub-path length");
  build->add_option("-o,--output", bc.output, "Cache file to write")->required();

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run a scenario and emit its metrics");
  run->add_option("scenario", ra.scenario, "Scenario file")->required();
  run->add_option("--mode", ra.mode, "greedy, batch-u, batch-w or ilp");
  run->add_flag("--meeting-points", ra.meeting_points, "Enable meeting points");
  run->add_option("--fleet", ra.fleet, "Fleet size");
  run->add_option("--seed", ra.seed, "Seed for fleet placement and synthetic demand");
  run->add_option("--report", ra.report, "Write the report here instead of stdout");
  run->add_option("--format", ra.format, "json, csv or text");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check a network, cache or trip CSV");
  validate->add_option("path", va.path, "File to check")->required();
  validate->add_option("--network", va.network, "Network for cache or CSV checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*build) return build_cache_cmd(bc, out);
    if (*run) return run_cmd(ra, out, err);
    return validate_cmd(va, out);
  } catch (const io::ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const io::DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const spcache::CacheFormatError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const io::IngestError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::ios_base::failure& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "runtime abort: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace poolsim::cli
