#include "poolsim/io/scenario_config.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "poolsim/common/parallel.hpp"
#include "poolsim/spcache/serialize.hpp"

namespace poolsim::io {

namespace {

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || std::filesystem::path(p).is_absolute()) return p;
  return (std::filesystem::path(base) / p).string();
}

template <class T>
T parse_number(const std::string& key, const std::string& s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("bad value '" + s + "' for " + key);
  return v;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("bad boolean '" + s + "' for " + key);
}

Spatial parse_spatial(const std::string& key, const std::string& s) {
  if (s == "uniform") return Spatial::Uniform;
  if (s == "clustered") return Spatial::Clustered;
  throw ConfigError("bad value '" + s + "' for " + key + " (uniform|clustered)");
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t b = 0;
  for (;;) {
    const auto e = s.find(sep, b);
    out.push_back(s.substr(b, e == std::string::npos ? std::string::npos : e - b));
    if (e == std::string::npos) break;
    b = e + 1;
  }
  return out;
}

}  // namespace

ScenarioConfig parse_scenario(std::istream& in, const std::string& base_dir) {
  ScenarioConfig c;
  c.base_dir = base_dir;
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigBase().from_config(in);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("unreadable scenario: ") + e.what());
  }
  bool saw_version = false;
  double t_extra_s = -1;
  using Setter = std::function<void(const std::string& key, const std::vector<std::string>& v)>;
  auto one = [](const std::string& key, const std::vector<std::string>& v) -> const std::string& {
    if (v.size() != 1) throw ConfigError(key + " takes exactly one value");
    return v.front();
  };
  auto seconds = [&](TimeMs& dst) {
    return [&](const std::string& k, const std::vector<std::string>& v) {
      const double s = parse_number<double>(k, one(k, v));
      if (s < 0) throw ConfigError(k + " must be non-negative");
      dst = seconds_to_ms(s);
    };
  };
  const std::map<std::string, Setter> setters = {
      {"version",
       [&](const std::string& k, const auto& v) {
         c.version = parse_number<int>(k, one(k, v));
         saw_version = true;
       }},
      {"name", [&](const std::string& k, const auto& v) { c.name = one(k, v); }},
      {"network.source", [&](const std::string& k, const auto& v) { c.network = one(k, v); }},
      {"network.regions", [&](const std::string& k, const auto& v) { c.regions = one(k, v); }},
      {"network.cache", [&](const std::string& k, const auto& v) { c.cache = one(k, v); }},
      {"network.L", [&](const std::string& k, const auto& v) { c.L = parse_number<unsigned>(k, one(k, v)); }},
      {"fleet.size", [&](const std::string& k, const auto& v) { c.fleet.size = parse_number<std::size_t>(k, one(k, v)); }},
      {"fleet.capacity", [&](const std::string& k, const auto& v) { c.fleet.capacity = parse_number<int>(k, one(k, v)); }},
      {"fleet.speed_mps",
       [&](const std::string& k, const auto& v) {
         const double s = parse_number<double>(k, one(k, v));
         if (!(s > 0)) throw ConfigError(k + " must be positive");
         c.fleet.speed = mps_to_mmps(s);
       }},
      {"fleet.seed", [&](const std::string& k, const auto& v) { c.fleet.seed = parse_number<std::uint64_t>(k, one(k, v)); }},
      {"constraints.t_wait_s", seconds(c.z.t_wait)},
      {"constraints.t_total_s", seconds(c.z.t_total)},
      {"constraints.t_extra_s",
       [&](const std::string& k, const auto& v) { t_extra_s = parse_number<double>(k, one(k, v)); }},
      {"constraints.d_w_m", [&](const std::string& k, const auto& v) { c.d_w_m = parse_number<double>(k, one(k, v)); }},
      {"constraints.walk_speed_mps",
       [&](const std::string& k, const auto& v) {
         const double s = parse_number<double>(k, one(k, v));
         if (!(s > 0)) throw ConfigError(k + " must be positive");
         c.z.walk_speed = mps_to_mmps(s);
       }},
      {"constraints.c_run_s", seconds(c.z.c_run)},
      {"constraints.delta_s", seconds(c.z.delta)},
      {"scheduler.mode",
       [&](const std::string& k, const auto& v) {
         const auto m = sim::parse_mode(one(k, v));
         if (!m) throw ConfigError("unknown scheduler mode '" + v.front() + "'");
         c.mode = *m;
       }},
      {"scheduler.meeting_points", [&](const std::string& k, const auto& v) { c.meeting_points = parse_bool(k, one(k, v)); }},
      {"scheduler.rebalance", [&](const std::string& k, const auto& v) { c.rebalance = parse_bool(k, one(k, v)); }},
      {"scheduler.c1", [&](const std::string& k, const auto& v) { c.weights.c1 = parse_number<double>(k, one(k, v)); }},
      {"scheduler.c2", [&](const std::string& k, const auto& v) { c.weights.c2 = parse_number<double>(k, one(k, v)); }},
      {"scheduler.threads", [&](const std::string& k, const auto& v) { c.threads = parse_number<int>(k, one(k, v)); }},
      {"scheduler.ilp.rv_cap",
       [&](const std::string& k, const auto& v) { c.ilp.rv_cap = parse_number<std::size_t>(k, one(k, v)); }},
      {"scheduler.ilp.phi", [&](const std::string& k, const auto& v) { c.ilp.phi = parse_number<double>(k, one(k, v)); }},
      {"scheduler.ilp.exhaustive_cap",
       [&](const std::string& k, const auto& v) { c.ilp.exhaustive_cap = parse_number<std::size_t>(k, one(k, v)); }},
      {"scheduler.ilp.max_trip_size",
       [&](const std::string& k, const auto& v) { c.ilp.max_trip_size = parse_number<std::size_t>(k, one(k, v)); }},
      {"scheduler.ilp.c_ko_s", [&](const std::string& k, const auto& v) { c.ilp.c_ko_s = parse_number<double>(k, one(k, v)); }},
      {"scheduler.ilp.node_budget",
       [&](const std::string& k, const auto& v) { c.ilp.node_budget = parse_number<std::uint64_t>(k, one(k, v)); }},
      {"scheduler.ilp.timeout_s",
       [&](const std::string& k, const auto& v) { c.ilp.timeout_s = parse_number<double>(k, one(k, v)); }},
      {"demand.source",
       [&](const std::string& k, const auto& v) {
         const std::string& s = one(k, v);
         if (s == "synthetic")
           c.demand = DemandSource::Synthetic;
         else if (s == "csv")
           c.demand = DemandSource::Csv;
         else
           throw ConfigError("unknown demand source '" + s + "' (synthetic|csv)");
       }},
      {"demand.horizon_s",
       [&](const std::string& k, const auto& v) {
         const double s = parse_number<double>(k, one(k, v));
         if (!(s > 0)) throw ConfigError(k + " must be positive");
         c.horizon = seconds_to_ms(s);
       }},
      {"demand.seed",
       [&](const std::string& k, const auto& v) { c.synthetic.seed = parse_number<std::uint64_t>(k, one(k, v)); }},
      {"demand.rate_per_hour",
       [&](const std::string& k, const auto& v) {
         c.synthetic.rate_per_hour.clear();
         for (const std::string& x : v) c.synthetic.rate_per_hour.push_back(parse_number<double>(k, x));
       }},
      {"demand.origins", [&](const std::string& k, const auto& v) { c.synthetic.origins = parse_spatial(k, one(k, v)); }},
      {"demand.destinations",
       [&](const std::string& k, const auto& v) { c.synthetic.destinations = parse_spatial(k, one(k, v)); }},
      {"demand.clusters",
       [&](const std::string& k, const auto& v) {
         c.synthetic.clusters.clear();
         for (const std::string& x : v) {
           const auto parts = split_on(x, ':');
           if (parts.size() != 3) throw ConfigError(k + " entries are node:sigma_m:weight, got '" + x + "'");
           c.synthetic.clusters.push_back(Cluster{parse_number<NodeId>(k, parts[0]), parse_number<double>(k, parts[1]),
                                                  parse_number<double>(k, parts[2])});
         }
       }},
      {"demand.csv", [&](const std::string& k, const auto& v) { c.csv = one(k, v); }},
      {"demand.clamp_group", [&](const std::string& k, const auto& v) { c.ingest.clamp_group = parse_bool(k, one(k, v)); }},
      {"demand.start", [&](const std::string& k, const auto& v) { c.ingest.start = one(k, v); }},
      {"demand.bbox_margin_m",
       [&](const std::string& k, const auto& v) { c.ingest.bbox_margin_m = parse_number<double>(k, one(k, v)); }},
      {"output.split_regions", [&](const std::string& k, const auto& v) { c.split_regions = parse_bool(k, one(k, v)); }},
      {"output.include_timing",
       [&](const std::string& k, const auto& v) { c.include_timing = parse_bool(k, one(k, v)); }},
  };
  for (const CLI::ConfigItem& it : items) {
    if (it.name == "++" || it.name == "--") continue;
    const std::string key = it.fullname();
    const auto s = setters.find(key);
    if (s == setters.end()) throw ConfigError("unknown key '" + key + "'");
    s->second(key, it.inputs);
  }
  if (!saw_version) throw ConfigError("missing 'version' key");
  if (c.version != kScenarioVersion)
    throw ConfigError("unsupported scenario version " + std::to_string(c.version) + " (expected " +
                      std::to_string(kScenarioVersion) + ")");
  if (t_extra_s >= 0) c.z.t_extra = seconds_to_ms(t_extra_s);
  if (c.d_w_m < 0) throw ConfigError("constraints.d_w_m must be non-negative");
  c.z.d_w = c.meeting_points ? meters_to_mm(c.d_w_m) : 0;
  c.z.capacity = c.fleet.capacity;
  c.synthetic.horizon = c.horizon;
  if (c.demand == DemandSource::Csv && c.csv.empty()) throw ConfigError("demand.source = csv needs demand.csv");
  if (c.L < 1) throw ConfigError("network.L must be at least 1");
  if (c.fleet.size < 1) throw ConfigError("fleet.size must be at least 1");
  try {
    c.z.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read scenario file '" + path + "'");
  ScenarioConfig c = parse_scenario(in, std::filesystem::path(path).parent_path().string());
  if (c.name.empty()) c.name = std::filesystem::path(path).stem().string();
  return c;
}

std::optional<geo::GridSpec> parse_grid_spec(const std::string& spec) {
  if (spec.rfind("grid:", 0) != 0) return std::nullopt;
  const auto parts = split_on(spec.substr(5), ':');
  if (parts.empty() || parts.size() > 2) throw ConfigError("grid spec is grid:RxC[:spacing_m]");
  const auto dims = split_on(parts[0], 'x');
  if (dims.size() != 2) throw ConfigError("grid spec is grid:RxC[:spacing_m]");
  geo::GridSpec g;
  g.rows = parse_number<std::uint32_t>("grid rows", dims[0]);
  g.cols = parse_number<std::uint32_t>("grid cols", dims[1]);
  if (g.rows < 1 || g.cols < 1) throw ConfigError("grid dimensions must be positive");
  if (parts.size() == 2) g.spacing_m = parse_number<double>("grid spacing", parts[1]);
  if (!(g.spacing_m > 0)) throw ConfigError("grid spacing must be positive");
  return g;
}

geo::RoadNetwork load_network_spec(const std::string& spec, const std::string& base_dir) {
  if (auto g = parse_grid_spec(spec)) return geo::make_grid_network(*g);
  try {
    return geo::load_network_file(resolve(base_dir, spec));
  } catch (const geo::ParseError& e) {
    throw DataError("network '" + spec + "': " + e.what());
  } catch (const geo::ValidationError& e) {
    throw DataError("network '" + spec + "': " + e.what());
  } catch (const std::ios_base::failure& e) {
    throw DataError("network '" + spec + "': " + e.what());
  } catch (const std::runtime_error& e) {
    throw DataError("network '" + spec + "': " + e.what());
  }
}

std::vector<std::uint32_t> load_regions_spec(const std::string& spec, const std::string& network_spec,
                                             std::size_t node_count, const std::string& base_dir) {
  if (spec == "single") return std::vector<std::uint32_t>(node_count, 0);
  if (spec == "quadrants" || spec.rfind("blocks:", 0) == 0) {
    const auto g = parse_grid_spec(network_spec);
    if (!g) throw ConfigError("region spec '" + spec + "' needs a grid network");
    std::uint32_t br = 2, bc = 2;
    if (spec != "quadrants") {
      const auto dims = split_on(spec.substr(7), 'x');
      if (dims.size() != 2) throw ConfigError("region spec is blocks:RxC");
      br = parse_number<std::uint32_t>("block rows", dims[0]);
      bc = parse_number<std::uint32_t>("block cols", dims[1]);
      if (br < 1 || bc < 1) throw ConfigError("block dimensions must be positive");
    }
    return geo::grid_block_regions(g->rows, g->cols, br, bc);
  }
  try {
    return spcache::load_region_map(resolve(base_dir, spec), node_count);
  } catch (const std::exception& e) {
    throw DataError("regions '" + spec + "': " + e.what());
  }
}

std::unique_ptr<LoadedScenario> materialize(const ScenarioConfig& cfg) {
  auto out = std::make_unique<LoadedScenario>();
  out->config = cfg;
  out->network = load_network_spec(cfg.network, cfg.base_dir);
  out->walking = geo::derive_walking_network(out->network);
  const std::vector<std::uint32_t> regions =
      load_regions_spec(cfg.regions, cfg.network, out->network.node_count(), cfg.base_dir);
  if (cfg.cache) {
    try {
      out->cache = spcache::read_cache_file(resolve(cfg.base_dir, *cfg.cache));
    } catch (const std::exception& e) {
      throw DataError("cache '" + *cfg.cache + "': " + e.what());
    }
    if (out->cache.node_count() != out->network.node_count())
      throw DataError("cache '" + *cfg.cache + "' does not match the network");
  } else {
    spcache::BuildOptions bo;
    bo.L = cfg.L;
    bo.threads = cfg.threads;
    out->cache = spcache::build_cache(out->network, regions, bo);
  }
  out->oracle = std::make_unique<spcache::CacheOracle>(out->cache);

  sim::Scenario& s = out->scenario;
  s.network = &out->network;
  s.oracle = out->oracle.get();
  s.walking = &out->walking;
  s.fleet = cfg.fleet;
  s.z = cfg.z;
  s.mode = cfg.mode;
  s.rebalance = cfg.rebalance;
  s.weights = cfg.weights;
  s.ilp = cfg.ilp;
  s.horizon = cfg.horizon;
  s.include_timing = cfg.include_timing;
  s.threads = cfg.threads <= 0 ? worker_threads() : cfg.threads;
  if (cfg.split_regions) s.region_map = regions;
  if (cfg.demand == DemandSource::Synthetic) {
    try {
      s.demand = generate_demand(out->network, cfg.synthetic);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("demand: ") + e.what());
    }
  } else {
    try {
      out->ingest = ingest_csv_file(resolve(cfg.base_dir, cfg.csv), out->network, cfg.ingest);
    } catch (const IngestError& e) {
      throw DataError(e.what());
    }
    s.demand = out->ingest->requests;
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return out;
}

}  // namespace poolsim::io
