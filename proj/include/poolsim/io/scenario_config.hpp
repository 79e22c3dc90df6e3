#pragma once

#include <istream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "poolsim/geo/grid.hpp"
#include "poolsim/io/demand.hpp"
#include "poolsim/io/trips.hpp"
#include "poolsim/sim/sim.hpp"
#include "poolsim/spcache/cache.hpp"

namespace poolsim::io {

inline constexpr int kScenarioVersion = 1;

/// Malformed or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or invalid input data (CLI exit code 3).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DemandSource { Synthetic, Csv };

struct ScenarioConfig {
  int version = kScenarioVersion;
  std::string name;

  std::string network = "grid:20x20:200";
  std::string regions = "single";
  std::optional<std::string> cache;
  unsigned L = 2;

  sim::FleetSpec fleet;
  domain::ConstraintSet z;
  double d_w_m = 300.0;  // walking radius when meeting points are on
  bool meeting_points = false;

  sim::SchedulerMode mode = sim::SchedulerMode::Greedy;
  bool rebalance = true;
  stars::CostWeights weights;
  ilp::IlpOptions ilp;
  int threads = 0;

  DemandSource demand = DemandSource::Synthetic;
  DemandSpec synthetic;
  std::string csv;
  IngestOptions ingest;
  TimeMs horizon = seconds_to_ms(3600);

  bool split_regions = false;
  bool include_timing = false;

  std::string base_dir;  // relative paths resolve against this
};

/// Parses the key/value scenario format. Throws ConfigError.
ScenarioConfig parse_scenario(std::istream& in, const std::string& base_dir = ".");
ScenarioConfig load_scenario_file(const std::string& path);

/// "grid:RxC[:spacing_m]" or a network file path.
geo::RoadNetwork load_network_spec(const std::string& spec, const std::string& base_dir = ".");
std::optional<geo::GridSpec> parse_grid_spec(const std::string& spec);

/// "single", "blocks:RxC" or "quadrants" (grid networks only), or a region
/// file path.
std::vector<std::uint32_t> load_regions_spec(const std::string& spec, const std::string& network_spec,
                                             std::size_t node_count, const std::string& base_dir = ".");

/// Networks, cache and demand built from a config, owning everything the
/// Scenario points at.
struct LoadedScenario {
  ScenarioConfig config;
  geo::RoadNetwork network;
  geo::WalkingNetwork walking;
  spcache::DistanceCache cache;
  std::unique_ptr<spcache::CacheOracle> oracle;
  std::optional<IngestResult> ingest;
  sim::Scenario scenario;
};

/// Throws DataError for unreadable inputs and ConfigError for bad values.
std::unique_ptr<LoadedScenario> materialize(const ScenarioConfig& cfg);

}  // namespace poolsim::io
