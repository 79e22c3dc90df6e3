#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "poolsim/common/parallel.hpp"
#include "poolsim/geo/grid.hpp"
#include "poolsim/spcache/cache.hpp"
#include "poolsim/spcache/full_matrix.hpp"
#include "poolsim/stars/stars.hpp"

using namespace poolsim;

namespace {

geo::RoadNetwork lattice(std::uint32_t side) {
  geo::GridSpec g;
  g.rows = side;
  g.cols = side;
  g.jitter = 0.2;
  g.seed = 1;
  return geo::make_grid_network(g);
}

int threads_arg(const benchmark::State& state) { return state.range(1) == 0 ? 1 : worker_threads(); }

void BM_FullMatrix(benchmark::State& state) {
  const geo::RoadNetwork net = lattice(static_cast<std::uint32_t>(state.range(0)));
  const int threads = threads_arg(state);
  for (auto _ : state) benchmark::DoNotOptimize(spcache::FullDistanceMatrix(net.graph(), threads));
  state.SetLabel(state.range(1) == 0 ? "serial" : "parallel x" + std::to_string(threads));
}
BENCHMARK(BM_FullMatrix)->Args({24, 0})->Args({24, 1})->Unit(benchmark::kMillisecond);

void BM_CacheBuild(benchmark::State& state) {
  const auto side = static_cast<std::uint32_t>(state.range(0));
  const geo::RoadNetwork net = lattice(side);
  const auto regions = geo::grid_block_regions(side, side, 2, 2);
  spcache::BuildOptions o;
  o.threads = threads_arg(state);
  for (auto _ : state) benchmark::DoNotOptimize(spcache::build_cache(net, regions, o));
  state.SetLabel(state.range(1) == 0 ? "serial" : "parallel x" + std::to_string(o.threads));
}
BENCHMARK(BM_CacheBuild)->Args({24, 0})->Args({24, 1})->Unit(benchmark::kMillisecond);

void BM_DistanceQuery(benchmark::State& state) {
  const geo::RoadNetwork net = lattice(32);
  const spcache::DistanceCache cache = spcache::build_cache(net, geo::grid_block_regions(32, 32, 2, 2));
  const spcache::FullDistanceMatrix full(net.graph());
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(net.node_count() - 1));
  std::vector<std::pair<NodeId, NodeId>> q(4096);
  for (auto& p : q) p = {node(rng), node(rng)};
  std::size_t i = 0;
  const bool use_cache = state.range(0) != 0;
  for (auto _ : state) {
    const auto [u, v] = q[i++ & 4095];
    benchmark::DoNotOptimize(use_cache ? cache.dist(u, v) : full.dist(u, v));
  }
  state.SetLabel(use_cache ? "cache" : "full matrix");
}
BENCHMARK(BM_DistanceQuery)->Arg(0)->Arg(1);

void BM_GreedyInsertion(benchmark::State& state) {
  domain::ConstraintSet z;
  auto w = testing::make_world(testing::grid(16, 16, 200), z);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<NodeId> node(0, 255);
  std::vector<domain::Vehicle> fleet;
  for (VehicleId i = 0; i < 50; ++i) fleet.push_back(w->vehicle(i, node(rng)));
  for (int i = 0; i < 256; ++i) {
    const NodeId o = node(rng), d = node(rng);
    if (o != d) w->add_request(o, d, 0);
  }
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(stars::serve_request_greedy(fleet, w->reqs[i++ % w->reqs.size()], w->sc));
}
BENCHMARK(BM_GreedyInsertion)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
