#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "poolsim/io/demand.hpp"
#include "poolsim/io/report.hpp"
#include "poolsim/sim/sim.hpp"

using namespace poolsim;
using namespace poolsim::sim;

namespace {

const SchedulerMode kModes[] = {SchedulerMode::Greedy, SchedulerMode::BatchUnweighted, SchedulerMode::BatchWeighted,
                                SchedulerMode::Ilp};

std::string json_of(const RunResult& r) {
  std::ostringstream out;
  io::emit_report(out, r.report, io::ReportFormat::Json);
  return out.str();
}

}  // namespace

TEST_CASE("random scenarios conserve requests and pass every audit") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    std::mt19937_64 rng(seed);
    const auto side = std::uniform_int_distribution<std::uint32_t>(4, 9)(rng);
    auto w = testing::make_world(testing::grid(side, side, 180));
    Scenario s;
    s.network = &w->net;
    s.oracle = &w->oracle;
    s.walking = &w->walk;
    s.fleet.size = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    s.fleet.capacity = std::uniform_int_distribution<int>(1, 4)(rng);
    s.fleet.seed = seed;
    s.fleet.speed = w->speed;
    s.z.capacity = 4;
    s.z.t_wait = seconds_to_ms(std::uniform_int_distribution<TimeMs>(30, 300)(rng));
    s.z.t_total = s.z.t_wait + seconds_to_ms(std::uniform_int_distribution<TimeMs>(0, 300)(rng));
    s.z.delta = seconds_to_ms(std::uniform_int_distribution<TimeMs>(5, 60)(rng));
    s.z.d_w = seed % 2 ? 0 : meters_to_mm(std::uniform_int_distribution<int>(50, 400)(rng));
    s.z.c_run = seconds_to_ms(std::uniform_int_distribution<TimeMs>(0, 3)(rng));
    s.rebalance = seed % 3 != 0;
    s.horizon = seconds_to_ms(900);
    io::DemandSpec d;
    d.rate_per_hour = {std::uniform_real_distribution<double>(50, 600)(rng)};
    d.horizon = s.horizon;
    d.seed = seed + 40;
    s.demand = io::generate_demand(w->net, d);
    s.mode = kModes[seed % 4];
    CAPTURE(seed);
    CAPTURE(to_string(s.mode));
    Simulation sim(s);
    bool conserved = true, capacity_ok = true;
    while (sim.step()) {
      std::uint64_t in_flight = 0;
      for (const domain::Request& r : sim.requests())
        if (r.assigned() && !r.dropoff_time) ++in_flight;
      if (sim.served() + sim.unserved() + sim.pending().size() + in_flight != sim.released()) conserved = false;
      for (const domain::Vehicle& v : sim.fleet())
        if (v.occupancy < 0 || v.occupancy > v.capacity) capacity_ok = false;
    }
    CHECK(conserved);
    CHECK(capacity_ok);
    const RunResult r = sim.finish();
    CHECK(r.served + r.unserved == s.demand.size());
    CHECK(r.audit.violations() == 0);
    CHECK(json_of(r) == json_of(run(s)));
  }
}
