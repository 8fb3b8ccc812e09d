#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "cbrp/harness.hpp"
#include "cbrp/simulator.hpp"

using namespace cbrp;

namespace {

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

SweepSpec short_spec() {
  SweepSpec spec;
  spec.node_counts = {5, 10};
  spec.replicates = 2;
  spec.base.duration_s = 20.0;
  spec.threads = 2;
  return spec;
}

}  // namespace

TEST_CASE("two nodes in range deliver everything") {
  ScenarioConfig c;
  c.node_count = 2;
  c.node_speed_mps = 0.0;
  c.fixed_positions = {{100, 100}, {150, 100}};
  c.fixed_flows = {{0, 1}};
  c.duration_s = 30.0;
  const RunMetrics m = run_scenario(c);
  REQUIRE(m.packets_sent > 0);
  // Packets still on their way at the end are neither delivered nor lost.
  CHECK(m.packets_delivered + m.in_flight == m.packets_sent);
  CHECK(m.dropped_total() == 0);
}

TEST_CASE("run_scenario rejects a bad config") {
  ScenarioConfig c;
  c.node_count = 1;
  CHECK_THROWS_AS(run_scenario(c), ConfigError);
}

TEST_CASE("same config, same metrics") {
  ScenarioConfig c;
  c.seed = 17;
  c.node_count = 20;
  c.duration_s = 60.0;
  CHECK(run_scenario(c) == run_scenario(c));
  ScenarioConfig other = c;
  other.seed = 18;
  CHECK(run_scenario(c).trace_digest != run_scenario(other).trace_digest);
}

TEST_CASE("pdr") {
  RunMetrics m;
  CHECK_FALSE(pdr(m).has_value());
  m.packets_sent = 100;
  m.packets_delivered = 90;
  CHECK(*pdr(m) == doctest::Approx(0.9));
  m.packets_delivered = 100;
  CHECK(*pdr(m) == 1.0);
}

TEST_CASE("mean ignores absent values") {
  CHECK_FALSE(mean_of({}).has_value());
  CHECK_FALSE(mean_of({std::nullopt}).has_value());
  CHECK(*mean_of({0.5, std::nullopt, 1.0}) == doctest::Approx(0.75));
}

TEST_CASE("sweep shape and csv size") {
  const SweepSpec spec = short_spec();
  const SweepResult r = sweep(spec);
  REQUIRE(r.cells.size() == spec.node_counts.size() * spec.modes.size());
  for (const auto& cell : r.cells) CHECK(cell.runs.size() == spec.replicates);
  CHECK(r.cells[0].node_count == 5);
  CHECK(r.cells[0].mode == ProtocolMode::Cbrp);
  CHECK(r.cells[1].mode == ProtocolMode::Ecbrp);
  const std::string csv = to_csv(r);
  CHECK(line_count(csv) == 1 + r.cells.size() * (spec.replicates + 1));
  CHECK(csv.rfind(csv_header() + "\n", 0) == 0);
}

TEST_CASE("full-size sweep grid") {
  SweepSpec spec;
  spec.node_counts = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
  spec.replicates = 5;
  spec.base.duration_s = 2.0;  // shape only
  const SweepResult r = sweep(spec);
  CHECK(r.cells.size() == 24);
  std::size_t runs = 0;
  for (const auto& cell : r.cells) runs += cell.runs.size();
  CHECK(runs == 120);
}

TEST_CASE("one replicate: the cell mean is that run") {
  SweepSpec spec = short_spec();
  spec.replicates = 1;
  spec.base.seed = 40;
  const SweepResult r = sweep(spec);
  for (const auto& cell : r.cells) {
    ScenarioConfig c = spec.base;
    c.node_count = cell.node_count;
    c.protocol_mode = cell.mode;
    const RunMetrics alone = run_scenario(c);
    CHECK(cell.runs[0].metrics == alone);
    CHECK(cell.mean_pdr == pdr(alone));
  }
}

TEST_CASE("both modes see the same seeds and the same placement") {
  SweepSpec spec = short_spec();
  spec.base.seed = 3;
  const SweepResult r = sweep(spec);
  for (std::size_t n : spec.node_counts) {
    const SweepCell* c = r.find(n, ProtocolMode::Cbrp);
    const SweepCell* e = r.find(n, ProtocolMode::Ecbrp);
    REQUIRE(c);
    REQUIRE(e);
    for (std::size_t i = 0; i < spec.replicates; ++i) {
      CHECK(c->runs[i].seed == e->runs[i].seed);
      CHECK(c->runs[i].seed == spec.base.seed + i);
    }
  }

  // Placement and trajectories do not depend on the protocol.
  ScenarioConfig cfg;
  cfg.seed = 3;
  cfg.node_count = 30;
  cfg.initial_energy = 1e9;
  cfg.protocol_mode = ProtocolMode::Cbrp;
  Simulator a(cfg);
  cfg.protocol_mode = ProtocolMode::Ecbrp;
  Simulator b(cfg);
  for (double t : {0.0, 50.0}) {
    a.run_until(t);
    b.run_until(t);
    for (NodeId i = 0; i < cfg.node_count; ++i) {
      CHECK(a.node(i).position.x == b.node(i).position.x);
      CHECK(a.node(i).position.y == b.node(i).position.y);
    }
  }
  CHECK(a.flows().size() == b.flows().size());
  for (std::size_t i = 0; i < a.flows().size(); ++i) {
    CHECK(a.flows()[i].spec.source == b.flows()[i].spec.source);
    CHECK(a.flows()[i].spec.dest == b.flows()[i].spec.dest);
  }
}

TEST_CASE("sweep rejects zero replicates and bad cells before running") {
  SweepSpec spec = short_spec();
  spec.replicates = 0;
  CHECK_THROWS_AS(sweep(spec), ConfigError);
  spec = short_spec();
  spec.node_counts = {10, 1};
  CHECK_THROWS_AS(sweep(spec), ConfigError);
}

TEST_CASE("csv rows") {
  CHECK(csv_header() ==
        "row,node_count,mode,seed,pdr,sent,delivered,drop_no_route,drop_route_error,"
        "drop_dead_forwarder,drop_dead_sender,in_flight,reformations,head_changes");
  RunMetrics m;
  CHECK(metrics_csv_row("0", 5, ProtocolMode::Ecbrp, 9, m) == "0,5,ecbrp,9,,0,0,0,0,0,0,0,0,0");
  m.packets_sent = 4;
  m.packets_delivered = 3;
  m.dropped = {1, 0, 0, 0};
  m.cluster_reformations = 2;
  m.head_changes = 5;
  CHECK(metrics_csv_row("1", 10, ProtocolMode::Cbrp, 2, m) == "1,10,cbrp,2,0.750000,4,3,1,0,0,0,0,2,5");

  std::istringstream in(to_csv(sweep(short_spec())));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) CHECK(std::count(line.begin(), line.end(), ',') == 13);
}
