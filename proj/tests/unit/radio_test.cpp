#include <doctest.h>

#include <random>

#include "cbrp/simulator.hpp"

using namespace cbrp;

namespace {

ScenarioConfig line_of(std::vector<Position> positions) {
  ScenarioConfig c;
  c.node_count = positions.size();
  c.fixed_positions = std::move(positions);
  c.area_width_m = 1000;
  c.area_height_m = 1000;
  c.node_speed_mps = 0.0;
  c.traffic_start_s = 1e6;
  return c;
}

Message probe() { return SecondaryAnnounce{0, std::nullopt}; }

}  // namespace

TEST_CASE("broadcast reaches only nodes within range") {
  Simulator sim(line_of({{0, 0}, {50, 0}, {100, 0}}));
  const auto got = sim.broadcast(0, probe());
  CHECK(got == std::vector<NodeId>{1});
  CHECK(sim.node(0).energy.remaining == 99.0);
}

TEST_CASE("a lone sender still pays") {
  Simulator sim(line_of({{0, 0}, {500, 500}}));
  CHECK(sim.broadcast(0, probe()).empty());
  CHECK(sim.node(0).energy.remaining == 99.0);
}

TEST_CASE("the last unit of energy still transmits, then the node is dead") {
  auto c = line_of({{0, 0}, {50, 0}});
  c.initial_energy = 1.0;
  Simulator sim(c);
  CHECK(sim.broadcast(0, probe()) == std::vector<NodeId>{1});
  CHECK(sim.node(0).energy.remaining == 0.0);
  CHECK(sim.node(0).cluster.role == Role::Dead);
  CHECK(sim.counters().deaths == 1);
}

TEST_CASE("a dead sender is a counted no-op") {
  Simulator sim(line_of({{0, 0}, {50, 0}}));
  sim.kill(sim.node(0));
  const auto before = sim.counters().transmissions;
  CHECK(sim.broadcast(0, probe()).empty());
  CHECK(sim.unicast(0, 1, probe()) == UnicastOutcome::LinkFailure);
  CHECK(sim.counters().dead_sender_attempts == 2);
  CHECK(sim.counters().transmissions == before);
}

TEST_CASE("unicast outcomes") {
  Simulator sim(line_of({{0, 0}, {50, 0}, {131, 0}, {0, 60}}));
  CHECK(sim.unicast(0, 1, probe()) == UnicastOutcome::Delivered);
  CHECK(sim.unicast(1, 2, probe()) == UnicastOutcome::LinkFailure);  // 81 m
  sim.kill(sim.node(3));
  CHECK(sim.unicast(0, 3, probe()) == UnicastOutcome::LinkFailure);
  CHECK(sim.node(0).energy.remaining == 98.0);
  CHECK(sim.node(1).energy.remaining == 99.0);
}

TEST_CASE("dead is absorbing") {
  Simulator sim(line_of({{0, 0}, {50, 0}}));
  sim.kill(sim.node(1));
  sim.set_role(sim.node(1), Role::ClusterHead);
  CHECK(sim.node(1).cluster.role == Role::Dead);
  sim.run_until(20.0);
  CHECK(sim.node(1).cluster.role == Role::Dead);
  CHECK(sim.node(0).cluster.role == Role::Undecided);
}

TEST_CASE("links are symmetric") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 400);
  for (int i = 0; i < 2000; ++i) {
    const Position a{u(rng), u(rng)}, b{u(rng), u(rng)};
    CHECK(in_range(a, b, 80.0) == in_range(b, a, 80.0));
  }
}

TEST_CASE("energy never increases") {
  ScenarioConfig c;
  c.duration_s = 120.0;
  Simulator sim(c);
  std::vector<double> last(c.node_count, c.initial_energy);
  for (double t = 5.0; t <= c.duration_s; t += 5.0) {
    sim.run_until(t);
    for (const Node& n : sim.nodes()) {
      CHECK(n.energy.remaining <= last[n.id]);
      CHECK(n.energy.remaining >= 0.0);
      CHECK((n.energy.remaining <= 0.0) == (n.cluster.role == Role::Dead));
      last[n.id] = n.energy.remaining;
    }
  }
}
