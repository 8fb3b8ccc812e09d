#include <doctest.h>

#include <stdexcept>

#include "cbrp/event_queue.hpp"
#include "cbrp/simulator.hpp"

using namespace cbrp;

namespace {

NodeId fired_node(const Event& e) { return std::get<FailureEvent>(e.kind).node; }

}  // namespace

TEST_CASE("earlier events fire first") {
  EventQueue q;
  q.advance_to(4.0);
  q.schedule(5.1, FailureEvent{2});
  q.schedule(5.0, FailureEvent{1});
  auto a = q.pop_until(10.0);
  REQUIRE(a);
  CHECK(a->time == 5.0);
  CHECK(fired_node(*a) == 1);
  CHECK(q.now() == 5.0);
  auto b = q.pop_until(10.0);
  REQUIRE(b);
  CHECK(fired_node(*b) == 2);
}

TEST_CASE("simultaneous events fire in insertion order") {
  EventQueue q;
  for (NodeId i = 0; i < 5; ++i) q.schedule(5.0, FailureEvent{i});
  for (NodeId i = 0; i < 5; ++i) {
    auto e = q.pop_until(5.0);
    REQUIRE(e);
    CHECK(fired_node(*e) == i);
  }
  CHECK_FALSE(q.pop_until(5.0));
}

TEST_CASE("scheduling into the past is rejected") {
  EventQueue q;
  q.advance_to(4.0);
  CHECK_THROWS_AS(q.schedule(3.0, MobilityTick{}), std::logic_error);
  CHECK_NOTHROW(q.schedule(4.0, MobilityTick{}));
}

TEST_CASE("cancelled events never fire") {
  EventQueue q;
  const auto h = q.schedule(1.0, FailureEvent{7});
  q.schedule(2.0, FailureEvent{8});
  CHECK(q.pending() == 2);
  q.cancel(h);
  q.cancel(h);  // twice is harmless
  CHECK(q.pending() == 1);
  auto e = q.pop_until(10.0);
  REQUIRE(e);
  CHECK(fired_node(*e) == 8);
  CHECK(q.pending() == 0);
}

TEST_CASE("pop_until leaves later events queued") {
  EventQueue q;
  q.schedule(3.0, MobilityTick{});
  CHECK_FALSE(q.pop_until(2.0));
  CHECK(q.pending() == 1);
  q.advance_to(2.0);
  CHECK(q.now() == 2.0);
}

TEST_CASE("run_until on an idle scenario yields zero traffic") {
  ScenarioConfig c;
  c.node_count = 2;
  c.fixed_positions = {{0, 0}, {300, 300}};
  c.traffic_start_s = 100.0;
  Simulator sim(c);
  const RunMetrics m = sim.run_until(10.0);
  CHECK(m.packets_sent == 0);
  CHECK(m.packets_delivered == 0);
  CHECK(m.dropped_total() == 0);
  CHECK(m.in_flight == 0);
  CHECK_FALSE(pdr(m).has_value());
}

TEST_CASE("run_until(0) only processes time-zero events") {
  ScenarioConfig c;
  c.node_count = 5;
  Simulator sim(c);
  const RunMetrics m = sim.run_until(0.0);
  CHECK(sim.now() == 0.0);
  CHECK(m.packets_sent == 0);
  CHECK(m.hello_transmissions <= 5);
}

TEST_CASE("same seed, same metrics and trace") {
  ScenarioConfig c;
  c.seed = 42;
  c.duration_s = 60.0;
  c.record_trace = true;
  Simulator a(c), b(c);
  CHECK(a.run_until(60.0) == b.run_until(60.0));
  CHECK(a.trace_log() == b.trace_log());
  CHECK(a.metrics().trace_digest != 0);
}
