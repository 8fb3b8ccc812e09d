#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cbrp/simulator.hpp"
#include "cbrp/snapshot.hpp"

using namespace cbrp;

namespace {

std::size_t occurrences(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  for (auto pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos + 1)) ++n;
  return n;
}

std::size_t nodes_filled(const std::string& svg, const std::string& colour) {
  return occurrences(svg, "fill=\"" + colour + "\"/>");
}

ScenarioConfig three_node_cluster() {
  ScenarioConfig c;
  c.node_count = 3;
  c.node_speed_mps = 0.0;
  c.traffic_start_s = 1e6;
  c.fixed_positions = {{100, 100}, {150, 100}, {100, 150}};
  return c;
}

}  // namespace

TEST_CASE("a formed cluster: one blue head, two black members") {
  Simulator sim(three_node_cluster());
  sim.run_until(10.0);
  const auto nodes = snapshot_nodes(sim);
  const std::string svg = render_svg(nodes, sim.config().area(), sim.config().tx_range_m);
  CHECK(nodes_filled(svg, "blue") == 1);
  CHECK(nodes_filled(svg, "black") == 2);
  CHECK(occurrences(svg, "class=\"membership\"") == 2);
  CHECK(occurrences(svg, "class=\"range\"") == 0);
}

TEST_CASE("everyone dead: all red") {
  Simulator sim(three_node_cluster());
  sim.run_until(10.0);
  for (Node& n : sim.nodes()) sim.kill(n);
  const std::string svg = render_svg(snapshot_nodes(sim), sim.config().area(), sim.config().tx_range_m);
  CHECK(nodes_filled(svg, "red") == 3);
  CHECK(occurrences(svg, "class=\"membership\"") == 0);
}

TEST_CASE("highlighted node gets its range circle and weight") {
  std::vector<SnapshotNode> nodes = {{0, {10, 20}, Role::ClusterHead, 0, 1.5},
                                     {1, {40, 20}, Role::ClusterMember, 0, 2.25}};
  SnapshotOptions opt;
  opt.highlight = 1;
  const std::string svg = render_svg(nodes, Area{400, 400}, 80.0, opt);
  CHECK(occurrences(svg, "class=\"range\"") == 1);
  CHECK(occurrences(svg, "W=2.25") == 1);
  CHECK(occurrences(svg, "W=1.5") == 0);
  // Radius is scaled with the picture.
  CHECK(svg.find("r=\"160.00\"") != std::string::npos);

  opt.highlight.reset();
  opt.range_circles = true;
  opt.weight_labels = true;
  const std::string all = render_svg(nodes, Area{400, 400}, 80.0, opt);
  CHECK(occurrences(all, "class=\"range\"") == 2);
  CHECK(occurrences(all, "W=") == 2);
}

TEST_CASE("snapshot file round trip and an unwritable path") {
  Simulator sim(three_node_cluster());
  sim.run_until(5.0);
  const auto path = std::filesystem::temp_directory_path() / "cbrp_snapshot_test.svg";
  write_snapshot(sim, path);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().rfind("<svg", 0) == 0);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(write_snapshot(sim, "/nonexistent-dir/x/snap.svg"), std::runtime_error);
}
