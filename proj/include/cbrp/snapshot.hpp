#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbrp/mobility.hpp"
#include "cbrp/types.hpp"

namespace cbrp {

class Simulator;

struct SnapshotNode {
  NodeId id = 0;
  Position position;
  Role role = Role::Undecided;
  std::optional<NodeId> head;
  double weight = 0.0;
};

struct SnapshotOptions {
  bool range_circles = false;       // every alive node
  std::optional<NodeId> highlight;  // one node's range circle and weight label
  bool weight_labels = false;
  double scale = 2.0;  // pixels per metre
  std::string title;
};

std::vector<SnapshotNode> snapshot_nodes(const Simulator& sim);

// Heads blue, members black, dead red, undecided gray; member-to-head edges.
std::string render_svg(std::span<const SnapshotNode> nodes, const Area& area, double range,
                       const SnapshotOptions& options = {});

// Throws std::runtime_error naming the path when it cannot be written.
void write_snapshot(const Simulator& sim, const std::filesystem::path& path,
                    const SnapshotOptions& options = {});

}  // namespace cbrp
