#pragma once

#include <cstddef>
#include <vector>

#include "cbrp/rng.hpp"

namespace cbrp {

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

struct Area {
  double width = 400.0;
  double height = 400.0;

  bool contains(Position p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
};

double distance(Position a, Position b);

// Unit-disk connectivity: the boundary distance counts as in range.
inline bool in_range(Position a, Position b, double range) { return distance(a, b) <= range; }

Position random_position(const Area& area, Engine& rng);

std::vector<Position> place_nodes(std::size_t count, const Area& area, Engine& rng);

struct MobilityParams {
  double speed_mps = 20.0;
  double pause_time_s = 100.0;
};

// Random-waypoint state of a single node. The distance/elapsed accumulators
// feed the mobility term of the clustering weight.
struct MobilityState {
  Position waypoint;
  double pause_remaining = 0.0;
  double distance_travelled = 0.0;
  double elapsed = 0.0;

  double average_speed() const { return elapsed > 0.0 ? distance_travelled / elapsed : 0.0; }
};

// Advances one node by dt seconds. Reaching the waypoint inside a tick snaps
// to it and starts the pause; leftover motion is discarded. A fresh waypoint
// is drawn from `rng` when the pause runs out.
void mobility_tick(Position& position, MobilityState& state, double dt, const Area& area,
                   const MobilityParams& params, Engine& rng);

struct EnergyState {
  double initial = 100.0;
  double remaining = 100.0;

  bool depleted() const { return remaining <= 0.0; }
  double consumed() const { return initial - remaining; }
};

// Charges one transmission. Returns true when this charge exhausted the node.
bool consume_transmit_energy(EnergyState& energy, double cost);

// Charges an arbitrary amount (used for per-second drain on heads).
bool consume_energy(EnergyState& energy, double amount);

}  // namespace cbrp
