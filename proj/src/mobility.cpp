#include "cbrp/mobility.hpp"

#include <algorithm>
#include <cmath>

namespace cbrp {

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

Position random_position(const Area& area, Engine& rng) {
  std::uniform_real_distribution<double> ux(0.0, area.width);
  std::uniform_real_distribution<double> uy(0.0, area.height);
  const double x = ux(rng);
  const double y = uy(rng);
  return {x, y};
}

std::vector<Position> place_nodes(std::size_t count, const Area& area, Engine& rng) {
  std::vector<Position> positions;
  positions.reserve(count);
  for (std::size_t i = 0; i < count; ++i) positions.push_back(random_position(area, rng));
  return positions;
}

void mobility_tick(Position& position, MobilityState& state, double dt, const Area& area,
                   const MobilityParams& params, Engine& rng) {
  state.elapsed += dt;

  if (state.pause_remaining > 0.0) {
    state.pause_remaining = std::max(0.0, state.pause_remaining - dt);
    if (state.pause_remaining == 0.0) state.waypoint = random_position(area, rng);
    return;
  }
  if (params.speed_mps <= 0.0) return;

  const double remaining = distance(position, state.waypoint);
  const double step = params.speed_mps * dt;
  if (step >= remaining) {
    position = state.waypoint;
    state.distance_travelled += remaining;
    state.pause_remaining = params.pause_time_s;
    if (state.pause_remaining == 0.0) state.waypoint = random_position(area, rng);
    return;
  }

  const double f = step / remaining;
  position.x += (state.waypoint.x - position.x) * f;
  position.y += (state.waypoint.y - position.y) * f;
  // Rounding can push a coordinate a hair outside the rectangle.
  position.x = std::clamp(position.x, 0.0, area.width);
  position.y = std::clamp(position.y, 0.0, area.height);
  state.distance_travelled += step;
}

bool consume_energy(EnergyState& energy, double amount) {
  if (energy.depleted()) return false;
  energy.remaining = std::max(0.0, energy.remaining - amount);
  return energy.depleted();
}

bool consume_transmit_energy(EnergyState& energy, double cost) { return consume_energy(energy, cost); }

}  // namespace cbrp
