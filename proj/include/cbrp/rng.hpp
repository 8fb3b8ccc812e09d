#pragma once

#include <cstdint>
#include <random>

#include "cbrp/types.hpp"

namespace cbrp {

using Engine = std::mt19937_64;

// Independent generators derived from one run seed. Waypoint streams are
// per node so that a node dying early does not shift other nodes' draws,
// which keeps paired CBRP/ECBRP runs on identical trajectories.
class RngStreams {
 public:
  explicit RngStreams(std::uint64_t seed);

  Engine& placement() { return placement_; }
  Engine& traffic() { return traffic_; }
  Engine& timers() { return timers_; }
  Engine waypoint_stream(NodeId node) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  Engine placement_;
  Engine traffic_;
  Engine timers_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace cbrp
