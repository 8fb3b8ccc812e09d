#pragma once

#include <cstddef>
#include <span>

#include "cbrp/mobility.hpp"

namespace cbrp {

// Coefficients of the combined clustering weight. Defaults are the values
// WCA uses: degree difference dominates, then distance sum.
struct WeightFactors {
  double degree = 0.7;
  double distance = 0.2;
  double mobility = 0.05;
  double head_time = 0.05;
};

// Raw, unnormalized weight inputs; the factors absorb the differing units.
struct WeightComponents {
  double degree_difference = 0.0;  // |degree - ideal degree|
  double distance_sum = 0.0;       // metres
  double mobility = 0.0;           // metres per second, averaged since t = 0
  double head_time = 0.0;          // seconds as cluster head (or energy spent)

  friend bool operator==(const WeightComponents&, const WeightComponents&) = default;
};

// What the head-time component measures.
enum class HeadTimeMode { ClusterHeadTime, EnergyConsumed };

// A node's local view at the moment it computes its weight.
struct LocalView {
  Position self;
  std::span<const Position> neighbors;
  double range = 80.0;
  double distance_travelled = 0.0;
  double now = 0.0;
  double head_time = 0.0;
};

// Neighbors within range of `self`.
std::size_t degree(Position self, std::span<const Position> neighbors, double range);

WeightComponents compute_components(const LocalView& view, std::size_t ideal_degree);

// Lower is a better cluster-head candidate.
double weight(const WeightComponents& components, const WeightFactors& factors);

}  // namespace cbrp
