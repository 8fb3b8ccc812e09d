#include "cbrp/wca.hpp"

namespace cbrp {

std::size_t degree(Position self, std::span<const Position> neighbors, double range) {
  std::size_t count = 0;
  for (const Position& p : neighbors)
    if (in_range(self, p, range)) ++count;
  return count;
}

WeightComponents compute_components(const LocalView& view, std::size_t ideal_degree) {
  WeightComponents c;
  std::size_t deg = 0;
  for (const Position& p : view.neighbors) {
    const double d = distance(view.self, p);
    if (d > view.range) continue;
    ++deg;
    c.distance_sum += d;
  }
  c.degree_difference = deg > ideal_degree ? static_cast<double>(deg - ideal_degree)
                                           : static_cast<double>(ideal_degree - deg);
  c.mobility = view.now > 0.0 ? view.distance_travelled / view.now : 0.0;
  c.head_time = view.head_time;
  return c;
}

double weight(const WeightComponents& components, const WeightFactors& factors) {
  return factors.degree * components.degree_difference +
         factors.distance * components.distance_sum +
         factors.mobility * components.mobility +
         factors.head_time * components.head_time;
}

}  // namespace cbrp
