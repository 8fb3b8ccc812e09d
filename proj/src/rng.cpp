#include "cbrp/rng.hpp"

namespace cbrp {
namespace {

enum class Stream : std::uint64_t { Placement = 1, Traffic = 2, Timers = 3, Waypoints = 4 };

std::uint64_t derive(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
  return splitmix64(splitmix64(seed ^ (static_cast<std::uint64_t>(stream) << 56)) + index);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStreams::RngStreams(std::uint64_t seed)
    : seed_(seed),
      placement_(derive(seed, Stream::Placement)),
      traffic_(derive(seed, Stream::Traffic)),
      timers_(derive(seed, Stream::Timers)) {}

Engine RngStreams::waypoint_stream(NodeId node) const {
  return Engine(derive(seed_, Stream::Waypoints, node));
}

}  // namespace cbrp
