#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace cbrp {

enum class DropCause : std::uint8_t { NoRoute, RouteError, DeadForwarder, DeadSender };
inline constexpr std::size_t kDropCauseCount = 4;

std::string_view to_string(DropCause cause);

struct RunMetrics {
  // Data-plane accounting; packets_sent == delivered + dropped + in_flight.
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_delivered = 0;
  std::array<std::uint64_t, kDropCauseCount> dropped{};
  std::uint64_t in_flight = 0;

  // Cluster stability.
  std::uint64_t cluster_reformations = 0;  // Head/Member -> Undecided transitions
  std::uint64_t head_changes = 0;          // transitions into ClusterHead
  std::uint64_t failovers = 0;             // secondary promoted to head
  std::uint64_t deaths = 0;

  // Routing internals.
  std::uint64_t route_discoveries = 0;
  std::uint64_t rreq_transmissions = 0;
  std::uint64_t rrep_transmissions = 0;
  std::uint64_t rreq_loop_drops = 0;
  std::uint64_t rreq_duplicate_drops = 0;
  std::uint64_t secondary_substitutions = 0;
  std::uint64_t salvages = 0;
  std::uint64_t route_errors = 0;
  std::uint64_t path_violations = 0;  // any recorded/established path with a repeated id

  // Radio.
  std::uint64_t hello_transmissions = 0;
  std::uint64_t transmissions = 0;
  std::uint64_t dead_sender_attempts = 0;
  std::uint64_t malformed_entries = 0;

  std::uint64_t events_processed = 0;
  std::uint64_t trace_digest = 0;

  std::uint64_t dropped_total() const {
    std::uint64_t total = 0;
    for (auto d : dropped) total += d;
    return total;
  }
  std::uint64_t drops(DropCause cause) const { return dropped[static_cast<std::size_t>(cause)]; }
  bool conserved() const { return packets_sent == packets_delivered + dropped_total() + in_flight; }

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

// Delivered over sent; absent when nothing was sent.
std::optional<double> pdr(const RunMetrics& metrics);

}  // namespace cbrp
