#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "cbrp/mobility.hpp"
#include "cbrp/types.hpp"

namespace cbrp {

// One row of a neighbor-table snapshot carried in a HELLO.
struct NeighborSummary {
  NodeId id = 0;
  Role role = Role::Undecided;
  std::optional<NodeId> head;
  std::optional<NodeId> secondary;
};

// One row of a cluster-adjacency snapshot carried in a HELLO.
struct AdjacencySummary {
  NodeId cluster = 0;
  std::vector<NodeId> gateways;
};

struct Hello {
  NodeId sender = 0;
  Role role = Role::Undecided;
  double weight = 0.0;
  Position position;
  std::optional<NodeId> head;       // cluster the sender belongs to (itself when head)
  std::optional<NodeId> secondary;  // secondary head of that cluster, when known
  std::vector<NeighborSummary> neighbors;
  std::vector<AdjacencySummary> adjacency;
};

struct SecondaryAnnounce {
  NodeId head = 0;
  std::optional<NodeId> secondary;
};

struct RequestId {
  NodeId source = 0;
  std::uint32_t seq = 0;

  friend auto operator<=>(const RequestId&, const RequestId&) = default;
};

struct RouteRequest {
  RequestId id;
  std::uint32_t attempt = 0;
  NodeId dest = 0;
  std::vector<NodeId> path;  // recorded so far; first element is the source
  NodeId target = 0;         // head (or destination) this copy is travelling to
};

// Travels from the destination back along `path`; `cursor` indexes the
// node that currently holds it.
struct RouteReply {
  RequestId id;
  std::vector<NodeId> path;
  std::size_t cursor = 0;
};

struct RouteError {
  NodeId reporter = 0;
  NodeId from = 0;
  NodeId to = 0;
  std::uint64_t packet_id = 0;
  NodeId dest = 0;
  std::vector<NodeId> path;  // reporter back to source
  std::size_t cursor = 0;
};

struct DataPacket {
  std::uint64_t id = 0;
  NodeId source = 0;
  NodeId dest = 0;
  std::vector<NodeId> route;
  std::size_t cursor = 0;
  double created = 0.0;
  int repairs = 0;
};

using Message =
    std::variant<Hello, SecondaryAnnounce, RouteRequest, RouteReply, RouteError, DataPacket>;

// True when `path` repeats an id.
bool has_duplicates(const std::vector<NodeId>& path);

}  // namespace cbrp
