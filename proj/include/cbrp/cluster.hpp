#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cbrp/event_queue.hpp"
#include "cbrp/message.hpp"
#include "cbrp/types.hpp"

namespace cbrp {

class Simulator;
struct Node;

// Neighbor-table row, refreshed by every HELLO from that neighbor. The
// sender's own snapshots are kept for two-hop salvage and adjacency.
struct NeighborEntry {
  NodeId id = 0;
  Role role = Role::Undecided;
  std::optional<NodeId> head;
  std::optional<NodeId> secondary;
  double weight = 0.0;
  Position position;
  double last_heard = 0.0;
  std::vector<NeighborSummary> neighbors;
  std::vector<AdjacencySummary> adjacency;
};

// Snapshot taken when a node claims headship through its undecided timer.
struct ElectionRecord {
  double time = 0.0;
  double weight = 0.0;
  std::vector<std::pair<NodeId, double>> contenders;  // undecided neighbors and their weights
};

struct ClusterState {
  Role role = Role::Undecided;
  std::optional<NodeId> head;       // cluster id; equals self for a head
  std::optional<NodeId> secondary;  // elected (head) or announced (member)
  std::map<NodeId, NeighborEntry> neighbors;
  std::map<NodeId, std::vector<NodeId>> adjacency;  // neighbor cluster -> gateways
  double weight = 0.0;                              // last advertised
  double head_since = 0.0;
  double head_time_total = 0.0;
  std::optional<EventHandle> undecided_timer;
  std::optional<double> failover_deadline;  // waiting for the secondary to confirm headship
  double last_reply = -1.0;
  std::optional<ElectionRecord> election;

  double head_time(double now) const {
    return head_time_total + (role == Role::ClusterHead ? now - head_since : 0.0);
  }
  // Neighbors currently advertising membership in this node's cluster.
  std::vector<NodeId> members(NodeId self) const;
  std::vector<NeighborSummary> neighbor_summary() const;
  std::vector<AdjacencySummary> adjacency_summary() const;
};

struct Candidate {
  NodeId id = 0;
  double weight = 0.0;
};

// Election order: lowest id under CBRP, lowest weight then lowest id under
// ECBRP.
bool ranks_before(const Candidate& a, const Candidate& b, ProtocolMode mode);

// Best cluster head currently in the neighbor table.
std::optional<NodeId> best_head(const ClusterState& state, ProtocolMode mode,
                                std::optional<NodeId> exclude = std::nullopt);

// Member with the smallest advertised weight, id tiebreak.
std::optional<NodeId> select_secondary(const ClusterState& state, NodeId self);

// Rebuilds the cluster adjacency table from the neighbor table: foreign
// neighbors are direct gateways, and a head also reaches every cluster its
// members report.
void rebuild_adjacency(ClusterState& state, NodeId self);

// Removes entries not heard for longer than `timeout`; returns removed ids.
std::vector<NodeId> expire_neighbors(ClusterState& state, double now, double timeout);

// Secondary of `head` as far as this node knows: its own record, the head's
// HELLO, or any neighbor's snapshot.
std::optional<NodeId> known_secondary_of(const ClusterState& state, NodeId self, NodeId head);

// Whether this node believes `id` is currently a cluster head.
bool believes_head(const ClusterState& state, NodeId self, NodeId id);

namespace cluster {

void on_startup(Simulator& sim, Node& node);
void on_hello_timer(Simulator& sim, Node& node);
void on_hello(Simulator& sim, Node& node, const Hello& hello);
void on_secondary_announce(Simulator& sim, Node& node, const SecondaryAnnounce& announce);
void on_undecided_timeout(Simulator& sim, Node& node);
void on_maintenance(Simulator& sim, Node& node);
void on_head_failure(Simulator& sim, Node& node, NodeId failed_head);

// Picks and announces a secondary; no-op outside ECBRP or without members.
void elect_secondary(Simulator& sim, Node& node);
void send_hello(Simulator& sim, Node& node);
double current_weight(const Simulator& sim, const Node& node);

}  // namespace cluster
}  // namespace cbrp
