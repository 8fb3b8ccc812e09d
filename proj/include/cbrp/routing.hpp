#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "cbrp/event_queue.hpp"
#include "cbrp/message.hpp"

namespace cbrp {

class Simulator;
struct Node;

struct PendingDiscovery {
  RequestId id;
  std::uint32_t attempt = 0;
  EventHandle timer = 0;
};

struct RoutingState {
  std::uint32_t next_seq = 0;
  std::map<NodeId, std::vector<NodeId>> routes;  // dest -> full source route
  std::map<NodeId, PendingDiscovery> pending;    // dest -> outstanding discovery
  std::map<NodeId, std::deque<DataPacket>> queue;
  // (source, seq, attempt, target) already handled here.
  std::set<std::tuple<NodeId, std::uint32_t, std::uint32_t, NodeId>> seen;

  std::size_t queued() const;
};

namespace routing {

// A new application packet at `node` for `dest`.
void originate(Simulator& sim, Node& node, NodeId dest);
void initiate_discovery(Simulator& sim, Node& node, NodeId dest);
void on_retry_timer(Simulator& sim, Node& node, std::uint64_t tag);

void on_route_request(Simulator& sim, Node& node, const RouteRequest& rreq);
void on_route_reply(Simulator& sim, Node& node, const RouteReply& rrep);
void on_route_error(Simulator& sim, Node& node, const RouteError& rerr);
void on_data(Simulator& sim, Node& node, DataPacket packet);

// Sends `packet` from node == route[cursor] to the next hop, repairing the
// route locally on link failure.
void forward_data(Simulator& sim, Node& node, DataPacket packet);

// Patches packet.route after a failure towards route[cursor + 1]: first the
// secondary-head splice (ECBRP), then a two-hop salvage. False when no
// patch exists.
bool recover_route(Simulator& sim, Node& node, DataPacket& packet);

// Drops everything queued at a node that just died.
void on_node_death(Simulator& sim, Node& node);

std::uint64_t retry_tag(NodeId dest, std::uint32_t seq);

}  // namespace routing
}  // namespace cbrp
