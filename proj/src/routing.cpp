#include "cbrp/routing.hpp"

#include <algorithm>

#include "cbrp/simulator.hpp"

namespace cbrp {

std::size_t RoutingState::queued() const {
  std::size_t total = 0;
  for (const auto& [dest, q] : queue) total += q.size();
  return total;
}

namespace routing {
namespace {

bool contains(const std::vector<NodeId>& path, NodeId id) {
  return std::find(path.begin(), path.end(), id) != path.end();
}

void check_path(Simulator& sim, const std::vector<NodeId>& path) {
  if (has_duplicates(path)) ++sim.counters().path_violations;
}

void learn_routes(Simulator& sim, Node& node, const std::vector<NodeId>& path) {
  if (!sim.config().route_cache) return;
  const auto self = std::find(path.begin(), path.end(), node.id);
  if (self == path.end()) return;
  auto& routes = node.routing.routes;
  for (auto it = self + 1; it != path.end(); ++it)
    routes.try_emplace(*it, self, it + 1);
  for (auto it = path.begin(); it != self; ++it) {
    std::vector<NodeId> back(std::make_reverse_iterator(self + 1), std::make_reverse_iterator(it));
    routes.try_emplace(*it, std::move(back));
  }
}

void send_rreq(Simulator& sim, Node& node, NodeId next, RouteRequest rreq) {
  ++sim.counters().rreq_transmissions;
  sim.trace(TraceKind::RouteRequest, node.id, next, rreq.id.seq);
  sim.unicast(node.id, next, std::move(rreq));
}

// A head has appended nothing yet; `rreq.path` ends with the previous hop.
void process_at_head(Simulator& sim, Node& node, RouteRequest rreq) {
  const ClusterState& st = node.cluster;
  rreq.path.push_back(node.id);

  if (st.neighbors.contains(rreq.dest)) {
    rreq.target = rreq.dest;
    send_rreq(sim, node, rreq.dest, std::move(rreq));
    return;
  }

  // One copy per adjacent cluster, each through its lowest-id usable gateway.
  const auto adjacency = st.adjacency;
  for (const auto& [cluster, gateways] : adjacency) {
    if (contains(rreq.path, cluster)) continue;
    auto gw = std::find_if(gateways.begin(), gateways.end(),
                           [&](NodeId g) { return !contains(rreq.path, g); });
    if (gw == gateways.end()) continue;
    RouteRequest copy = rreq;
    copy.target = cluster;
    send_rreq(sim, node, *gw, std::move(copy));
    if (!node.alive()) return;
  }
}

// A gateway passes the request towards `rreq.target` and towards every other
// cluster it borders; a destination in range gets it directly.
void relay(Simulator& sim, Node& node, RouteRequest rreq) {
  const ClusterState& st = node.cluster;
  rreq.path.push_back(node.id);
  if (st.neighbors.contains(rreq.dest)) {
    rreq.target = rreq.dest;
    send_rreq(sim, node, rreq.dest, std::move(rreq));
    return;
  }

  auto gateway_to = [&](NodeId cluster) -> std::optional<NodeId> {
    auto it = st.adjacency.find(cluster);
    if (it == st.adjacency.end()) return std::nullopt;
    for (NodeId g : it->second)
      if (!contains(rreq.path, g)) return g;
    return std::nullopt;
  };
  std::vector<std::pair<NodeId, NodeId>> sends;  // (next hop, target)
  if (st.neighbors.contains(rreq.target))
    sends.emplace_back(rreq.target, rreq.target);
  else if (auto g = gateway_to(rreq.target))
    sends.emplace_back(*g, rreq.target);
  for (const auto& [cluster, gateways] : st.adjacency) {
    if (cluster == rreq.target || contains(rreq.path, cluster)) continue;
    if (auto g = gateway_to(cluster)) sends.emplace_back(*g, cluster);
  }
  for (const auto& [next, target] : sends) {
    if (!node.alive()) return;
    RouteRequest copy = rreq;
    copy.target = target;
    send_rreq(sim, node, next, std::move(copy));
  }
}

void send_rrep_hop(Simulator& sim, Node& node, RouteReply rrep) {
  if (rrep.cursor == 0) return;
  const NodeId next = rrep.path[rrep.cursor - 1];
  --rrep.cursor;
  ++sim.counters().rrep_transmissions;
  sim.trace(TraceKind::RouteReply, node.id, next, rrep.id.seq);
  sim.unicast(node.id, next, std::move(rrep));
}

void attempt_discovery(Simulator& sim, Node& node, NodeId dest) {
  auto it = node.routing.pending.find(dest);
  if (it == node.routing.pending.end()) return;
  PendingDiscovery& pd = it->second;
  const ScenarioConfig& cfg = sim.config();
  const std::uint64_t tag = retry_tag(dest, pd.id.seq);

  // Without a cluster there is nobody to ask yet; check again shortly.
  if (node.cluster.role == Role::Undecided) {
    pd.timer = sim.schedule_in(cfg.hello_interval_s, TimerEvent{node.id, TimerKind::RouteRetry, tag});
    return;
  }
  pd.timer = sim.schedule_in(cfg.rreq_timeout_s, TimerEvent{node.id, TimerKind::RouteRetry, tag});

  RouteRequest rreq;
  rreq.id = pd.id;
  rreq.attempt = pd.attempt;
  rreq.dest = dest;
  node.routing.seen.insert({pd.id.source, pd.id.seq, pd.attempt, node.id});

  if (node.cluster.role == Role::ClusterHead) {
    process_at_head(sim, node, std::move(rreq));
  } else {
    // A member source asks its head and, like any gateway, the clusters it
    // borders.
    rreq.target = *node.cluster.head;
    relay(sim, node, std::move(rreq));
  }
}

void give_up(Simulator& sim, Node& node, NodeId dest) {
  node.routing.pending.erase(dest);
  auto q = node.routing.queue.extract(dest);
  if (q.empty()) return;
  for (const DataPacket& p : q.mapped()) sim.record_drop(p, DropCause::NoRoute, node.id);
}

void flush_queue(Simulator& sim, Node& node, NodeId dest) {
  RoutingState& rs = node.routing;
  while (node.alive()) {
    auto q = rs.queue.find(dest);
    if (q == rs.queue.end()) return;
    if (q->second.empty()) {
      rs.queue.erase(q);
      return;
    }
    auto route = rs.routes.find(dest);
    if (route == rs.routes.end()) {
      // The route broke while draining; the rest waits for a new one.
      if (!rs.pending.contains(dest)) initiate_discovery(sim, node, dest);
      return;
    }
    DataPacket packet = std::move(q->second.front());
    q->second.pop_front();
    packet.route = route->second;
    packet.cursor = 0;
    forward_data(sim, node, std::move(packet));
  }
}

void invalidate(Node& node, NodeId dest, NodeId from, NodeId to) {
  auto& routes = node.routing.routes;
  for (auto it = routes.begin(); it != routes.end();) {
    const auto& r = it->second;
    bool broken = false;
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
      if (r[i] == from && r[i + 1] == to) broken = true;
    if (broken || it->first == dest)
      it = routes.erase(it);
    else
      ++it;
  }
}

void report_error(Simulator& sim, Node& node, const DataPacket& packet, NodeId failed) {
  ++sim.counters().route_errors;
  if (packet.cursor == 0) {
    invalidate(node, packet.dest, node.id, failed);
    return;
  }
  RouteError rerr;
  rerr.reporter = node.id;
  rerr.from = node.id;
  rerr.to = failed;
  rerr.packet_id = packet.id;
  rerr.dest = packet.dest;
  rerr.path.assign(packet.route.begin(), packet.route.begin() + static_cast<std::ptrdiff_t>(packet.cursor) + 1);
  rerr.cursor = packet.cursor - 1;
  const NodeId next = rerr.path[rerr.cursor];
  sim.trace(TraceKind::RouteError, node.id, next, packet.id);
  sim.unicast(node.id, next, std::move(rerr));
}

}  // namespace

std::uint64_t retry_tag(NodeId dest, std::uint32_t seq) {
  return (static_cast<std::uint64_t>(seq) << 32) | dest;
}

void originate(Simulator& sim, Node& node, NodeId dest) {
  DataPacket packet;
  packet.id = sim.next_packet_id();
  packet.source = node.id;
  packet.dest = dest;
  packet.created = sim.now();
  ++sim.counters().packets_sent;

  RoutingState& rs = node.routing;
  if (auto route = rs.routes.find(dest); route != rs.routes.end()) {
    packet.route = route->second;
    forward_data(sim, node, std::move(packet));
    return;
  }
  rs.queue[dest].push_back(std::move(packet));
  if (!rs.pending.contains(dest)) initiate_discovery(sim, node, dest);
}

void initiate_discovery(Simulator& sim, Node& node, NodeId dest) {
  if (!node.alive()) return;
  RoutingState& rs = node.routing;
  PendingDiscovery pd;
  pd.id = RequestId{node.id, rs.next_seq++};
  rs.pending[dest] = pd;
  ++sim.counters().route_discoveries;
  attempt_discovery(sim, node, dest);
}

void on_retry_timer(Simulator& sim, Node& node, std::uint64_t tag) {
  const NodeId dest = static_cast<NodeId>(tag & 0xffffffffULL);
  const auto seq = static_cast<std::uint32_t>(tag >> 32);
  auto it = node.routing.pending.find(dest);
  if (it == node.routing.pending.end() || it->second.id.seq != seq) return;
  PendingDiscovery& pd = it->second;
  ++pd.attempt;
  if (pd.attempt > static_cast<std::uint32_t>(sim.config().max_retries)) {
    give_up(sim, node, dest);
    return;
  }
  attempt_discovery(sim, node, dest);
}

void on_route_request(Simulator& sim, Node& node, const RouteRequest& rreq) {
  check_path(sim, rreq.path);
  if (contains(rreq.path, node.id)) {
    ++sim.counters().rreq_loop_drops;
    return;
  }
  if (rreq.dest == node.id) {
    RouteReply rrep;
    rrep.id = rreq.id;
    rrep.path = rreq.path;
    rrep.path.push_back(node.id);
    rrep.cursor = rrep.path.size() - 1;
    check_path(sim, rrep.path);
    send_rrep_hop(sim, node, std::move(rrep));
    return;
  }

  const Role role = node.cluster.role;
  const NodeId key_target = role == Role::ClusterHead ? node.id : rreq.target;
  if (!node.routing.seen.insert({rreq.id.source, rreq.id.seq, rreq.attempt, key_target}).second) {
    ++sim.counters().rreq_duplicate_drops;
    return;
  }

  if (role == Role::ClusterHead)
    process_at_head(sim, node, rreq);
  else if (role == Role::ClusterMember && rreq.target != node.id)
    relay(sim, node, rreq);
}

void on_route_reply(Simulator& sim, Node& node, const RouteReply& rrep) {
  if (rrep.cursor >= rrep.path.size() || rrep.path[rrep.cursor] != node.id) return;
  if (has_duplicates(rrep.path)) {
    ++sim.counters().path_violations;
    return;
  }
  learn_routes(sim, node, rrep.path);
  if (rrep.cursor > 0) {
    send_rrep_hop(sim, node, rrep);
    return;
  }

  const NodeId dest = rrep.path.back();
  RoutingState& rs = node.routing;
  auto it = rs.pending.find(dest);
  if (it == rs.pending.end() || it->second.id != rrep.id) return;  // late or unknown: first reply won
  sim.cancel(it->second.timer);
  rs.pending.erase(it);
  rs.routes[dest] = rrep.path;
  flush_queue(sim, node, dest);
}

void on_route_error(Simulator& sim, Node& node, const RouteError& rerr) {
  if (rerr.cursor >= rerr.path.size() || rerr.path[rerr.cursor] != node.id) return;
  invalidate(node, rerr.dest, rerr.from, rerr.to);
  if (rerr.cursor == 0) return;
  RouteError next = rerr;
  --next.cursor;
  const NodeId hop = next.path[next.cursor];
  sim.trace(TraceKind::RouteError, node.id, hop, rerr.packet_id);
  sim.unicast(node.id, hop, std::move(next));
}

void on_data(Simulator& sim, Node& node, DataPacket packet) {
  check_path(sim, packet.route);
  if (packet.cursor >= packet.route.size() || packet.route[packet.cursor] != node.id) {
    sim.record_drop(packet, DropCause::RouteError, node.id);
    return;
  }
  learn_routes(sim, node, packet.route);
  if (packet.dest == node.id) {
    sim.record_delivery(packet);
    return;
  }
  forward_data(sim, node, std::move(packet));
}

void forward_data(Simulator& sim, Node& node, DataPacket packet) {
  while (true) {
    if (!node.alive()) {
      sim.record_drop(packet, DropCause::DeadForwarder, node.id);
      return;
    }
    if (packet.cursor + 1 >= packet.route.size()) {
      sim.record_drop(packet, DropCause::RouteError, node.id);
      return;
    }
    const NodeId next = packet.route[packet.cursor + 1];
    DataPacket hop = packet;
    ++hop.cursor;
    const double dist = distance(node.position, sim.node(next).position);
    if (sim.unicast(node.id, next, std::move(hop)) == UnicastOutcome::Delivered) {
      sim.trace(TraceKind::DataHop, node.id, next, packet.id, dist);
      return;
    }
    if (!node.alive()) {
      sim.record_drop(packet, DropCause::DeadForwarder, node.id);
      return;
    }
    if (!recover_route(sim, node, packet)) {
      report_error(sim, node, packet, next);
      sim.record_drop(packet, DropCause::RouteError, node.id);
      return;
    }
    check_path(sim, packet.route);
  }
}

bool recover_route(Simulator& sim, Node& node, DataPacket& packet) {
  if (packet.repairs >= sim.config().max_repairs) return false;
  auto& route = packet.route;
  const std::size_t c = packet.cursor;
  if (c + 1 >= route.size()) return false;
  const NodeId failed = route[c + 1];
  const ClusterState& st = node.cluster;
  const auto pos = [&](std::size_t i) { return route.begin() + static_cast<std::ptrdiff_t>(i); };
  const auto in_prefix = [&](NodeId id) { return std::find(route.begin(), pos(c + 1), id) != pos(c + 1); };

  if (sim.config().protocol_mode == ProtocolMode::Ecbrp && believes_head(st, node.id, failed)) {
    const auto secondary = known_secondary_of(st, node.id, failed);
    if (secondary && *secondary != node.id && st.neighbors.contains(*secondary) && !in_prefix(*secondary)) {
      auto later = std::find(pos(c + 2), route.end(), *secondary);
      if (later != route.end())
        route.erase(pos(c + 1), later);
      else
        route[c + 1] = *secondary;
      ++packet.repairs;
      ++sim.counters().secondary_substitutions;
      sim.trace(TraceKind::Substitution, node.id, *secondary, failed);
      return true;
    }
  }

  // Salvage: skip ahead to any later hop that is a direct neighbor.
  for (std::size_t j = route.size() - 1; j >= c + 2; --j) {
    if (st.neighbors.contains(route[j])) {
      route.erase(pos(c + 1), pos(j));
      ++packet.repairs;
      ++sim.counters().salvages;
      sim.trace(TraceKind::Salvage, node.id, route[c + 1], failed);
      return true;
    }
  }

  // Salvage: a neighbor that advertises the hop after the failed one (or
  // the failed destination itself) as its own neighbor.
  const bool failed_is_last = c + 2 >= route.size();
  const NodeId target = failed_is_last ? failed : route[c + 2];
  for (const auto& [id, e] : st.neighbors) {
    if (id == failed || contains(route, id)) continue;
    const bool reaches = std::any_of(e.neighbors.begin(), e.neighbors.end(),
                                     [&](const NeighborSummary& s) { return s.id == target; });
    if (!reaches) continue;
    if (failed_is_last)
      route.insert(pos(c + 1), id);
    else
      route[c + 1] = id;
    ++packet.repairs;
    ++sim.counters().salvages;
    sim.trace(TraceKind::Salvage, node.id, id, failed);
    return true;
  }
  return false;
}

void on_node_death(Simulator& sim, Node& node) {
  RoutingState& rs = node.routing;
  for (auto& [dest, q] : rs.queue)
    for (const DataPacket& p : q) sim.record_drop(p, DropCause::DeadSender, node.id);
  rs.queue.clear();
  for (auto& [dest, pd] : rs.pending) sim.cancel(pd.timer);
  rs.pending.clear();
}

}  // namespace routing
}  // namespace cbrp
