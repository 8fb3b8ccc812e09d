#include "cbrp/cluster.hpp"

#include <algorithm>
#include <set>

#include "cbrp/simulator.hpp"
#include "cbrp/wca.hpp"

namespace cbrp {

std::vector<NodeId> ClusterState::members(NodeId self) const {
  std::vector<NodeId> out;
  for (const auto& [id, e] : neighbors)
    if (e.role == Role::ClusterMember && e.head == self) out.push_back(id);
  return out;
}

std::vector<NeighborSummary> ClusterState::neighbor_summary() const {
  std::vector<NeighborSummary> out;
  out.reserve(neighbors.size());
  for (const auto& [id, e] : neighbors) out.push_back({id, e.role, e.head, e.secondary});
  return out;
}

std::vector<AdjacencySummary> ClusterState::adjacency_summary() const {
  std::vector<AdjacencySummary> out;
  out.reserve(adjacency.size());
  for (const auto& [cluster, gateways] : adjacency) out.push_back({cluster, gateways});
  return out;
}

bool ranks_before(const Candidate& a, const Candidate& b, ProtocolMode mode) {
  if (mode == ProtocolMode::Ecbrp && a.weight != b.weight) return a.weight < b.weight;
  return a.id < b.id;
}

std::optional<NodeId> best_head(const ClusterState& state, ProtocolMode mode,
                                std::optional<NodeId> exclude) {
  std::optional<Candidate> best;
  for (const auto& [id, e] : state.neighbors) {
    if (e.role != Role::ClusterHead || e.head != id || id == exclude) continue;
    const Candidate c{id, e.weight};
    if (!best || ranks_before(c, *best, mode)) best = c;
  }
  if (!best) return std::nullopt;
  return best->id;
}

std::optional<NodeId> select_secondary(const ClusterState& state, NodeId self) {
  std::optional<Candidate> best;
  for (const auto& [id, e] : state.neighbors) {
    if (e.role != Role::ClusterMember || e.head != self) continue;
    const Candidate c{id, e.weight};
    if (!best || ranks_before(c, *best, ProtocolMode::Ecbrp)) best = c;
  }
  if (!best) return std::nullopt;
  return best->id;
}

void rebuild_adjacency(ClusterState& state, NodeId self) {
  state.adjacency.clear();
  const std::optional<NodeId> own =
      state.role == Role::ClusterHead || state.role == Role::ClusterMember ? state.head : std::nullopt;

  for (const auto& [id, e] : state.neighbors) {
    if ((e.role != Role::ClusterHead && e.role != Role::ClusterMember) || !e.head) continue;
    const NodeId cluster = *e.head;
    if (cluster == self || cluster == own) continue;
    state.adjacency[cluster].push_back(id);
  }

  if (state.role == Role::ClusterHead) {
    for (const auto& [id, e] : state.neighbors) {
      if (e.role != Role::ClusterMember || e.head != self) continue;
      for (const auto& adj : e.adjacency) {
        if (adj.cluster == self || adj.gateways.empty()) continue;
        state.adjacency[adj.cluster].push_back(id);
      }
    }
  }

  for (auto& [cluster, gateways] : state.adjacency) {
    std::sort(gateways.begin(), gateways.end());
    gateways.erase(std::unique(gateways.begin(), gateways.end()), gateways.end());
  }
}

std::vector<NodeId> expire_neighbors(ClusterState& state, double now, double timeout) {
  std::vector<NodeId> removed;
  for (auto it = state.neighbors.begin(); it != state.neighbors.end();) {
    if (now - it->second.last_heard > timeout) {
      removed.push_back(it->first);
      it = state.neighbors.erase(it);
    } else {
      ++it;
    }
  }
  return removed;
}

std::optional<NodeId> known_secondary_of(const ClusterState& state, NodeId self, NodeId head) {
  auto valid = [&](std::optional<NodeId> s) { return s && *s != head; };

  if (state.head == head && state.role == Role::ClusterMember && valid(state.secondary))
    return state.secondary;
  if (auto it = state.neighbors.find(head); it != state.neighbors.end()) {
    const NeighborEntry& e = it->second;
    if (e.role == Role::ClusterHead && valid(e.secondary)) return e.secondary;
  }
  for (const auto& [id, e] : state.neighbors) {
    for (const auto& s : e.neighbors) {
      if (s.id == head && s.role == Role::ClusterHead && valid(s.secondary) && *s.secondary != self)
        return s.secondary;
    }
  }
  return std::nullopt;
}

bool believes_head(const ClusterState& state, NodeId self, NodeId id) {
  if (id != self && state.role == Role::ClusterMember && state.head == id) return true;
  if (auto it = state.neighbors.find(id); it != state.neighbors.end())
    return it->second.role == Role::ClusterHead;
  return false;
}

namespace cluster {
namespace {

bool ecbrp(const Simulator& sim) { return sim.config().protocol_mode == ProtocolMode::Ecbrp; }

void restart_undecided_timer(Simulator& sim, Node& node) {
  if (node.cluster.undecided_timer) sim.cancel(*node.cluster.undecided_timer);
  node.cluster.undecided_timer =
      sim.schedule_in(sim.config().undecided_timer_s(), TimerEvent{node.id, TimerKind::Undecided, 0});
}

void stop_undecided_timer(Simulator& sim, Node& node) {
  if (node.cluster.undecided_timer) sim.cancel(*node.cluster.undecided_timer);
  node.cluster.undecided_timer.reset();
}

void become_member(Simulator& sim, Node& node, NodeId head) {
  ClusterState& st = node.cluster;
  stop_undecided_timer(sim, node);
  st.head = head;
  st.secondary.reset();
  if (auto it = st.neighbors.find(head); it != st.neighbors.end()) st.secondary = it->second.secondary;
  st.failover_deadline.reset();
  sim.set_role(node, Role::ClusterMember);
  rebuild_adjacency(st, node.id);
}

void become_undecided(Simulator& sim, Node& node) {
  ClusterState& st = node.cluster;
  st.head.reset();
  st.secondary.reset();
  st.failover_deadline.reset();
  sim.set_role(node, Role::Undecided);
  rebuild_adjacency(st, node.id);
  restart_undecided_timer(sim, node);
  send_hello(sim, node);
}

void become_head(Simulator& sim, Node& node) {
  ClusterState& st = node.cluster;
  stop_undecided_timer(sim, node);
  st.head = node.id;
  st.secondary.reset();
  st.failover_deadline.reset();
  sim.set_role(node, Role::ClusterHead);
  rebuild_adjacency(st, node.id);
  send_hello(sim, node);
  if (node.alive()) elect_secondary(sim, node);
}

// Join the best head in range, or start over as undecided.
void rehome(Simulator& sim, Node& node, std::optional<NodeId> exclude) {
  if (auto head = best_head(node.cluster, sim.config().protocol_mode, exclude))
    become_member(sim, node, *head);
  else
    become_undecided(sim, node);
}

bool well_formed(const Hello& hello) {
  return hello.role != Role::Dead && (hello.role != Role::ClusterHead || hello.head == hello.sender) &&
         (hello.role != Role::ClusterMember || (hello.head && *hello.head != hello.sender));
}

// Drops snapshot rows that cannot be right; returns how many were dropped.
std::size_t sanitize(NeighborEntry& entry) {
  std::size_t dropped = 0;
  std::set<NodeId> seen;
  std::erase_if(entry.neighbors, [&](const NeighborSummary& s) {
    const bool bad = s.id == entry.id || !seen.insert(s.id).second || s.role == Role::Dead;
    dropped += bad;
    return bad;
  });
  std::set<NodeId> clusters;
  std::erase_if(entry.adjacency, [&](const AdjacencySummary& a) {
    const bool bad = a.gateways.empty() || !clusters.insert(a.cluster).second;
    dropped += bad;
    return bad;
  });
  return dropped;
}

}  // namespace

double current_weight(const Simulator& sim, const Node& node) {
  const ScenarioConfig& cfg = sim.config();
  std::vector<Position> positions;
  positions.reserve(node.cluster.neighbors.size());
  for (const auto& [id, e] : node.cluster.neighbors) positions.push_back(e.position);

  LocalView view;
  view.self = node.position;
  view.neighbors = positions;
  view.range = cfg.tx_range_m;
  view.distance_travelled = node.mobility.distance_travelled;
  view.now = sim.now();
  view.head_time = cfg.p_v_mode == HeadTimeMode::ClusterHeadTime ? node.cluster.head_time(sim.now())
                                                                  : node.energy.consumed();
  return weight(compute_components(view, cfg.ideal_degree), cfg.factors);
}

void send_hello(Simulator& sim, Node& node) {
  if (!node.alive()) return;
  ClusterState& st = node.cluster;
  if (ecbrp(sim)) st.weight = current_weight(sim, node);

  Hello hello;
  hello.sender = node.id;
  hello.role = st.role;
  hello.weight = st.weight;
  hello.position = node.position;
  hello.head = st.role == Role::Undecided ? std::nullopt : st.head;
  hello.secondary = st.role == Role::Undecided ? std::nullopt : st.secondary;
  hello.neighbors = st.neighbor_summary();
  hello.adjacency = st.adjacency_summary();

  ++sim.counters().hello_transmissions;
  sim.trace(TraceKind::Hello, node.id, 0, static_cast<std::uint64_t>(st.role));
  sim.broadcast(node.id, std::move(hello));
}

void on_startup(Simulator& sim, Node& node) {
  if (!node.alive()) return;
  if (node.energy.depleted()) {
    sim.kill(node);
    return;
  }
  restart_undecided_timer(sim, node);
  sim.schedule_in(sim.config().hello_interval_s, TimerEvent{node.id, TimerKind::Hello, 0});
  send_hello(sim, node);
}

void on_hello_timer(Simulator& sim, Node& node) {
  if (!node.alive()) return;
  if (node.cluster.role == Role::ClusterHead) elect_secondary(sim, node);
  send_hello(sim, node);
  if (node.alive())
    sim.schedule_in(sim.config().hello_interval_s, TimerEvent{node.id, TimerKind::Hello, 0});
}

void elect_secondary(Simulator& sim, Node& node) {
  ClusterState& st = node.cluster;
  if (!ecbrp(sim) || st.role != Role::ClusterHead) return;
  const std::optional<NodeId> chosen = select_secondary(st, node.id);
  if (chosen == st.secondary) return;
  st.secondary = chosen;
  sim.trace(TraceKind::SecondaryAnnounce, node.id, chosen.value_or(node.id));
  sim.broadcast(node.id, SecondaryAnnounce{node.id, chosen});
}

void on_hello(Simulator& sim, Node& node, const Hello& hello) {
  if (!node.alive() || hello.sender == node.id) return;
  if (!well_formed(hello)) {
    ++sim.counters().malformed_entries;
    return;
  }
  ClusterState& st = node.cluster;
  const ProtocolMode mode = sim.config().protocol_mode;

  NeighborEntry& entry = st.neighbors[hello.sender];
  entry.id = hello.sender;
  entry.role = hello.role;
  entry.head = hello.head;
  entry.secondary = hello.secondary;
  entry.weight = hello.weight;
  entry.position = hello.position;
  entry.last_heard = sim.now();
  entry.neighbors = hello.neighbors;
  entry.adjacency = hello.adjacency;
  sim.counters().malformed_entries += sanitize(entry);

  const bool sender_is_head = hello.role == Role::ClusterHead;

  switch (st.role) {
    case Role::Undecided:
      if (sender_is_head) {
        // Several heads may be in range; take the best one known.
        become_member(sim, node, *best_head(st, mode));
        return;
      }
      break;

    case Role::ClusterHead:
      if (hello.role == Role::Undecided) {
        if (st.last_reply != sim.now()) {
          st.last_reply = sim.now();
          send_hello(sim, node);
        }
      } else if (sender_is_head &&
                 ranks_before({hello.sender, hello.weight}, {node.id, st.weight}, mode)) {
        become_member(sim, node, hello.sender);
        return;
      }
      break;

    case Role::ClusterMember:
      if (hello.sender == st.head) {
        if (sender_is_head) {
          st.failover_deadline.reset();
          st.secondary = hello.secondary;
        } else if (!st.failover_deadline || sim.now() >= *st.failover_deadline) {
          rehome(sim, node, hello.sender);
          return;
        }
      } else if (sender_is_head && mode == ProtocolMode::Ecbrp && st.head) {
        // In range of two heads: belong to the lighter one.
        auto current = st.neighbors.find(*st.head);
        if (current != st.neighbors.end() && current->second.role == Role::ClusterHead &&
            ranks_before({hello.sender, hello.weight}, {*st.head, current->second.weight}, mode)) {
          become_member(sim, node, hello.sender);
          return;
        }
      }
      break;

    case Role::Dead:
      return;
  }
  rebuild_adjacency(st, node.id);
}

void on_secondary_announce(Simulator& sim, Node& node, const SecondaryAnnounce& announce) {
  if (!node.alive()) return;
  ClusterState& st = node.cluster;
  if (auto it = st.neighbors.find(announce.head); it != st.neighbors.end())
    it->second.secondary = announce.secondary;
  if (st.role == Role::ClusterMember && st.head == announce.head) st.secondary = announce.secondary;
  sim.trace(TraceKind::SecondaryAnnounce, node.id, announce.head, announce.secondary.value_or(announce.head));
}

void on_undecided_timeout(Simulator& sim, Node& node) {
  ClusterState& st = node.cluster;
  st.undecided_timer.reset();
  if (!node.alive() || st.role != Role::Undecided) return;

  // Only bidirectional neighbors count; an isolated node keeps waiting.
  if (st.neighbors.empty()) {
    restart_undecided_timer(sim, node);
    return;
  }
  const ProtocolMode mode = sim.config().protocol_mode;
  if (auto head = best_head(st, mode)) {
    become_member(sim, node, *head);
    return;
  }

  // Members have already chosen a head and will not claim one, so only
  // undecided neighbors contend.
  const Candidate self{node.id, st.weight};
  ElectionRecord record{sim.now(), st.weight, {}};
  for (const auto& [id, e] : st.neighbors) {
    if (e.role != Role::Undecided) continue;
    if (!ranks_before(self, {id, e.weight}, mode)) {
      restart_undecided_timer(sim, node);
      return;
    }
    record.contenders.emplace_back(id, e.weight);
  }
  st.election = std::move(record);
  become_head(sim, node);
}

void on_head_failure(Simulator& sim, Node& node, NodeId failed_head) {
  ClusterState& st = node.cluster;
  if (!ecbrp(sim)) {
    become_undecided(sim, node);
    return;
  }

  const std::optional<NodeId> secondary = st.secondary;
  if (secondary == node.id) {
    ++sim.counters().failovers;
    sim.trace(TraceKind::Failover, node.id, failed_head);
    become_head(sim, node);
    return;
  }
  if (secondary) {
    if (auto it = st.neighbors.find(*secondary); it != st.neighbors.end()) {
      st.head = *secondary;
      st.secondary.reset();
      const bool confirmed = it->second.role == Role::ClusterHead && it->second.head == *secondary;
      if (confirmed)
        st.failover_deadline.reset();
      else
        st.failover_deadline = sim.now() + 2.0 * sim.config().hello_interval_s;
      sim.trace(TraceKind::Failover, node.id, *secondary, failed_head);
      rebuild_adjacency(st, node.id);
      return;
    }
  }
  become_undecided(sim, node);
}

void on_maintenance(Simulator& sim, Node& node) {
  if (!node.alive()) return;
  const ScenarioConfig& cfg = sim.config();
  ClusterState& st = node.cluster;

  if (st.role == Role::ClusterHead && cfg.head_energy_drain_per_s > 0.0) {
    if (consume_energy(node.energy, cfg.head_energy_drain_per_s * cfg.tick_s)) {
      sim.kill(node);
      return;
    }
  }

  expire_neighbors(st, sim.now(), cfg.stale_timeout_s());
  rebuild_adjacency(st, node.id);

  if (st.role == Role::ClusterMember && st.head) {
    const NodeId head = *st.head;
    auto it = st.neighbors.find(head);
    if (it == st.neighbors.end()) {
      on_head_failure(sim, node, head);
    } else if (st.failover_deadline && sim.now() >= *st.failover_deadline) {
      if (it->second.role == Role::ClusterHead && it->second.head == head)
        st.failover_deadline.reset();
      else
        rehome(sim, node, head);
    }
  } else if (st.role == Role::ClusterHead && st.secondary && !st.neighbors.contains(*st.secondary)) {
    st.secondary.reset();
    elect_secondary(sim, node);
  }
}

}  // namespace cluster
}  // namespace cbrp
