#include "cbrp/simulator.hpp"

#include <bit>
#include <type_traits>

namespace cbrp {

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::Hello: return "hello";
    case TraceKind::SecondaryAnnounce: return "secondary";
    case TraceKind::RouteRequest: return "rreq";
    case TraceKind::RouteReply: return "rrep";
    case TraceKind::RouteError: return "rerr";
    case TraceKind::DataHop: return "data_hop";
    case TraceKind::Delivered: return "delivered";
    case TraceKind::Dropped: return "dropped";
    case TraceKind::RoleChange: return "role";
    case TraceKind::Death: return "death";
    case TraceKind::Failover: return "failover";
    case TraceKind::Substitution: return "substitution";
    case TraceKind::Salvage: return "salvage";
  }
  return "?";
}

Simulator::Simulator(ScenarioConfig config) : config_(std::move(config)), rng_(config_.seed) {
  config_.validate();
  const Area area = config_.area();

  std::vector<Position> positions = config_.fixed_positions.empty()
                                        ? place_nodes(config_.node_count, area, rng_.placement())
                                        : config_.fixed_positions;

  nodes_.reserve(config_.node_count);
  for (std::size_t i = 0; i < config_.node_count; ++i) {
    Node n;
    n.id = static_cast<NodeId>(i);
    n.position = positions[i];
    n.waypoint_rng = rng_.waypoint_stream(n.id);
    n.mobility.waypoint = random_position(area, n.waypoint_rng);
    n.energy = EnergyState{config_.initial_energy, config_.initial_energy};
    nodes_.push_back(std::move(n));
  }

  // Each node boots at a random phase inside the first HELLO interval.
  std::uniform_real_distribution<double> phase(0.0, config_.hello_interval_s);
  for (const Node& n : nodes_) schedule_at(phase(rng_.timers()), TimerEvent{n.id, TimerKind::Startup, 0});

  schedule_at(config_.tick_s, MobilityTick{});
  schedule_at(config_.tick_s, MaintenanceTick{});

  if (!config_.fixed_flows.empty()) {
    for (const FlowSpec& f : config_.fixed_flows) flows_.push_back({f, 0.0});
  } else {
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(config_.node_count - 1));
    for (std::size_t i = 0; i < config_.flow_count(); ++i) {
      FlowSpec f;
      f.source = pick(rng_.traffic());
      do f.dest = pick(rng_.traffic());
      while (f.dest == f.source);
      flows_.push_back({f, 0.0});
    }
  }
  const double period = 1.0 / config_.packets_per_second;
  std::uniform_real_distribution<double> jitter(0.0, period);
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    flows_[i].next_time = config_.traffic_start_s + jitter(rng_.traffic());
    schedule_at(flows_[i].next_time, TrafficEvent{i});
  }

  for (const ScheduledFailure& f : config_.failures) schedule_at(f.time, FailureEvent{f.node});
}

bool Simulator::in_range(NodeId a, NodeId b) const {
  return cbrp::in_range(nodes_[a].position, nodes_[b].position, config_.tx_range_m);
}

std::vector<NodeId> Simulator::broadcast(NodeId sender, Message message) {
  Node& from = nodes_.at(sender);
  if (!from.alive()) {
    ++metrics_.dead_sender_attempts;
    return {};
  }
  auto shared = std::make_shared<const Message>(std::move(message));
  std::vector<NodeId> receivers;
  for (const Node& n : nodes_) {
    if (n.id == sender || !n.alive() || !in_range(sender, n.id)) continue;
    receivers.push_back(n.id);
    schedule_in(config_.propagation_delay_s, DeliverEvent{sender, n.id, shared});
  }
  ++metrics_.transmissions;
  if (consume_transmit_energy(from.energy, config_.transmit_cost)) kill(from);
  return receivers;
}

UnicastOutcome Simulator::unicast(NodeId sender, NodeId next_hop, Message message) {
  Node& from = nodes_.at(sender);
  if (!from.alive()) {
    ++metrics_.dead_sender_attempts;
    return UnicastOutcome::LinkFailure;
  }
  const Node& to = nodes_.at(next_hop);
  const bool ok = next_hop != sender && to.alive() && in_range(sender, next_hop);
  if (ok) {
    if (std::holds_alternative<DataPacket>(message)) ++in_transit_;
    schedule_in(config_.propagation_delay_s,
                DeliverEvent{sender, next_hop, std::make_shared<const Message>(std::move(message))});
  }
  ++metrics_.transmissions;
  if (consume_transmit_energy(from.energy, config_.transmit_cost)) kill(from);
  return ok ? UnicastOutcome::Delivered : UnicastOutcome::LinkFailure;
}

RunMetrics Simulator::run_until(double t_end) {
  while (auto event = queue_.pop_until(t_end)) dispatch(*event);
  queue_.advance_to(t_end);
  return metrics();
}

RunMetrics Simulator::metrics() const {
  RunMetrics m = metrics_;
  m.in_flight = in_transit_;
  for (const Node& n : nodes_) m.in_flight += n.routing.queued();
  return m;
}

void Simulator::set_role(Node& node, Role role) {
  ClusterState& st = node.cluster;
  const Role old = st.role;
  if (old == role || old == Role::Dead) return;
  if (old == Role::ClusterHead) st.head_time_total += now() - st.head_since;
  if (role == Role::ClusterHead) {
    st.head_since = now();
    ++metrics_.head_changes;
  }
  if (role == Role::Undecided && (old == Role::ClusterHead || old == Role::ClusterMember))
    ++metrics_.cluster_reformations;
  st.role = role;
  trace(TraceKind::RoleChange, node.id, static_cast<NodeId>(role), static_cast<std::uint64_t>(old));
}

void Simulator::kill(Node& node) {
  if (!node.alive()) return;
  node.energy.remaining = std::min(node.energy.remaining, 0.0);
  set_role(node, Role::Dead);
  if (node.cluster.undecided_timer) cancel(*node.cluster.undecided_timer);
  node.cluster.undecided_timer.reset();
  ++metrics_.deaths;
  trace(TraceKind::Death, node.id);
  routing::on_node_death(*this, node);
}

void Simulator::record_delivery(const DataPacket& packet) {
  ++metrics_.packets_delivered;
  trace(TraceKind::Delivered, packet.dest, packet.source, packet.id);
}

void Simulator::record_drop(const DataPacket& packet, DropCause cause, NodeId at) {
  ++metrics_.dropped[static_cast<std::size_t>(cause)];
  trace(TraceKind::Dropped, at, static_cast<NodeId>(cause), packet.id);
}

void Simulator::digest(std::uint64_t value) {
  // FNV-1a over 64-bit words.
  std::uint64_t h = metrics_.trace_digest == 0 ? 0xcbf29ce484222325ULL : metrics_.trace_digest;
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  metrics_.trace_digest = h;
}

void Simulator::trace(TraceKind kind, NodeId node, NodeId other, std::uint64_t detail, double dist) {
  digest(std::bit_cast<std::uint64_t>(now()));
  digest((static_cast<std::uint64_t>(kind) << 56) ^ (static_cast<std::uint64_t>(node) << 24) ^ other);
  digest(detail);
  if (config_.record_trace) trace_.push_back({now(), kind, node, other, detail, dist});
}

void Simulator::dispatch(const Event& event) {
  ++metrics_.events_processed;
  digest(std::bit_cast<std::uint64_t>(event.time));
  digest(event.kind.index());
  std::visit(
      [this](const auto& ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, DeliverEvent>) {
          deliver(ev);
        } else if constexpr (std::is_same_v<T, TimerEvent>) {
          on_timer(ev);
        } else if constexpr (std::is_same_v<T, MobilityTick>) {
          on_mobility_tick();
        } else if constexpr (std::is_same_v<T, MaintenanceTick>) {
          on_maintenance_tick();
        } else if constexpr (std::is_same_v<T, TrafficEvent>) {
          on_traffic(ev.flow);
        } else if constexpr (std::is_same_v<T, FailureEvent>) {
          kill(nodes_.at(ev.node));
        }
      },
      event.kind);
}

void Simulator::deliver(const DeliverEvent& event) {
  Node& to = nodes_.at(event.receiver);
  digest((static_cast<std::uint64_t>(event.sender) << 32) | event.receiver);
  const Message& message = *event.message;
  const bool is_data = std::holds_alternative<DataPacket>(message);
  if (is_data) --in_transit_;
  if (!to.alive()) {
    if (is_data) record_drop(std::get<DataPacket>(message), DropCause::DeadForwarder, to.id);
    return;
  }
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Hello>) {
          cluster::on_hello(*this, to, m);
        } else if constexpr (std::is_same_v<T, SecondaryAnnounce>) {
          cluster::on_secondary_announce(*this, to, m);
        } else if constexpr (std::is_same_v<T, RouteRequest>) {
          routing::on_route_request(*this, to, m);
        } else if constexpr (std::is_same_v<T, RouteReply>) {
          routing::on_route_reply(*this, to, m);
        } else if constexpr (std::is_same_v<T, RouteError>) {
          routing::on_route_error(*this, to, m);
        } else if constexpr (std::is_same_v<T, DataPacket>) {
          routing::on_data(*this, to, m);
        }
      },
      message);
}

void Simulator::on_timer(const TimerEvent& event) {
  Node& n = nodes_.at(event.node);
  digest((static_cast<std::uint64_t>(event.node) << 8) | static_cast<std::uint64_t>(event.kind));
  if (!n.alive()) return;
  switch (event.kind) {
    case TimerKind::Startup: cluster::on_startup(*this, n); break;
    case TimerKind::Hello: cluster::on_hello_timer(*this, n); break;
    case TimerKind::Undecided: cluster::on_undecided_timeout(*this, n); break;
    case TimerKind::RouteRetry: routing::on_retry_timer(*this, n, event.tag); break;
  }
}

void Simulator::on_mobility_tick() {
  const Area area = config_.area();
  const MobilityParams params = config_.mobility();
  for (Node& n : nodes_) {
    if (!n.alive()) continue;
    mobility_tick(n.position, n.mobility, config_.tick_s, area, params, n.waypoint_rng);
  }
  schedule_in(config_.tick_s, MobilityTick{});
}

void Simulator::on_maintenance_tick() {
  for (Node& n : nodes_) cluster::on_maintenance(*this, n);
  schedule_in(config_.tick_s, MaintenanceTick{});
}

void Simulator::on_traffic(std::size_t flow) {
  ActiveFlow& f = flows_.at(flow);
  Node& source = nodes_.at(f.spec.source);
  if (!source.alive()) return;
  routing::originate(*this, source, f.spec.dest);
  f.next_time += 1.0 / config_.packets_per_second;
  schedule_at(f.next_time, TrafficEvent{flow});
}

}  // namespace cbrp
