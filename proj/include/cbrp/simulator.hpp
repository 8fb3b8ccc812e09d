#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cbrp/cluster.hpp"
#include "cbrp/config.hpp"
#include "cbrp/event_queue.hpp"
#include "cbrp/metrics.hpp"
#include "cbrp/mobility.hpp"
#include "cbrp/rng.hpp"
#include "cbrp/routing.hpp"

namespace cbrp {

struct Node {
  NodeId id = 0;
  Position position;
  MobilityState mobility;
  Engine waypoint_rng;
  EnergyState energy;
  ClusterState cluster;
  RoutingState routing;

  bool alive() const { return cluster.role != Role::Dead; }
};

enum class UnicastOutcome { Delivered, LinkFailure };

enum class TraceKind : std::uint8_t {
  Hello,
  SecondaryAnnounce,
  RouteRequest,
  RouteReply,
  RouteError,
  DataHop,
  Delivered,
  Dropped,
  RoleChange,
  Death,
  Failover,
  Substitution,
  Salvage,
};

std::string_view to_string(TraceKind kind);

struct TraceRecord {
  double time = 0.0;
  TraceKind kind = TraceKind::Hello;
  NodeId node = 0;
  NodeId other = 0;
  std::uint64_t detail = 0;
  double distance = 0.0;  // DataHop only

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct ActiveFlow {
  FlowSpec spec;
  double next_time = 0.0;
};

// One deterministic simulation run: nodes, radio, clock and counters.
class Simulator {
 public:
  // Validates `config` (throws ConfigError), places nodes and schedules the
  // startup, tick and traffic events.
  explicit Simulator(ScenarioConfig config);

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  const ScenarioConfig& config() const { return config_; }
  double now() const { return queue_.now(); }

  std::span<Node> nodes() { return nodes_; }
  std::span<const Node> nodes() const { return nodes_; }
  Node& node(NodeId id) { return nodes_.at(id); }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  const std::vector<ActiveFlow>& flows() const { return flows_; }

  EventHandle schedule_at(double time, EventKind kind) { return queue_.schedule(time, std::move(kind)); }
  EventHandle schedule_in(double delay, EventKind kind) { return queue_.schedule(now() + delay, std::move(kind)); }
  void cancel(EventHandle handle) { queue_.cancel(handle); }

  // Unit-disk broadcast to every alive node in range. Charges the sender one
  // transmission; a dead sender is a counted no-op.
  std::vector<NodeId> broadcast(NodeId sender, Message message);

  // Point-to-point send. Link failure when the receiver is dead or out of
  // range; the sender pays for the attempt either way.
  UnicastOutcome unicast(NodeId sender, NodeId next_hop, Message message);

  // Processes every event with time <= t_end and returns the metrics then.
  RunMetrics run_until(double t_end);

  RunMetrics metrics() const;
  RunMetrics& counters() { return metrics_; }

  // Role bookkeeping shared by the clustering handlers.
  void set_role(Node& node, Role role);
  void kill(Node& node);

  void record_delivery(const DataPacket& packet);
  void record_drop(const DataPacket& packet, DropCause cause, NodeId at);
  std::uint64_t next_packet_id() { return next_packet_id_++; }

  void trace(TraceKind kind, NodeId node, NodeId other = 0, std::uint64_t detail = 0, double dist = 0.0);
  const std::vector<TraceRecord>& trace_log() const { return trace_; }

  bool in_range(NodeId a, NodeId b) const;

 private:
  void dispatch(const Event& event);
  void deliver(const DeliverEvent& event);
  void on_timer(const TimerEvent& event);
  void on_mobility_tick();
  void on_maintenance_tick();
  void on_traffic(std::size_t flow);
  void digest(std::uint64_t value);

  ScenarioConfig config_;
  EventQueue queue_;
  RngStreams rng_;
  std::vector<Node> nodes_;
  std::vector<ActiveFlow> flows_;
  RunMetrics metrics_;
  std::uint64_t in_transit_ = 0;
  std::uint64_t next_packet_id_ = 0;
  std::vector<TraceRecord> trace_;
};

}  // namespace cbrp
