#include "cbrp/scenarios.hpp"

#include <cstdio>
#include <sstream>

#include "cbrp/simulator.hpp"

namespace cbrp {

ScenarioConfig failover_trace_config(ProtocolMode mode, std::uint64_t seed) {
  ScenarioConfig c;
  c.protocol_mode = mode;
  c.seed = seed;
  c.node_count = 5;
  c.node_speed_mps = 0.0;
  c.duration_s = 30.0;
  c.initial_energy = 1e6;
  c.fixed_positions = {{243, 109}, {150, 150}, {155, 166}, {179, 144}, {88, 146}};
  c.fixed_flows = {{failover_trace::kSource, failover_trace::kDest}};
  c.failures = {{failover_trace::kHead, failover_trace::kFailureTime}};
  c.record_trace = true;
  return c;
}

ScenarioConfig head_death_stress_config(ProtocolMode mode, std::uint64_t seed) {
  ScenarioConfig c;
  c.protocol_mode = mode;
  c.seed = seed;
  // Defaults everywhere else; a head pays 2 units/s on top of its sends.
  c.head_energy_drain_per_s = 2.0;
  return c;
}

bool TraceReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

namespace {

std::string count(const char* what, std::uint64_t n) { return std::string(what) + "=" + std::to_string(n); }

std::string join(const std::vector<NodeId>& ids) {
  std::string s = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i]);
  return s + "]";
}

}  // namespace

std::vector<std::string> trace_violations(const Simulator& sim) {
  std::vector<std::string> out;
  const double range = sim.config().tx_range_m;
  for (const auto& r : sim.trace_log()) {
    if (r.kind == TraceKind::DataHop && r.distance > range) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "t=%.3f hop %u->%u spans %.2f m", r.time, r.node, r.other, r.distance);
      out.emplace_back(buf);
    }
  }
  if (sim.metrics().path_violations > 0) out.push_back(count("path_violations", sim.metrics().path_violations));
  return out;
}

std::string format_trace(const Simulator& sim) {
  std::ostringstream os;
  for (const auto& r : sim.trace_log()) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%10.4f %-12s node=%u other=%u detail=%llu", r.time,
                  std::string(to_string(r.kind)).c_str(), r.node, r.other,
                  static_cast<unsigned long long>(r.detail));
    os << buf;
    if (r.kind == TraceKind::RoleChange) {
      os << " (" << to_string(static_cast<Role>(r.detail)) << " -> " << to_string(static_cast<Role>(r.other)) << ")";
    } else if (r.kind == TraceKind::DataHop) {
      std::snprintf(buf, sizeof buf, " dist=%.2f", r.distance);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

TraceReport run_failover_trace(ProtocolMode mode, std::uint64_t seed) {
  return run_failover_trace(failover_trace_config(mode, seed));
}

TraceReport run_failover_trace(const ScenarioConfig& input) {
  using namespace failover_trace;
  ScenarioConfig config = input;
  config.record_trace = true;

  TraceReport report;
  report.mode = config.protocol_mode;
  auto check = [&](std::string name, bool ok, std::string detail = {}) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  Simulator sim(config);
  const double fail_at = config.failures.empty() ? config.duration_s : config.failures.front().time;
  sim.run_until(fail_at - 1e-6);

  // Pre-failure layout.
  const Node& ch2 = sim.node(kHead);
  check("CH2 heads D's cluster", ch2.cluster.role == Role::ClusterHead && sim.node(kDest).cluster.head == kHead);
  const auto route_it = sim.node(kSource).routing.routes.find(kDest);
  const bool via_head = route_it != sim.node(kSource).routing.routes.end() &&
                        route_it->second == std::vector<NodeId>{kSource, kGateway, kHead, kDest};
  check("route S,G,CH2,D established", via_head,
        route_it == sim.node(kSource).routing.routes.end() ? "no route" : join(route_it->second));
  if (config.protocol_mode == ProtocolMode::Ecbrp)
    check("SCH2 is CH2's secondary", ch2.cluster.secondary == kSecondary);
  const RunMetrics before = sim.metrics();

  report.metrics = sim.run_until(config.duration_s);
  const RunMetrics& m = report.metrics;

  check("conservation", m.conserved(),
        count("sent", m.packets_sent) + " " + count("delivered", m.packets_delivered) + " " +
            count("dropped", m.dropped_total()) + " " + count("in_flight", m.in_flight));
  const auto violations = trace_violations(sim);
  check("loop-free, feasible hops", violations.empty(), violations.empty() ? "" : violations.front());

  if (config.protocol_mode == ProtocolMode::Ecbrp) {
    check("secondary substitution used", m.secondary_substitutions > before.secondary_substitutions,
          count("substitutions", m.secondary_substitutions));
    check("every packet delivered", m.packets_delivered == m.packets_sent && m.packets_sent > 0,
          count("sent", m.packets_sent) + " " + count("delivered", m.packets_delivered));
    check("zero Undecided transitions", m.cluster_reformations == 0, count("reformations", m.cluster_reformations));
    check("SCH2 promoted", sim.node(kSecondary).cluster.role == Role::ClusterHead && m.failovers >= 1,
          count("failovers", m.failovers));
    bool via_secondary = false, via_dead_head = false;
    for (const auto& r : sim.trace_log()) {
      if (r.kind != TraceKind::DataHop || r.time < fail_at) continue;
      via_secondary |= r.node == kGateway && r.other == kSecondary;
      via_dead_head |= r.other == kHead;
    }
    check("post-failure hops G->SCH2, none into CH2", via_secondary && !via_dead_head);
  } else {
    check("reformation or route-error drop",
          m.cluster_reformations >= 1 || m.drops(DropCause::RouteError) >= 1,
          count("reformations", m.cluster_reformations) + " " +
              count("route_error_drops", m.drops(DropCause::RouteError)));
  }
  report.log = format_trace(sim);
  return report;
}

}  // namespace cbrp
