#pragma once

#include <string>
#include <vector>

#include "cbrp/config.hpp"
#include "cbrp/metrics.hpp"

namespace cbrp {

class Simulator;

// Five static nodes: S(0) heads its own cluster, G(3) bridges to the cluster
// of CH2(1), whose members are SCH2(2) and D(4). SCH2 is in range of G and D,
// so it is CH2's natural secondary. The flow runs S -> D; CH2 dies mid-flow.
namespace failover_trace {
inline constexpr NodeId kSource = 0;
inline constexpr NodeId kHead = 1;
inline constexpr NodeId kSecondary = 2;
inline constexpr NodeId kGateway = 3;
inline constexpr NodeId kDest = 4;
inline constexpr double kFailureTime = 20.1;
}  // namespace failover_trace

ScenarioConfig failover_trace_config(ProtocolMode mode, std::uint64_t seed = 1);

struct TraceCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct TraceReport {
  ProtocolMode mode = ProtocolMode::Ecbrp;
  RunMetrics metrics;
  std::vector<TraceCheck> checks;
  std::string log;  // one line per trace record

  bool passed() const;
};

// Runs the failover trace in one mode and evaluates that mode's expectations.
TraceReport run_failover_trace(ProtocolMode mode, std::uint64_t seed = 1);

// Same as above but for a caller-supplied config (CLI overrides).
TraceReport run_failover_trace(const ScenarioConfig& config);

// Random-waypoint network where heads burn energy fast, so heads die
// throughout the run.
ScenarioConfig head_death_stress_config(ProtocolMode mode, std::uint64_t seed);

// Each DataHop record lies within range and every recorded path is loop-free.
std::vector<std::string> trace_violations(const Simulator& sim);

std::string format_trace(const Simulator& sim);

}  // namespace cbrp
