#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cbrp/config.hpp"
#include "cbrp/metrics.hpp"

namespace cbrp {

// Builds a simulator, runs it for config.duration_s and returns the metrics.
// Throws ConfigError on an invalid config.
RunMetrics run_scenario(const ScenarioConfig& config);

struct SweepSpec {
  std::vector<std::size_t> node_counts{5, 10, 20, 30, 40, 50, 60};
  std::vector<ProtocolMode> modes{ProtocolMode::Cbrp, ProtocolMode::Ecbrp};
  std::size_t replicates = 5;
  ScenarioConfig base;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepRun {
  std::uint64_t seed = 0;
  RunMetrics metrics;
};

struct SweepCell {
  std::size_t node_count = 0;
  ProtocolMode mode = ProtocolMode::Ecbrp;
  std::vector<SweepRun> runs;  // replicate order
  std::optional<double> mean_pdr;

  std::vector<std::optional<double>> pdrs() const;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // node_counts-major, then modes

  const SweepCell* find(std::size_t node_count, ProtocolMode mode) const;
};

// Replicate r of every cell uses seed base.seed + r, so modes are paired.
SweepResult sweep(const SweepSpec& spec);

// Mean of the present values; absent if none are.
std::optional<double> mean_of(const std::vector<std::optional<double>>& values);

// Column order:
// row,node_count,mode,seed,pdr,sent,delivered,drop_no_route,drop_route_error,
// drop_dead_forwarder,drop_dead_sender,in_flight,reformations,head_changes
// One row per run then one row=mean per cell. Absent PDR is an empty field.
std::string csv_header();
std::string to_csv(const SweepResult& result);
std::string metrics_csv_row(const std::string& row, std::size_t node_count, ProtocolMode mode,
                            std::uint64_t seed, const RunMetrics& metrics);

std::string format_metrics(const RunMetrics& metrics);

}  // namespace cbrp
