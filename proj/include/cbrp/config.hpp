#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cbrp/mobility.hpp"
#include "cbrp/types.hpp"
#include "cbrp/wca.hpp"

namespace cbrp {

// Raised for invalid scenario settings; key() names the offending setting.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct FlowSpec {
  NodeId source = 0;
  NodeId dest = 0;
};

struct ScheduledFailure {
  NodeId node = 0;
  double time = 0.0;
};

struct ScenarioConfig {
  // World and radio.
  std::size_t node_count = 30;
  double area_width_m = 400.0;
  double area_height_m = 400.0;
  double tx_range_m = 80.0;
  double node_speed_mps = 20.0;
  double pause_time_s = 100.0;
  double initial_energy = 100.0;
  double transmit_cost = 1.0;
  double head_energy_drain_per_s = 0.0;

  // Engine.
  std::uint64_t seed = 1;
  double duration_s = 300.0;
  double tick_s = 1.0;
  double propagation_delay_s = 0.0;

  // Clustering.
  ProtocolMode protocol_mode = ProtocolMode::Ecbrp;
  WeightFactors factors;
  std::size_t ideal_degree = 2;
  HeadTimeMode p_v_mode = HeadTimeMode::ClusterHeadTime;
  double hello_interval_s = 1.0;
  double stale_timeout_intervals = 3.0;
  double undecided_timer_intervals = 2.0;

  // Routing and traffic.
  int max_retries = 2;
  double rreq_timeout_s = 2.0;
  std::size_t flows = 0;  // 0: one flow per ten nodes, at least one
  double packets_per_second = 4.0;
  double traffic_start_s = 5.0;
  bool route_cache = false;
  int max_repairs = 3;

  // Scripted scenarios; empty means random.
  std::vector<Position> fixed_positions;
  std::vector<FlowSpec> fixed_flows;
  std::vector<ScheduledFailure> failures;
  bool record_trace = false;

  Area area() const { return {area_width_m, area_height_m}; }
  MobilityParams mobility() const { return {node_speed_mps, pause_time_s}; }
  double stale_timeout_s() const { return stale_timeout_intervals * hello_interval_s; }
  double undecided_timer_s() const { return undecided_timer_intervals * hello_interval_s; }
  std::size_t flow_count() const;

  // Throws ConfigError naming the first offending key.
  void validate() const;

  // Applies one `key = value` setting; throws ConfigError on unknown keys
  // or unparsable values.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  // Flat text form, one `key = value` per line in key_names() order.
  std::string to_text() const;
};

// Every settable key, in documentation order.
const std::vector<std::string>& config_key_names();

// Parses `key = value` lines; `#` starts a comment. Later lines override
// earlier ones.
void apply_config_text(ScenarioConfig& config, std::string_view text);
void apply_config_file(ScenarioConfig& config, const std::filesystem::path& path);

}  // namespace cbrp
