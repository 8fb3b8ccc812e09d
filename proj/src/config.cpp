#include "cbrp/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace cbrp {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  // std::from_chars for double is available in libstdc++ 11.
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
  return value;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(std::string(key), "expected a non-negative integer, got '" + std::string(text) + "'");
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw ConfigError(std::string(key), "expected on|off, got '" + std::string(text) + "'");
}

// Shortest text that reads back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct KeySpec {
  std::string name;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define CBRP_DOUBLE_KEY(field)                                                              \
  KeySpec {                                                                                 \
    #field, [](ScenarioConfig& c, std::string_view v) { c.field = parse_double(#field, v); }, \
        [](const ScenarioConfig& c) { return format_double(c.field); }                      \
  }

#define CBRP_COUNT_KEY(field, type)                                                          \
  KeySpec {                                                                                  \
    #field,                                                                                  \
        [](ScenarioConfig& c, std::string_view v) {                                          \
          c.field = static_cast<type>(parse_unsigned(#field, v));                            \
        },                                                                                   \
        [](const ScenarioConfig& c) { return std::to_string(c.field); }                      \
  }

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      CBRP_COUNT_KEY(node_count, std::size_t),
      CBRP_DOUBLE_KEY(area_width_m),
      CBRP_DOUBLE_KEY(area_height_m),
      CBRP_DOUBLE_KEY(tx_range_m),
      CBRP_DOUBLE_KEY(node_speed_mps),
      CBRP_DOUBLE_KEY(pause_time_s),
      CBRP_DOUBLE_KEY(initial_energy),
      CBRP_DOUBLE_KEY(transmit_cost),
      CBRP_DOUBLE_KEY(head_energy_drain_per_s),
      CBRP_COUNT_KEY(seed, std::uint64_t),
      CBRP_DOUBLE_KEY(duration_s),
      CBRP_DOUBLE_KEY(tick_s),
      CBRP_DOUBLE_KEY(propagation_delay_s),
      KeySpec{"protocol_mode",
              [](ScenarioConfig& c, std::string_view v) {
                auto mode = parse_protocol_mode(v);
                if (!mode) throw ConfigError("protocol_mode", "expected cbrp|ecbrp, got '" + std::string(v) + "'");
                c.protocol_mode = *mode;
              },
              [](const ScenarioConfig& c) { return std::string(to_string(c.protocol_mode)); }},
      KeySpec{"w1", [](ScenarioConfig& c, std::string_view v) { c.factors.degree = parse_double("w1", v); },
              [](const ScenarioConfig& c) { return format_double(c.factors.degree); }},
      KeySpec{"w2", [](ScenarioConfig& c, std::string_view v) { c.factors.distance = parse_double("w2", v); },
              [](const ScenarioConfig& c) { return format_double(c.factors.distance); }},
      KeySpec{"w3", [](ScenarioConfig& c, std::string_view v) { c.factors.mobility = parse_double("w3", v); },
              [](const ScenarioConfig& c) { return format_double(c.factors.mobility); }},
      KeySpec{"w4", [](ScenarioConfig& c, std::string_view v) { c.factors.head_time = parse_double("w4", v); },
              [](const ScenarioConfig& c) { return format_double(c.factors.head_time); }},
      CBRP_COUNT_KEY(ideal_degree, std::size_t),
      KeySpec{"p_v_mode",
              [](ScenarioConfig& c, std::string_view v) {
                if (v == "ch_time") c.p_v_mode = HeadTimeMode::ClusterHeadTime;
                else if (v == "energy_consumed") c.p_v_mode = HeadTimeMode::EnergyConsumed;
                else throw ConfigError("p_v_mode", "expected ch_time|energy_consumed, got '" + std::string(v) + "'");
              },
              [](const ScenarioConfig& c) {
                return std::string(c.p_v_mode == HeadTimeMode::ClusterHeadTime ? "ch_time" : "energy_consumed");
              }},
      CBRP_DOUBLE_KEY(hello_interval_s),
      CBRP_DOUBLE_KEY(stale_timeout_intervals),
      CBRP_DOUBLE_KEY(undecided_timer_intervals),
      CBRP_COUNT_KEY(max_retries, int),
      CBRP_DOUBLE_KEY(rreq_timeout_s),
      CBRP_COUNT_KEY(flows, std::size_t),
      CBRP_DOUBLE_KEY(packets_per_second),
      CBRP_DOUBLE_KEY(traffic_start_s),
      KeySpec{"route_cache",
              [](ScenarioConfig& c, std::string_view v) { c.route_cache = parse_bool("route_cache", v); },
              [](const ScenarioConfig& c) { return std::string(c.route_cache ? "on" : "off"); }},
      CBRP_COUNT_KEY(max_repairs, int),
  };
  return table;
}

#undef CBRP_DOUBLE_KEY
#undef CBRP_COUNT_KEY

const KeySpec& find_key(std::string_view key) {
  const auto& table = key_table();
  auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& k) { return k.name == key; });
  if (it == table.end()) throw ConfigError(std::string(key), "unknown configuration key");
  return *it;
}

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace

std::size_t ScenarioConfig::flow_count() const {
  if (!fixed_flows.empty()) return fixed_flows.size();
  if (flows > 0) return flows;
  return std::max<std::size_t>(1, node_count / 10);
}

void ScenarioConfig::set(std::string_view key, std::string_view value) {
  find_key(key).set(*this, trim(value));
}

std::string ScenarioConfig::get(std::string_view key) const { return find_key(key).get(*this); }

std::string ScenarioConfig::to_text() const {
  std::string out;
  for (const auto& k : key_table()) out += k.name + " = " + k.get(*this) + "\n";
  return out;
}

const std::vector<std::string>& config_key_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& k : key_table()) n.push_back(k.name);
    return n;
  }();
  return names;
}

void ScenarioConfig::validate() const {
  require(node_count >= 2, "node_count", "at least 2 nodes are needed for routing");
  require(area_width_m > 0.0, "area_width_m", "must be positive");
  require(area_height_m > 0.0, "area_height_m", "must be positive");
  require(tx_range_m > 0.0, "tx_range_m", "must be positive");
  require(node_speed_mps >= 0.0, "node_speed_mps", "must be non-negative");
  require(pause_time_s >= 0.0, "pause_time_s", "must be non-negative");
  require(initial_energy > 0.0, "initial_energy", "must be positive");
  require(transmit_cost >= 0.0, "transmit_cost", "must be non-negative");
  require(head_energy_drain_per_s >= 0.0, "head_energy_drain_per_s", "must be non-negative");
  require(duration_s >= 0.0, "duration_s", "must be non-negative");
  require(tick_s > 0.0, "tick_s", "must be positive");
  require(propagation_delay_s >= 0.0, "propagation_delay_s", "must be non-negative");
  require(factors.degree >= 0.0, "w1", "must be non-negative");
  require(factors.distance >= 0.0, "w2", "must be non-negative");
  require(factors.mobility >= 0.0, "w3", "must be non-negative");
  require(factors.head_time >= 0.0, "w4", "must be non-negative");
  require(hello_interval_s > 0.0, "hello_interval_s", "must be positive");
  require(stale_timeout_intervals > 0.0, "stale_timeout_intervals", "must be positive");
  require(undecided_timer_intervals > 0.0, "undecided_timer_intervals", "must be positive");
  require(max_retries >= 0, "max_retries", "must be non-negative");
  require(rreq_timeout_s > 0.0, "rreq_timeout_s", "must be positive");
  require(packets_per_second > 0.0, "packets_per_second", "must be positive");
  require(traffic_start_s >= 0.0, "traffic_start_s", "must be non-negative");
  require(max_repairs >= 0, "max_repairs", "must be non-negative");
  if (!fixed_positions.empty()) {
    require(fixed_positions.size() == node_count, "fixed_positions", "one position per node required");
    for (const auto& p : fixed_positions) require(area().contains(p), "fixed_positions", "position outside the area");
  }
  for (const auto& f : fixed_flows) {
    require(f.source < node_count && f.dest < node_count, "fixed_flows", "flow endpoint out of range");
    require(f.source != f.dest, "fixed_flows", "flow source equals destination");
  }
  for (const auto& f : failures) require(f.node < node_count, "failures", "node id out of range");
}

void apply_config_text(ScenarioConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(std::string(line), "line " + std::to_string(line_no) + ": expected key = value");
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_config_file(ScenarioConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(config, buffer.str());
}

}  // namespace cbrp
