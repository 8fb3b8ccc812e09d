// cbrp-sim: single runs, PDR sweeps and the scripted failover trace.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "cbrp/config.hpp"
#include "cbrp/harness.hpp"
#include "cbrp/scenarios.hpp"
#include "cbrp/simulator.hpp"
#include "cbrp/snapshot.hpp"

namespace {

constexpr const char* kConfigEnv = "CBRP_SIM_CONFIG";

// Options shared by every subcommand. Values stay as text and go through
// ScenarioConfig::set so the CLI and config files share one parser.
struct CommonOptions {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App& app, bool with_config_file) {
    if (with_config_file)
      app.add_option("--config", config_path, std::string("key = value config file (default: $") + kConfigEnv + ")");
    for (const std::string& key : cbrp::config_key_names()) {
      std::string names = "--" + key;
      if (key == "node_count") names += ",--nodes";
      if (key == "protocol_mode") names += ",--mode";
      app.add_option_function<std::string>(
          names, [this, key](const std::string& v) { overrides[key] = v; }, "config key " + key);
    }
  }

  void apply(cbrp::ScenarioConfig& config, bool with_config_file) const {
    if (with_config_file) {
      std::string path = config_path;
      if (path.empty())
        if (const char* env = std::getenv(kConfigEnv)) path = env;
      if (!path.empty()) cbrp::apply_config_file(config, path);
    }
    for (const auto& [key, value] : overrides) config.set(key, value);
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoul(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw cbrp::ConfigError("counts", "expected comma-separated node counts, got '" + text + "'");
    }
  }
  if (out.empty()) throw cbrp::ConfigError("counts", "no node counts given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster-based routing simulator (CBRP and ECBRP)"};
  app.require_subcommand(1);

  CommonOptions run_opts, sweep_opts, trace_opts;

  auto* run = app.add_subcommand("run", "Run one scenario and print its metrics");
  std::string run_out, run_csv, snapshot_path;
  std::optional<cbrp::NodeId> highlight;
  bool circles = false, labels = false, dump_config = false;
  run_opts.attach(*run, true);
  run->add_option("--out", run_out, "Write metrics here instead of stdout");
  run->add_option("--csv", run_csv, "Also write the metrics as a one-row CSV");
  run->add_option("--snapshot", snapshot_path, "Write an SVG topology snapshot at the end of the run");
  run->add_option("--highlight", highlight, "Node whose range circle and weight are drawn");
  run->add_flag("--range-circles", circles, "Draw every node's range");
  run->add_flag("--weights", labels, "Label every node with its weight");
  run->add_flag("--print-config", dump_config, "Print the effective configuration first");

  auto* sw = app.add_subcommand("sweep", "PDR versus node count for both protocols, as CSV");
  std::string counts = "5,10,20,30,40,50,60", sweep_out, modes = "both";
  std::size_t replicates = 5;
  unsigned threads = 0;
  sweep_opts.attach(*sw, true);
  sw->add_option("--counts", counts, "Comma-separated node counts")->capture_default_str();
  sw->add_option("--replicates", replicates, "Seeds per cell, starting at --seed")->capture_default_str();
  sw->add_option("--modes", modes, "cbrp, ecbrp or both")->capture_default_str();
  sw->add_option("--threads", threads, "Worker threads (0: all cores)");
  sw->add_option("--out", sweep_out, "CSV path (default stdout)");

  auto* tr = app.add_subcommand("trace", "Scripted head-failure trace; exit status reports pass/fail");
  std::string trace_mode = "both", trace_out;
  bool quiet = false;
  trace_opts.attach(*tr, false);
  tr->add_option("--which", trace_mode, "cbrp, ecbrp or both")->capture_default_str();
  tr->add_option("--out", trace_out, "Write the event log here");
  tr->add_flag("--quiet", quiet, "Only print pass/fail lines");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      cbrp::ScenarioConfig config;
      run_opts.apply(config, true);
      if (dump_config) std::cout << config.to_text() << '\n';
      cbrp::Simulator sim(config);
      const cbrp::RunMetrics m = sim.run_until(config.duration_s);
      write_text(run_out, cbrp::format_metrics(m));
      if (!run_csv.empty())
        write_text(run_csv, cbrp::csv_header() + "\n" +
                                cbrp::metrics_csv_row("0", config.node_count, config.protocol_mode, config.seed, m) +
                                "\n");
      if (!snapshot_path.empty()) {
        cbrp::SnapshotOptions opt;
        opt.range_circles = circles;
        opt.weight_labels = labels;
        opt.highlight = highlight;
        opt.title = std::string(cbrp::to_string(config.protocol_mode)) + " t=" + std::to_string(config.duration_s);
        cbrp::write_snapshot(sim, snapshot_path, opt);
      }
      return 0;
    }

    if (*sw) {
      cbrp::SweepSpec spec;
      sweep_opts.apply(spec.base, true);
      spec.node_counts = parse_counts(counts);
      spec.replicates = replicates;
      spec.threads = threads;
      if (modes == "cbrp") spec.modes = {cbrp::ProtocolMode::Cbrp};
      else if (modes == "ecbrp") spec.modes = {cbrp::ProtocolMode::Ecbrp};
      else if (modes != "both") throw cbrp::ConfigError("modes", "expected cbrp|ecbrp|both, got '" + modes + "'");
      write_text(sweep_out, cbrp::to_csv(cbrp::sweep(spec)));
      return 0;
    }

    if (*tr) {
      std::vector<cbrp::ProtocolMode> which;
      if (trace_mode == "both" || trace_mode == "cbrp") which.push_back(cbrp::ProtocolMode::Cbrp);
      if (trace_mode == "both" || trace_mode == "ecbrp") which.push_back(cbrp::ProtocolMode::Ecbrp);
      if (which.empty()) throw cbrp::ConfigError("which", "expected cbrp|ecbrp|both, got '" + trace_mode + "'");

      bool ok = true;
      std::string log;
      for (cbrp::ProtocolMode mode : which) {
        cbrp::ScenarioConfig config = cbrp::failover_trace_config(mode);
        trace_opts.apply(config, false);
        config.protocol_mode = mode;
        const cbrp::TraceReport report = cbrp::run_failover_trace(config);
        for (const auto& c : report.checks) {
          std::cout << (c.passed ? "PASS " : "FAIL ") << cbrp::to_string(mode) << ": " << c.name;
          if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
          std::cout << '\n';
        }
        ok = ok && report.passed();
        log += "# " + std::string(cbrp::to_string(mode)) + "\n" + report.log;
      }
      if (!trace_out.empty()) write_text(trace_out, log);
      else if (!quiet) std::cout << log;
      std::cout << (ok ? "trace: PASS" : "trace: FAIL") << '\n';
      return ok ? 0 : 1;
    }
  } catch (const cbrp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
