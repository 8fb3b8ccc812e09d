#include "cbrp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "cbrp/simulator.hpp"

namespace cbrp {

RunMetrics run_scenario(const ScenarioConfig& config) {
  Simulator sim(config);
  return sim.run_until(config.duration_s);
}

std::vector<std::optional<double>> SweepCell::pdrs() const {
  std::vector<std::optional<double>> out;
  for (const auto& r : runs) out.push_back(pdr(r.metrics));
  return out;
}

const SweepCell* SweepResult::find(std::size_t node_count, ProtocolMode mode) const {
  for (const auto& c : cells)
    if (c.node_count == node_count && c.mode == mode) return &c;
  return nullptr;
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (!v) continue;
    sum += *v;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

SweepResult sweep(const SweepSpec& spec) {
  if (spec.replicates < 1) throw ConfigError("replicates", "must be at least 1");

  SweepResult result;
  struct Job {
    std::size_t cell;
    std::size_t replicate;
  };
  std::vector<Job> jobs;
  for (std::size_t n : spec.node_counts) {
    for (ProtocolMode mode : spec.modes) {
      SweepCell cell;
      cell.node_count = n;
      cell.mode = mode;
      cell.runs.resize(spec.replicates);
      for (std::size_t r = 0; r < spec.replicates; ++r) {
        cell.runs[r].seed = spec.base.seed + r;
        jobs.push_back({result.cells.size(), r});
      }
      result.cells.push_back(std::move(cell));
    }
  }
  // Validate every cell up front so errors surface before any thread starts.
  for (const auto& cell : result.cells) {
    ScenarioConfig c = spec.base;
    c.node_count = cell.node_count;
    c.protocol_mode = cell.mode;
    c.validate();
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      SweepCell& cell = result.cells[jobs[i].cell];
      SweepRun& run = cell.runs[jobs[i].replicate];
      ScenarioConfig c = spec.base;
      c.node_count = cell.node_count;
      c.protocol_mode = cell.mode;
      c.seed = run.seed;
      c.record_trace = false;
      try {
        run.metrics = run_scenario(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);

  for (auto& cell : result.cells) cell.mean_pdr = mean_of(cell.pdrs());
  return result;
}

namespace {

std::string format_pdr(std::optional<double> value) {
  if (!value) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *value);
  return buf;
}

}  // namespace

std::string csv_header() {
  return "row,node_count,mode,seed,pdr,sent,delivered,drop_no_route,drop_route_error,"
         "drop_dead_forwarder,drop_dead_sender,in_flight,reformations,head_changes";
}

std::string metrics_csv_row(const std::string& row, std::size_t node_count, ProtocolMode mode,
                            std::uint64_t seed, const RunMetrics& m) {
  std::ostringstream os;
  os << row << ',' << node_count << ',' << to_string(mode) << ',' << seed << ',' << format_pdr(pdr(m)) << ','
     << m.packets_sent << ',' << m.packets_delivered;
  for (auto d : m.dropped) os << ',' << d;
  os << ',' << m.in_flight << ',' << m.cluster_reformations << ',' << m.head_changes;
  return os.str();
}

std::string to_csv(const SweepResult& result) {
  std::ostringstream os;
  os << csv_header() << '\n';
  for (const auto& cell : result.cells) {
    RunMetrics total;
    for (std::size_t r = 0; r < cell.runs.size(); ++r) {
      const RunMetrics& m = cell.runs[r].metrics;
      os << metrics_csv_row(std::to_string(r), cell.node_count, cell.mode, cell.runs[r].seed, m) << '\n';
      total.packets_sent += m.packets_sent;
      total.packets_delivered += m.packets_delivered;
      for (std::size_t i = 0; i < kDropCauseCount; ++i) total.dropped[i] += m.dropped[i];
      total.in_flight += m.in_flight;
      total.cluster_reformations += m.cluster_reformations;
      total.head_changes += m.head_changes;
    }
    // Mean row: the pdr column is the mean of per-seed PDRs, the counts are
    // totals over the replicates.
    std::ostringstream mean;
    mean << "mean," << cell.node_count << ',' << to_string(cell.mode) << ",," << format_pdr(cell.mean_pdr) << ','
         << total.packets_sent << ',' << total.packets_delivered;
    for (auto d : total.dropped) mean << ',' << d;
    mean << ',' << total.in_flight << ',' << total.cluster_reformations << ',' << total.head_changes;
    os << mean.str() << '\n';
  }
  return os.str();
}

std::string format_metrics(const RunMetrics& m) {
  std::ostringstream os;
  os << "pdr " << (pdr(m) ? format_pdr(pdr(m)) : std::string("absent")) << '\n'
     << "sent " << m.packets_sent << '\n'
     << "delivered " << m.packets_delivered << '\n';
  for (std::size_t i = 0; i < kDropCauseCount; ++i)
    os << "dropped " << to_string(static_cast<DropCause>(i)) << ' ' << m.dropped[i] << '\n';
  os << "in_flight " << m.in_flight << '\n'
     << "reformations " << m.cluster_reformations << '\n'
     << "head_changes " << m.head_changes << '\n'
     << "failovers " << m.failovers << '\n'
     << "deaths " << m.deaths << '\n'
     << "route_discoveries " << m.route_discoveries << '\n'
     << "secondary_substitutions " << m.secondary_substitutions << '\n'
     << "salvages " << m.salvages << '\n'
     << "route_errors " << m.route_errors << '\n'
     << "transmissions " << m.transmissions << '\n'
     << "events " << m.events_processed << '\n';
  char digest[24];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(m.trace_digest));
  os << "trace_digest " << digest << '\n';
  return os.str();
}

}  // namespace cbrp
