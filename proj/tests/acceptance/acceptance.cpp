// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cbrp/harness.hpp"
#include "cbrp/scenarios.hpp"
#include "cbrp/simulator.hpp"
#include "cbrp/wca.hpp"

using namespace cbrp;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

// Every run made anywhere in this suite, for the loop/conservation criterion.
struct Ledger {
  std::size_t runs = 0;
  std::size_t not_conserved = 0;
  std::uint64_t path_violations = 0;
  std::uint64_t infeasible_hops = 0;

  void add(const RunMetrics& m) {
    ++runs;
    if (!m.conserved()) ++not_conserved;
    path_violations += m.path_violations;
  }
  void add(const Simulator& sim) {
    add(sim.metrics());
    const double range = sim.config().tx_range_m;
    for (const auto& r : sim.trace_log())
      if (r.kind == TraceKind::DataHop && r.distance > range) ++infeasible_hops;
  }
};

Ledger ledger;

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. ECBRP PDR is not below CBRP at any node count, and above it on average.
Outcome pdr_sweep() {
  SweepSpec spec;
  spec.node_counts = {5, 10, 20, 30, 40, 50, 60};
  spec.replicates = 5;
  const SweepResult result = sweep(spec);
  for (const auto& cell : result.cells)
    for (const auto& run : cell.runs) ledger.add(run.metrics);

  Outcome out{true, ""};
  double total = 0.0;
  for (std::size_t n : spec.node_counts) {
    const auto c = result.find(n, ProtocolMode::Cbrp)->mean_pdr;
    const auto e = result.find(n, ProtocolMode::Ecbrp)->mean_pdr;
    if (!c || !e) return {false, "n=" + std::to_string(n) + " has no PDR"};
    const double diff = *e - *c;
    total += diff;
    out.detail += "n=" + std::to_string(n) + fmt(":%+.4f ", diff);
    if (diff < -0.02) out.passed = false;
  }
  const double mean = total / static_cast<double>(spec.node_counts.size());
  out.detail += fmt("mean %+.4f", mean);
  if (!(mean > 0.0)) out.passed = false;
  return out;
}

// 2. weight() against a separately written evaluation of the formula.
Outcome wca_oracle() {
  const WeightFactors paper{0.7, 0.2, 0.05, 0.05};
  auto oracle = [](const double c[4], const double w[4]) {
    long double sum = 0.0L;
    for (int i = 0; i < 4; ++i) sum += static_cast<long double>(w[i]) * static_cast<long double>(c[i]);
    return static_cast<double>(sum);
  };
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> deg(0, 40), dist(0, 3200), mob(0, 40), ch(0, 600), fac(0, 1);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double c[4] = {std::floor(deg(rng)), dist(rng), mob(rng), ch(rng)};
    const bool own = i % 2 == 1;
    const double w[4] = {own ? fac(rng) : 0.7, own ? fac(rng) : 0.2, own ? fac(rng) : 0.05, own ? fac(rng) : 0.05};
    const double got = weight({c[0], c[1], c[2], c[3]}, {w[0], w[1], w[2], w[3]});
    const double want = oracle(c, w);
    const double rel = want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
    worst = std::max(worst, rel);
  }
  const bool hand = weight({0, 70, 0, 0}, paper) == 14.0 && weight({1, 0, 0, 0}, paper) == 0.7;
  return {worst <= 1e-12 && hand, fmt("max relative error %.3g", worst) + (hand ? ", hand values exact" : ", hand values WRONG")};
}

// 3. Scripted head failure in both modes.
Outcome failover() {
  const auto t0 = std::chrono::steady_clock::now();
  const TraceReport e = run_failover_trace(ProtocolMode::Ecbrp);
  const TraceReport c = run_failover_trace(ProtocolMode::Cbrp);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto* r : {&e, &c}) {
    Simulator sim(failover_trace_config(r->mode));
    sim.run_until(sim.config().duration_s);
    ledger.add(sim);
  }
  std::string detail;
  for (const auto* r : {&e, &c})
    for (const auto& ch : r->checks)
      if (!ch.passed) detail += std::string(to_string(r->mode)) + " failed '" + ch.name + "' " + ch.detail + "; ";
  detail += "ecbrp substitutions=" + std::to_string(e.metrics.secondary_substitutions) +
            " delivered=" + std::to_string(e.metrics.packets_delivered) + "/" + std::to_string(e.metrics.packets_sent) +
            " reformations=" + std::to_string(e.metrics.cluster_reformations) +
            "; cbrp reformations=" + std::to_string(c.metrics.cluster_reformations) +
            " route_error_drops=" + std::to_string(c.metrics.drops(DropCause::RouteError)) + fmt("; %.3f s", secs);
  return {e.passed() && c.passed() && secs < 1.0, detail};
}

// 4. Cluster structure on random static topologies once formation settles.
Outcome invariants() {
  std::mt19937_64 pick(7);
  std::uniform_int_distribution<std::size_t> count(2, 40);
  std::size_t topologies = 0, heads = 0, members = 0;
  std::string first_failure;
  auto fail = [&](const std::string& what) {
    if (first_failure.empty()) first_failure = what;
  };

  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const std::size_t n = count(pick);
    for (ProtocolMode mode : {ProtocolMode::Ecbrp, ProtocolMode::Cbrp}) {
      ScenarioConfig cfg;
      cfg.seed = seed;
      cfg.node_count = n;
      cfg.protocol_mode = mode;
      cfg.node_speed_mps = 0.0;
      cfg.initial_energy = 1e9;  // nobody dies, so the structure can settle
      cfg.duration_s = 40.0;
      cfg.record_trace = true;
      Simulator sim(cfg);
      sim.run_until(cfg.duration_s);
      ledger.add(sim);
      const std::string where = "seed " + std::to_string(seed) + " n=" + std::to_string(n) + " " +
                                std::string(to_string(mode)) + ": ";

      for (const Node& v : sim.nodes()) {
        if (!v.alive()) continue;
        const ClusterState& st = v.cluster;
        if (st.role == Role::ClusterMember) {
          ++members;
          if (!st.head) {
            fail(where + "member " + std::to_string(v.id) + " without head");
            continue;
          }
          const Node& h = sim.node(*st.head);
          if (!h.alive() || h.cluster.role != Role::ClusterHead || !sim.in_range(v.id, h.id))
            fail(where + "member " + std::to_string(v.id) + " has no live in-range head");
        } else if (st.role == Role::ClusterHead) {
          ++heads;
          if (mode != ProtocolMode::Ecbrp) continue;
          for (const Node& u : sim.nodes())
            if (u.id != v.id && u.alive() && u.cluster.role == Role::ClusterHead && sim.in_range(u.id, v.id))
              fail(where + "heads " + std::to_string(v.id) + " and " + std::to_string(u.id) + " in range");
          bool has_members = false;
          for (const Node& u : sim.nodes())
            has_members |= u.alive() && u.cluster.role == Role::ClusterMember && u.cluster.head == v.id;
          if (st.secondary) {
            const Node& s = sim.node(*st.secondary);
            if (s.cluster.role != Role::ClusterMember || s.cluster.head != v.id)
              fail(where + "secondary " + std::to_string(s.id) + " not a member of " + std::to_string(v.id));
          } else if (has_members) {
            fail(where + "head " + std::to_string(v.id) + " has members but no secondary");
          }
          if (st.election) {
            for (const auto& [id, w] : st.election->contenders)
              if (!ranks_before({v.id, st.election->weight}, {id, w}, mode))
                fail(where + "head " + std::to_string(v.id) + " outweighed by " + std::to_string(id) + " at election");
          }
        }
      }
    }
    ++topologies;
  }
  return {first_failure.empty(), std::to_string(topologies) + " topologies x 2 modes, " + std::to_string(heads) +
                                     " heads, " + std::to_string(members) + " members" +
                                     (first_failure.empty() ? "" : "; " + first_failure)};
}

// 6. Same seed, byte-identical CSV, independent of thread count.
Outcome determinism() {
  SweepSpec spec;
  spec.node_counts = {10, 30, 50};
  spec.replicates = 3;
  spec.base.seed = 11;
  spec.threads = 1;
  const SweepResult a = sweep(spec);
  spec.threads = 4;
  const SweepResult b = sweep(spec);
  for (const auto* r : {&a, &b})
    for (const auto& cell : r->cells)
      for (const auto& run : cell.runs) ledger.add(run.metrics);
  const std::string ca = to_csv(a), cb = to_csv(b);

  ScenarioConfig single;
  single.seed = 99;
  const RunMetrics m1 = run_scenario(single), m2 = run_scenario(single);
  ledger.add(m1);
  ledger.add(m2);
  const bool same = ca == cb && m1 == m2;
  return {same, std::to_string(ca.size()) + " CSV bytes compared; single-run digests " +
                    (m1.trace_digest == m2.trace_digest ? "equal" : "differ")};
}

// 7. Fewer reformations under ECBRP when heads drain fast.
Outcome reformations() {
  int wins = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const RunMetrics c = run_scenario(head_death_stress_config(ProtocolMode::Cbrp, seed));
    const RunMetrics e = run_scenario(head_death_stress_config(ProtocolMode::Ecbrp, seed));
    ledger.add(c);
    ledger.add(e);
    wins += e.cluster_reformations < c.cluster_reformations;
    detail += "seed " + std::to_string(seed) + ": " + std::to_string(e.cluster_reformations) + " vs " +
              std::to_string(c.cluster_reformations) + "; ";
  }
  detail += std::to_string(wins) + "/5 seeds (ecbrp vs cbrp)";
  return {wins >= 4, detail};
}

// 5. Evaluated last, over every run above.
Outcome loops_and_conservation() {
  return {ledger.runs > 0 && ledger.not_conserved == 0 && ledger.path_violations == 0 && ledger.infeasible_hops == 0,
          std::to_string(ledger.runs) + " runs, " + std::to_string(ledger.not_conserved) + " not conserved, " +
              std::to_string(ledger.path_violations) + " repeated-id paths, " + std::to_string(ledger.infeasible_hops) +
              " out-of-range hops"};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "PDR sweep, ECBRP >= CBRP", pdr_sweep},
      {2, "weight oracle equivalence", wca_oracle},
      {3, "scripted head-failure trace", failover},
      {4, "cluster invariants on static topologies", invariants},
      {6, "determinism", determinism},
      {7, "fewer reformations under head drain", reformations},
      {5, "loop freedom and conservation", loops_and_conservation},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%d] %s (%.1f s): %s\n", o.passed ? "PASS" : "FAIL", c.number, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.passed;
  }
  return failed == 0 ? 0 : 1;
}
