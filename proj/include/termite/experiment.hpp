// Experiment execution: seeded replications, the three evaluation metrics
// (success rate, energy, efficiency) plus latency, aggregation, density
// sweeps with paired seeds, and deterministic CSV emission.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "termite/scenario.hpp"

namespace termite {

struct RunResult {
  int run = 0;
  uint64_t seed = 0;
  int64_t generated = 0;
  int64_t delivered = 0;
  double success_rate_pct = 0.0;        // NaN when nothing was generated
  double energy_j = 0.0;
  double efficiency_kbits_per_j = 0.0;  // NaN when no energy was consumed
  double latency_s = 0.0;               // NaN when nothing was delivered
  bool ok = true;
};

struct ExperimentOutput {
  std::string protocol;
  std::string scenario;
  int n_nodes = 0;
  std::vector<RunResult> runs;
  RunResult mean;    // aggregate over ok runs
  RunResult stddev;  // sample standard deviation (0 for a single run)
  int aggregated = 0;
  bool partial = false;  // some run aborted; aggregate covers the rest
};

// One simulation. seed picks every stream; trace may be null.
RunResult run_single(const Scenario& scn, int run_index, uint64_t seed,
                     TraceLog* trace);

// All replications, seeds base_seed + k. When trace_run0_path is non-empty
// the first replication writes a full event trace there.
ExperimentOutput run_experiment(const Scenario& scn,
                                const std::string& trace_run0_path = "");

// One experiment per (protocol, node count), same seeds everywhere so the
// placement and traffic draws pair up across protocols.
std::vector<ExperimentOutput> density_sweep(
    const Scenario& scn, const std::vector<int>& node_counts,
    const std::vector<std::string>& protocols);

std::string csv_header();
void append_csv_rows(std::vector<std::string>& lines,
                     const ExperimentOutput& out);
std::string results_csv(const std::vector<ExperimentOutput>& outputs);

}  // namespace termite
