// Copyright 2026 The iGPC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch experiment harness: a JSON config describes an environment, a
// disturbance sweep, and a set of planning agents; the runner executes
// every (agent, magnitude, seed) cell, writes one ledger CSV per cell plus
// a metadata sidecar, and offers summarize / regret / alpha-sweep reports
// over a finished output directory. Everything is deterministic: rerunning
// a config yields byte-identical files.

#ifndef IGPC_EXPERIMENT_HPP_
#define IGPC_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "igpc/gpc.hpp"
#include "igpc/igpc.hpp"
#include "igpc/planner.hpp"
#include "igpc/regret.hpp"
#include "igpc/table.hpp"
#include "igpc/types.hpp"

namespace igpc {

inline constexpr const char* kCodeVersion = "igpc 0.1.0";

// FNV-1a, used to fingerprint canonical config text in ledger metadata.
std::uint64_t fnv1a64(std::string_view text);

struct ExperimentConfig {
  std::string name = "experiment";
  std::string environment = "double_integrator";
  int horizon = 100;  // T
  double dt = 0.05;   // ignored by the double integrator (unit steps)

  int rollouts = 20;  // N, planner iterations per cell
  std::vector<int> seeds = {1};
  std::vector<std::string> agents;  // subset of ilqg/ilc/igpc/ilqr_oracle

  std::string disturbance = "zero";
  std::vector<double> magnitudes = {0.1};
  double disturbance_frequency = 0.05;
  double disturbance_growth_rate = 0.1;
  int disturbance_period = 20;

  GPCParams gpc;
  LineSearchParams line_search;

  // How the igpc agent refines its plan: "lqr_step" (affine LQR update
  // with line search, like the other planners) or "gradient" (projected
  // gradient on the plan, one real rollout per iteration).
  std::string igpc_update = "lqr_step";
  double eta_out = 0.1;  // gradient-mode outer step

  std::vector<double> alpha_grid = {1.0, 0.5, 0.25, 0.125};
  int real_rollout_budget = 0;  // 0 means unlimited
  double threshold = 0.0;       // with has_threshold, run also summarizes
  bool has_threshold = false;

  std::string output_dir = "out";
};

// Strict JSON (de)serialization. Unknown keys anywhere are rejected, and
// parse(serialize(c)) == c with serialize producing canonical sorted-key,
// two-space indented text whose hash identifies the config.
ExperimentConfig parse_config(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& config);
std::string config_hash_hex(const ExperimentConfig& config);

// Additional validation beyond the schema (agent names, environment name,
// disturbance kind, positivity). Throws ConfigError.
void validate_config(const ExperimentConfig& config);

// The disturbance model a cell faces, identical for every agent at the
// same (seed, magnitude): the experiment seed drives phases/directions,
// never the agent.
DisturbanceModel cell_disturbance(const ExperimentConfig& config,
                                  int magnitude_index, int seed);

struct ExperimentOutcome {
  bool ok = true;
  std::vector<std::string> ledger_files;  // relative to output_dir
  std::vector<std::string> failures;      // one message per failed cell
  std::string meta_file;
};

// Runs every (agent, magnitude, seed) cell and writes:
//   ledger_<agent>_m<k>_seed<s>.csv   per cell
//   plot_costs.csv                    tidy merge of all ledgers
//   summary.csv                       when the config carries a threshold
//   meta.json                         config, hash, code version, files
// workers = 0 reads IGPC_WORKERS from the environment (default 1). Cell
// failures produce a partial ledger with a failure row and ok = false.
ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 int workers = 0);

// Rollouts-to-threshold table over a finished output directory: per
// (agent, magnitude), the median across seeds of the real-rollout count at
// which the ledger cost first drops to the threshold, or "not reached".
// Refuses directories whose ledgers do not all come from the same config.
Table summarize_directory(const std::string& dir, double threshold);

// Planning-regret report over a finished output directory: re-derives each
// cell's disturbance realizations from the config, solves the hindsight
// comparator, and writes regret_<agent>_m<k>_seed<s>.csv next to the
// ledgers. Iteration i is scored against realization i, which matches how
// gradient-mode runs consume the stream (and first-probe-accept LQR runs).
// State-dependent disturbances have no replayable realization, so wind
// configs are refused.
Table regret_directory(const std::string& dir);

// alpha-plus sweep: runs the ILC agent over the grid and reports the
// median final cost per grid point; the best point is what the other
// line-search agents should reuse.
struct AlphaSweepResult {
  Table table;  // alpha_plus, median_final_cost
  double best_alpha = 0.0;
};
AlphaSweepResult sweep_alpha(const ExperimentConfig& config, int workers = 0);

// Plan / disturbance-sequence CSV interchange (one row per step, one
// column per component).
void write_vector_seq_csv(const std::string& path, const VectorSeq& seq,
                          const std::string& prefix);
VectorSeq read_vector_seq_csv(const std::string& path);

// Renders cost-vs-real-rollouts curves (median across seeds) per
// magnitude into simple standalone SVG files.
void render_svg_plots(const std::string& dir);

}  // namespace igpc

#endif  // IGPC_EXPERIMENT_HPP_
