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

// igpc_bench: batch planning benchmarks driven by a JSON config.
//
//   igpc_bench run <config.json> [--svg] [--workers N]
//   igpc_bench summarize <dir> --threshold <v>
//   igpc_bench regret <dir>
//   igpc_bench sweep-alpha <config.json> [--workers N]
//
// Exit codes: 0 success, 1 invalid input (config, directory, flags),
// 2 runtime failure (a cell failed or a solver gave up).

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "igpc/errors.hpp"
#include "igpc/experiment.hpp"

namespace {

int run_command(const std::string& config_path, bool svg, int workers) {
  const igpc::ExperimentConfig config =
      igpc::parse_config(igpc::read_text_file(config_path));
  igpc::validate_config(config);
  const igpc::ExperimentOutcome outcome =
      igpc::run_experiment(config, workers);
  std::cout << "wrote " << outcome.ledger_files.size() << " ledgers to "
            << config.output_dir << " (config " << igpc::config_hash_hex(config)
            << ")\n";
  if (svg) {
    igpc::render_svg_plots(config.output_dir);
    std::cout << "rendered SVG plots\n";
  }
  if (!outcome.ok) {
    for (const std::string& failure : outcome.failures) {
      std::cerr << "cell failed: " << failure << "\n";
    }
    return 2;
  }
  return 0;
}

int summarize_command(const std::string& dir, double threshold) {
  const igpc::Table table = igpc::summarize_directory(dir, threshold);
  const std::string csv = igpc::to_csv(table);
  std::cout << csv;
  igpc::write_text_file(
      (std::filesystem::path(dir) / "summary.csv").string(), csv);
  return 0;
}

int regret_command(const std::string& dir) {
  const igpc::Table table = igpc::regret_directory(dir);
  const std::string csv = igpc::to_csv(table);
  std::cout << csv;
  igpc::write_text_file(
      (std::filesystem::path(dir) / "regret_summary.csv").string(), csv);
  return 0;
}

int sweep_command(const std::string& config_path, int workers) {
  const igpc::ExperimentConfig config =
      igpc::parse_config(igpc::read_text_file(config_path));
  igpc::validate_config(config);
  const igpc::AlphaSweepResult result = igpc::sweep_alpha(config, workers);
  std::cout << igpc::to_csv(result.table);
  std::cout << "best alpha_plus: " << igpc::format_double(result.best_alpha)
            << "\n";
  std::filesystem::create_directories(config.output_dir);
  igpc::write_csv(result.table,
                  (std::filesystem::path(config.output_dir) /
                   "sweep_alpha.csv")
                      .string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seeded planning benchmarks with CSV ledgers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string dir;
  double threshold = 0.0;
  bool svg = false;
  int workers = 0;

  CLI::App* run = app.add_subcommand(
      "run", "run every (agent, magnitude, seed) cell of a config");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_flag("--svg", svg, "also render cost curves as SVG");
  run->add_option("--workers", workers,
                  "worker threads (default: IGPC_WORKERS, then all cores)");

  CLI::App* summarize = app.add_subcommand(
      "summarize", "rollouts-to-threshold table for a finished run");
  summarize->add_option("dir", dir, "experiment output directory")->required();
  summarize->add_option("--threshold", threshold, "cost threshold")
      ->required();

  CLI::App* regret = app.add_subcommand(
      "regret", "hindsight-comparator regret report for a finished run");
  regret->add_option("dir", dir, "experiment output directory")->required();

  CLI::App* sweep = app.add_subcommand(
      "sweep-alpha", "line-search upper-step sweep for the ilc agent");
  sweep->add_option("config", config_path, "JSON config file")->required();
  sweep->add_option("--workers", workers,
                    "worker threads (default: IGPC_WORKERS, then all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return run_command(config_path, svg, workers);
    if (summarize->parsed()) return summarize_command(dir, threshold);
    if (regret->parsed()) return regret_command(dir);
    return sweep_command(config_path, workers);
  } catch (const igpc::ConfigError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const igpc::DimensionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 2;
  }
}
