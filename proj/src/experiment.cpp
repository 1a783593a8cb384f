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

#include "igpc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <set>
#include <thread>
#include <utility>

#include "json.hpp"

#include "igpc/disturbance.hpp"
#include "igpc/environments.hpp"
#include "igpc/errors.hpp"
#include "igpc/rng.hpp"
#include "igpc/rollout.hpp"

namespace igpc {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

constexpr const char* kLedgerColumns[] = {"mode", "iteration",
                                          "real_rollouts_used",
                                          "alpha_accepted", "cost"};

Table make_ledger_table() {
  Table t;
  t.columns.assign(std::begin(kLedgerColumns), std::end(kLedgerColumns));
  return t;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown config key '" + it.key() + "' in " + where);
    }
  }
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4) {
    out += digits[(h >> shift) & 0xF];
  }
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("IGPC_WORKERS")) {
    try {
      const int parsed = parse_int(env);
      if (parsed >= 1) return parsed;
    } catch (const ConfigError&) {
      throw ConfigError("IGPC_WORKERS must be a positive integer");
    }
    throw ConfigError("IGPC_WORKERS must be a positive integer");
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(0..n-1) on a bounded pool. fn must not throw; cells record
// their own failures.
void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  const int threads = std::min(workers, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> cursor{0};
  auto work = [&]() {
    for (;;) {
      const int i = cursor.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int i = 0; i < threads; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

Table run_cell(const ExperimentConfig& cfg, const std::string& agent,
               int magnitude_index, int seed) {
  Environment env = make_environment(cfg.environment, cfg.horizon, cfg.dt);
  const DisturbanceModel dist = cell_disturbance(cfg, magnitude_index, seed);
  const int T = cfg.horizon;
  VectorSeq initial_plan(T, env.trim_action);
  Table ledger = make_ledger_table();

  if (agent == "igpc" && cfg.igpc_update == "gradient") {
    IGPCConfig ic;
    ic.update = IGPCConfig::Update::kGradient;
    ic.rollouts = cfg.rollouts;
    ic.eta_out = cfg.eta_out;
    ic.gpc = cfg.gpc;
    OpenLoopPlan plan;
    plan.u = initial_plan;
    plan.action_set = env.action_set;
    const IgpcRunResult run =
        igpc_run(fixed_environment(env.system, dist, env.costs,
                                   env.start_state),
                 plan, ic);
    for (const EpisodeResult& ep : run.episodes) {
      ledger.add_row({"igpc", std::to_string(ep.index),
                      std::to_string(ep.index), format_double(1.0),
                      format_double(ep.loss)});
    }
    return ledger;
  }

  PlannerConfig pc;
  pc.mode = planner_mode_from_name(agent);
  pc.iterations = cfg.rollouts;
  pc.line_search = cfg.line_search;
  pc.gpc = cfg.gpc;
  pc.initial_plan = initial_plan;
  pc.start_state = env.start_state;
  if (cfg.real_rollout_budget > 0) {
    pc.real_rollout_budget = cfg.real_rollout_budget;
  }
  const PlannerResult res =
      iterative_planner(env.system, env.system, dist, env.costs, pc);
  for (const PlannerLedgerRow& row : res.ledger) {
    ledger.add_row({planner_mode_name(row.mode), std::to_string(row.iteration),
                    std::to_string(row.real_rollouts_used),
                    format_double(row.alpha), format_double(row.cost)});
  }
  return ledger;
}

struct CellRef {
  std::string agent;
  int magnitude_index = 0;
  int seed = 0;
  std::string file;
};

std::vector<CellRef> enumerate_cells(const ExperimentConfig& cfg) {
  std::vector<CellRef> cells;
  for (const std::string& agent : cfg.agents) {
    for (size_t m = 0; m < cfg.magnitudes.size(); ++m) {
      for (int seed : cfg.seeds) {
        CellRef ref;
        ref.agent = agent;
        ref.magnitude_index = static_cast<int>(m);
        ref.seed = seed;
        ref.file = "ledger_" + agent + "_m" + std::to_string(m) + "_seed" +
                   std::to_string(seed) + ".csv";
        cells.push_back(std::move(ref));
      }
    }
  }
  return cells;
}

struct MetaInfo {
  ExperimentConfig config;
  std::string hash;
  std::vector<CellRef> cells;
};

MetaInfo load_meta(const std::string& dir) {
  const fs::path meta_path = fs::path(dir) / "meta.json";
  if (!fs::exists(meta_path)) {
    throw ConfigError("no meta.json in " + dir +
                      " (is this an experiment output directory?)");
  }
  json m;
  try {
    m = json::parse(read_text_file(meta_path.string()));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("meta.json is not valid JSON: ") + e.what());
  }
  MetaInfo info;
  try {
    info.config = parse_config(m.at("config").dump());
    info.hash = m.at("config_hash").get<std::string>();
    for (const json& cell : m.at("cells")) {
      CellRef ref;
      ref.agent = cell.at("agent").get<std::string>();
      ref.magnitude_index = cell.at("magnitude_index").get<int>();
      ref.seed = cell.at("seed").get<int>();
      ref.file = cell.at("file").get<std::string>();
      info.cells.push_back(std::move(ref));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("meta.json is missing fields: ") + e.what());
  }
  if (config_hash_hex(info.config) != info.hash) {
    throw ConfigError("meta.json config hash does not match its config");
  }
  return info;
}

// Every ledger-like CSV present must belong to this run; mixing output
// directories is refused rather than silently aggregated.
void check_unmixed(const std::string& dir, const MetaInfo& meta) {
  std::set<std::string> known;
  for (const CellRef& c : meta.cells) known.insert(c.file);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("ledger_", 0) == 0 && name.size() > 4 &&
        name.substr(name.size() - 4) == ".csv" && known.count(name) == 0) {
      throw ConfigError("ledger file '" + name +
                        "' does not belong to this run's config");
    }
  }
}

struct LedgerData {
  std::vector<int> iteration;
  std::vector<int> real_rollouts;
  std::vector<double> cost;
};

LedgerData parse_ledger(const Table& table) {
  LedgerData data;
  const int it_col = table.column_index("iteration");
  const int rr_col = table.column_index("real_rollouts_used");
  const int cost_col = table.column_index("cost");
  for (const auto& row : table.rows) {
    data.iteration.push_back(parse_int(row[it_col]));
    data.real_rollouts.push_back(parse_int(row[rr_col]));
    data.cost.push_back(parse_double(row[cost_col]));
  }
  return data;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  check_keys(j,
             {"name", "environment", "horizon", "dt", "rollouts", "seeds",
              "agents", "disturbance", "magnitudes", "disturbance_frequency",
              "disturbance_growth_rate", "disturbance_period", "gpc",
              "line_search", "igpc_update", "eta_out", "alpha_grid",
              "real_rollout_budget", "threshold", "output_dir"},
             "config");
  ExperimentConfig c;
  try {
    c.name = j.value("name", c.name);
    c.environment = j.value("environment", c.environment);
    c.horizon = j.value("horizon", c.horizon);
    c.dt = j.value("dt", c.dt);
    c.rollouts = j.value("rollouts", c.rollouts);
    c.seeds = j.value("seeds", c.seeds);
    c.agents = j.value("agents", c.agents);
    c.disturbance = j.value("disturbance", c.disturbance);
    c.magnitudes = j.value("magnitudes", c.magnitudes);
    c.disturbance_frequency =
        j.value("disturbance_frequency", c.disturbance_frequency);
    c.disturbance_growth_rate =
        j.value("disturbance_growth_rate", c.disturbance_growth_rate);
    c.disturbance_period = j.value("disturbance_period", c.disturbance_period);
    if (j.contains("gpc")) {
      const json& g = j["gpc"];
      check_keys(g, {"memory", "lookback", "learning_rate", "gamma"}, "gpc");
      c.gpc.memory = g.value("memory", c.gpc.memory);
      c.gpc.lookback = g.value("lookback", c.gpc.lookback);
      c.gpc.learning_rate = g.value("learning_rate", c.gpc.learning_rate);
      c.gpc.gamma = g.value("gamma", c.gpc.gamma);
    }
    if (j.contains("line_search")) {
      const json& ls = j["line_search"];
      check_keys(ls, {"alpha_plus", "shrink", "max_trials"}, "line_search");
      c.line_search.alpha_plus = ls.value("alpha_plus", c.line_search.alpha_plus);
      c.line_search.shrink = ls.value("shrink", c.line_search.shrink);
      c.line_search.max_trials = ls.value("max_trials", c.line_search.max_trials);
    }
    c.igpc_update = j.value("igpc_update", c.igpc_update);
    c.eta_out = j.value("eta_out", c.eta_out);
    c.alpha_grid = j.value("alpha_grid", c.alpha_grid);
    c.real_rollout_budget =
        j.value("real_rollout_budget", c.real_rollout_budget);
    if (j.contains("threshold")) {
      c.threshold = j["threshold"].get<double>();
      c.has_threshold = true;
    }
    c.output_dir = j.value("output_dir", c.output_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") +
                      e.what());
  }
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["environment"] = c.environment;
  j["horizon"] = c.horizon;
  j["dt"] = c.dt;
  j["rollouts"] = c.rollouts;
  j["seeds"] = c.seeds;
  j["agents"] = c.agents;
  j["disturbance"] = c.disturbance;
  j["magnitudes"] = c.magnitudes;
  j["disturbance_frequency"] = c.disturbance_frequency;
  j["disturbance_growth_rate"] = c.disturbance_growth_rate;
  j["disturbance_period"] = c.disturbance_period;
  j["gpc"] = {{"memory", c.gpc.memory},
              {"lookback", c.gpc.lookback},
              {"learning_rate", c.gpc.learning_rate},
              {"gamma", c.gpc.gamma}};
  j["line_search"] = {{"alpha_plus", c.line_search.alpha_plus},
                      {"shrink", c.line_search.shrink},
                      {"max_trials", c.line_search.max_trials}};
  j["igpc_update"] = c.igpc_update;
  j["eta_out"] = c.eta_out;
  j["alpha_grid"] = c.alpha_grid;
  j["real_rollout_budget"] = c.real_rollout_budget;
  if (c.has_threshold) j["threshold"] = c.threshold;
  j["output_dir"] = c.output_dir;
  return j.dump(2) + "\n";
}

std::string config_hash_hex(const ExperimentConfig& config) {
  return hash_hex(fnv1a64(serialize_config(config)));
}

void validate_config(const ExperimentConfig& c) {
  if (c.environment != "double_integrator" &&
      c.environment != "planar_quadrotor" && c.environment != "reacher_2dof") {
    throw ConfigError("unknown environment: " + c.environment);
  }
  if (c.horizon < 1) throw ConfigError("horizon must be at least 1");
  if (c.dt <= 0.0) throw ConfigError("dt must be positive");
  if (c.rollouts < 1) throw ConfigError("rollouts must be at least 1");
  if (c.seeds.empty()) throw ConfigError("seeds must be nonempty");
  if (std::set<int>(c.seeds.begin(), c.seeds.end()).size() != c.seeds.size()) {
    throw ConfigError("duplicate seeds");
  }
  if (c.agents.empty()) throw ConfigError("agents must be nonempty");
  for (const std::string& agent : c.agents) {
    planner_mode_from_name(agent);  // throws on unknown names
  }
  if (std::set<std::string>(c.agents.begin(), c.agents.end()).size() !=
      c.agents.size()) {
    throw ConfigError("duplicate agents");
  }
  const DisturbanceKind kind = disturbance_kind_from_name(c.disturbance);
  if (kind == DisturbanceKind::kCustomSequence) {
    throw ConfigError(
        "custom_sequence disturbances are a library-level feature, not a "
        "config option");
  }
  if (kind == DisturbanceKind::kWindField &&
      c.environment != "planar_quadrotor") {
    throw ConfigError("wind_field disturbances require planar_quadrotor");
  }
  if (c.magnitudes.empty()) throw ConfigError("magnitudes must be nonempty");
  for (double m : c.magnitudes) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw ConfigError("magnitudes must be finite and nonnegative");
    }
  }
  if (c.gpc.memory < 1 || c.gpc.lookback < 1 || c.gpc.learning_rate < 0.0 ||
      c.gpc.gamma < 0.0) {
    throw ConfigError("invalid gpc parameters");
  }
  if (!(c.line_search.alpha_plus > 0.0) || !(c.line_search.shrink > 0.0) ||
      !(c.line_search.shrink < 1.0) || c.line_search.max_trials < 1) {
    throw ConfigError("invalid line_search parameters");
  }
  if (c.igpc_update != "gradient" && c.igpc_update != "lqr_step") {
    throw ConfigError("igpc_update must be 'gradient' or 'lqr_step'");
  }
  if (!(c.eta_out > 0.0)) throw ConfigError("eta_out must be positive");
  if (c.alpha_grid.empty()) throw ConfigError("alpha_grid must be nonempty");
  for (double a : c.alpha_grid) {
    if (!(a > 0.0)) throw ConfigError("alpha_grid entries must be positive");
  }
  if (c.real_rollout_budget < 0) {
    throw ConfigError("real_rollout_budget must be nonnegative");
  }
  if (c.has_threshold && !std::isfinite(c.threshold)) {
    throw ConfigError("threshold must be finite");
  }
  if (c.output_dir.empty()) throw ConfigError("output_dir must be nonempty");
}

DisturbanceModel cell_disturbance(const ExperimentConfig& cfg,
                                  int magnitude_index, int seed) {
  detail::check(magnitude_index >= 0 &&
                    magnitude_index < static_cast<int>(cfg.magnitudes.size()),
                "magnitude index out of range");
  const Environment env = make_environment(cfg.environment, 1, cfg.dt);
  DisturbanceModel d;
  d.kind = disturbance_kind_from_name(cfg.disturbance);
  d.dim = state_dim(env.system);
  d.magnitude = cfg.magnitudes[magnitude_index];
  d.seed = derive_seed(static_cast<std::uint64_t>(seed),
                       {0x64697374ULL, static_cast<std::uint64_t>(
                                           magnitude_index)});
  d.frequency = cfg.disturbance_frequency;
  d.growth_rate = cfg.disturbance_growth_rate;
  d.period = cfg.disturbance_period;
  if (d.kind == DisturbanceKind::kWindField) {
    // The swept magnitude is the field gain; the hard norm cap stays a
    // generous multiple so the bound exists without shaping the field.
    d.gain = cfg.magnitudes[magnitude_index];
    d.magnitude = 4.0 * cfg.magnitudes[magnitude_index];
    d.wind_position_indices = {0, 1};
    d.wind_velocity_indices = {3, 4};
  }
  if (d.kind == DisturbanceKind::kPeriodicImpulse &&
      cfg.environment == "reacher_2dof") {
    // Impulses shove the joint velocities, not the carried end-effector
    // coordinates.
    Rng rng(derive_seed(d.seed, {0x696d70ULL}));
    const Vector dir2 = rng.unit_vector(2);
    Vector dir = Vector::Zero(6);
    dir[2] = dir2[0];
    dir[3] = dir2[1];
    d.direction = dir;
  }
  return d;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, int workers) {
  validate_config(config);
  const int pool = resolve_workers(workers);
  fs::create_directories(config.output_dir);

  const std::vector<CellRef> cells = enumerate_cells(config);
  const int n = static_cast<int>(cells.size());
  std::vector<Table> ledgers(n);
  std::vector<std::string> errors(n);

  parallel_for(n, pool, [&](int i) {
    const CellRef& cell = cells[i];
    try {
      ledgers[i] = run_cell(config, cell.agent, cell.magnitude_index,
                            cell.seed);
    } catch (const std::exception& e) {
      Table partial = make_ledger_table();
      partial.add_row({cell.agent, "-1", "0", "0", "nan"});
      ledgers[i] = std::move(partial);
      errors[i] = e.what();
    }
  });

  ExperimentOutcome outcome;
  for (int i = 0; i < n; ++i) {
    const fs::path path = fs::path(config.output_dir) / cells[i].file;
    write_csv(ledgers[i], path.string());
    outcome.ledger_files.push_back(cells[i].file);
    if (!errors[i].empty()) {
      outcome.ok = false;
      outcome.failures.push_back(cells[i].file + ": " + errors[i]);
    }
  }

  // Tidy merge for external plotting.
  Table plot;
  plot.columns = {"agent",     "magnitude",          "seed", "iteration",
                  "real_rollouts_used", "alpha_accepted", "cost"};
  for (int i = 0; i < n; ++i) {
    const CellRef& cell = cells[i];
    const Table& ledger = ledgers[i];
    for (const auto& row : ledger.rows) {
      plot.add_row({cell.agent,
                    format_double(config.magnitudes[cell.magnitude_index]),
                    std::to_string(cell.seed), row[1], row[2], row[3],
                    row[4]});
    }
  }
  write_csv(plot, (fs::path(config.output_dir) / "plot_costs.csv").string());

  json meta;
  meta["code_version"] = kCodeVersion;
  meta["config"] = json::parse(serialize_config(config));
  meta["config_hash"] = config_hash_hex(config);
  json cell_list = json::array();
  for (const CellRef& cell : cells) {
    json entry;
    entry["agent"] = cell.agent;
    entry["magnitude_index"] = cell.magnitude_index;
    entry["magnitude"] = config.magnitudes[cell.magnitude_index];
    entry["seed"] = cell.seed;
    entry["file"] = cell.file;
    cell_list.push_back(std::move(entry));
  }
  meta["cells"] = std::move(cell_list);
  const fs::path meta_path = fs::path(config.output_dir) / "meta.json";
  write_text_file(meta_path.string(), meta.dump(2) + "\n");
  outcome.meta_file = "meta.json";

  if (config.has_threshold) {
    const Table summary =
        summarize_directory(config.output_dir, config.threshold);
    write_csv(summary,
              (fs::path(config.output_dir) / "summary.csv").string());
  }
  return outcome;
}

Table summarize_directory(const std::string& dir, double threshold) {
  const MetaInfo meta = load_meta(dir);
  check_unmixed(dir, meta);

  // (agent, magnitude) -> per-seed rollouts-to-threshold, +inf = never.
  Table out;
  out.columns = {"agent", "magnitude", "rollouts_to_threshold"};
  for (const std::string& agent : meta.config.agents) {
    for (size_t m = 0; m < meta.config.magnitudes.size(); ++m) {
      std::vector<double> reached;
      for (const CellRef& cell : meta.cells) {
        if (cell.agent != agent ||
            cell.magnitude_index != static_cast<int>(m)) {
          continue;
        }
        const Table ledger =
            read_csv((fs::path(dir) / cell.file).string());
        const LedgerData data = parse_ledger(ledger);
        double first = std::numeric_limits<double>::infinity();
        for (size_t r = 0; r < data.cost.size(); ++r) {
          if (data.cost[r] <= threshold) {
            first = std::min(first,
                             static_cast<double>(data.real_rollouts[r]));
          }
        }
        reached.push_back(first);
      }
      const double med = median_of(reached);
      out.add_row({agent, format_double(meta.config.magnitudes[m]),
                   std::isfinite(med) ? format_double(med) : "not reached"});
    }
  }
  return out;
}

Table regret_directory(const std::string& dir) {
  const MetaInfo meta = load_meta(dir);
  check_unmixed(dir, meta);
  const ExperimentConfig& cfg = meta.config;
  {
    const DisturbanceModel probe =
        cell_disturbance(cfg, 0, cfg.seeds.empty() ? 0 : cfg.seeds[0]);
    if (probe.state_dependent()) {
      throw ConfigError(
          "regret needs replayable disturbance realizations; the wind "
          "field depends on the visited states");
    }
  }
  Environment env = make_environment(cfg.environment, cfg.horizon, cfg.dt);

  Table out;
  out.columns = {"agent",        "magnitude",      "seed",
                 "rollouts",     "total_regret",   "average_regret",
                 "comparator_converged"};
  for (const CellRef& cell : meta.cells) {
    const Table ledger = read_csv((fs::path(dir) / cell.file).string());
    const LedgerData data = parse_ledger(ledger);
    for (size_t r = 0; r < data.cost.size(); ++r) {
      if (data.iteration[r] < 0 || !std::isfinite(data.cost[r])) {
        throw ConfigError("ledger '" + cell.file +
                          "' contains failure rows; regret undefined");
      }
    }
    const int n = static_cast<int>(data.cost.size());
    if (n == 0) {
      throw ConfigError("ledger '" + cell.file + "' is empty");
    }
    const DisturbanceModel dist =
        cell_disturbance(cfg, cell.magnitude_index, cell.seed);
    std::vector<VectorSeq> realizations;
    realizations.reserve(n);
    std::vector<RolloutSpec> specs(n);
    for (int i = 1; i <= n; ++i) {
      realizations.push_back(realize(dist, i, cfg.horizon));
    }
    for (int i = 0; i < n; ++i) {
      specs[i].system = &env.system;
      specs[i].disturbances = realizations[i];
      specs[i].costs = &env.costs;
      specs[i].start_state = env.start_state;
    }
    ComparatorOptions copt;
    copt.memory = cfg.gpc.memory;
    copt.gamma = cfg.gpc.gamma;
    copt.action_set = env.action_set;
    copt.seed = derive_seed(static_cast<std::uint64_t>(cell.seed),
                            {0x636f6d70ULL,
                             static_cast<std::uint64_t>(cell.magnitude_index)});
    const ComparatorSolution sol = comparator_solve(specs, copt);
    const RegretSeries series = planning_regret(data.cost, sol);

    Table detail;
    detail.columns = {"rollout",        "algorithm_cost", "comparator_cost",
                      "regret",         "cumulative_regret",
                      "average_regret"};
    for (int i = 0; i < n; ++i) {
      detail.add_row({std::to_string(i + 1), format_double(data.cost[i]),
                      format_double(sol.per_rollout_cost[i]),
                      format_double(series.per_rollout[i]),
                      format_double(series.cumulative[i]),
                      format_double(series.average[i])});
    }
    std::string name = cell.file;
    name.replace(0, std::string("ledger").size(), "regret");
    write_csv(detail, (fs::path(dir) / name).string());

    out.add_row({cell.agent,
                 format_double(cfg.magnitudes[cell.magnitude_index]),
                 std::to_string(cell.seed), std::to_string(n),
                 format_double(series.cumulative.back()),
                 format_double(series.average.back()),
                 sol.converged ? "yes" : "no"});
  }
  return out;
}

AlphaSweepResult sweep_alpha(const ExperimentConfig& config, int workers) {
  validate_config(config);
  const int pool = resolve_workers(workers);
  const int n_alpha = static_cast<int>(config.alpha_grid.size());
  const int n_m = static_cast<int>(config.magnitudes.size());
  const int n_seed = static_cast<int>(config.seeds.size());
  const int cells_per_alpha = n_m * n_seed;
  const int total = n_alpha * cells_per_alpha;

  std::vector<double> final_cost(total,
                                 std::numeric_limits<double>::infinity());
  parallel_for(total, pool, [&](int idx) {
    const int a = idx / cells_per_alpha;
    const int rest = idx % cells_per_alpha;
    const int m = rest / n_seed;
    const int s = rest % n_seed;
    ExperimentConfig sub = config;
    sub.line_search.alpha_plus = config.alpha_grid[a];
    try {
      const Table ledger = run_cell(sub, "ilc", m, config.seeds[s]);
      const LedgerData data = parse_ledger(ledger);
      if (!data.cost.empty() && std::isfinite(data.cost.back())) {
        final_cost[idx] = data.cost.back();
      }
    } catch (const std::exception&) {
      // infinity already marks the failure
    }
  });

  AlphaSweepResult result;
  result.table.columns = {"alpha_plus", "median_final_cost"};
  double best_value = std::numeric_limits<double>::infinity();
  for (int a = 0; a < n_alpha; ++a) {
    std::vector<double> finals(final_cost.begin() + a * cells_per_alpha,
                               final_cost.begin() + (a + 1) * cells_per_alpha);
    const double med = median_of(finals);
    result.table.add_row({format_double(config.alpha_grid[a]),
                          std::isfinite(med) ? format_double(med)
                                             : "diverged"});
    if (med < best_value) {
      best_value = med;
      result.best_alpha = config.alpha_grid[a];
    }
  }
  if (!std::isfinite(best_value)) {
    throw SolveError("alpha sweep: every grid point diverged");
  }
  return result;
}

void write_vector_seq_csv(const std::string& path, const VectorSeq& seq,
                          const std::string& prefix) {
  detail::check(!seq.empty(), "refusing to write an empty sequence");
  Table t;
  const int d = static_cast<int>(seq[0].size());
  t.columns.push_back("t");
  for (int i = 1; i <= d; ++i) {
    t.columns.push_back(prefix + std::to_string(i));
  }
  for (size_t step = 0; step < seq.size(); ++step) {
    detail::check(seq[step].size() == d, "ragged sequence");
    std::vector<std::string> row;
    row.push_back(std::to_string(step + 1));
    for (int i = 0; i < d; ++i) row.push_back(format_double(seq[step][i]));
    t.add_row(std::move(row));
  }
  write_csv(t, path);
}

VectorSeq read_vector_seq_csv(const std::string& path) {
  const Table t = read_csv(path);
  if (t.columns.empty() || t.columns[0] != "t") {
    throw ConfigError("sequence CSV must start with a 't' column");
  }
  const int d = static_cast<int>(t.columns.size()) - 1;
  if (d < 1) throw ConfigError("sequence CSV has no component columns");
  VectorSeq seq;
  seq.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = parse_double(row[i + 1]);
    seq.push_back(std::move(v));
  }
  return seq;
}

void render_svg_plots(const std::string& dir) {
  const MetaInfo meta = load_meta(dir);
  check_unmixed(dir, meta);
  const ExperimentConfig& cfg = meta.config;

  const auto color_of = [](const std::string& agent) -> std::string {
    if (agent == "ilqg") return "#888888";
    if (agent == "ilc") return "#d62728";
    if (agent == "igpc") return "#1f77b4";
    return "#2ca02c";  // ilqr_oracle
  };

  for (size_t m = 0; m < cfg.magnitudes.size(); ++m) {
    // agent -> per-iteration medians of (real rollouts, cost).
    struct Series {
      std::vector<double> x, y;
    };
    std::vector<std::pair<std::string, Series>> curves;
    for (const std::string& agent : cfg.agents) {
      std::vector<std::vector<double>> xs, ys;  // [iteration][seed]
      for (const CellRef& cell : meta.cells) {
        if (cell.agent != agent ||
            cell.magnitude_index != static_cast<int>(m)) {
          continue;
        }
        const LedgerData data =
            parse_ledger(read_csv((fs::path(dir) / cell.file).string()));
        for (size_t r = 0; r < data.cost.size(); ++r) {
          if (xs.size() <= r) {
            xs.emplace_back();
            ys.emplace_back();
          }
          if (std::isfinite(data.cost[r])) {
            xs[r].push_back(static_cast<double>(data.real_rollouts[r]));
            ys[r].push_back(data.cost[r]);
          }
        }
      }
      Series s;
      for (size_t r = 0; r < xs.size(); ++r) {
        if (xs[r].empty()) continue;
        s.x.push_back(median_of(xs[r]));
        s.y.push_back(median_of(ys[r]));
      }
      if (!s.x.empty()) curves.emplace_back(agent, std::move(s));
    }
    if (curves.empty()) continue;

    double x_lo = curves[0].second.x[0], x_hi = x_lo;
    double y_lo = curves[0].second.y[0], y_hi = y_lo;
    for (const auto& [agent, s] : curves) {
      for (double v : s.x) {
        x_lo = std::min(x_lo, v);
        x_hi = std::max(x_hi, v);
      }
      for (double v : s.y) {
        y_lo = std::min(y_lo, v);
        y_hi = std::max(y_hi, v);
      }
    }
    if (x_hi == x_lo) x_hi = x_lo + 1.0;
    if (y_hi == y_lo) y_hi = y_lo + 1.0;

    const double width = 640.0, height = 400.0, pad = 48.0;
    const auto sx = [&](double v) {
      return pad + (v - x_lo) / (x_hi - x_lo) * (width - 2 * pad);
    };
    const auto sy = [&](double v) {
      return height - pad - (v - y_lo) / (y_hi - y_lo) * (height - 2 * pad);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
           "height=\"400\" viewBox=\"0 0 640 400\">\n";
    svg += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    svg += "<line x1=\"48\" y1=\"352\" x2=\"592\" y2=\"352\" "
           "stroke=\"black\"/>\n";
    svg += "<line x1=\"48\" y1=\"48\" x2=\"48\" y2=\"352\" "
           "stroke=\"black\"/>\n";
    svg += "<text x=\"320\" y=\"390\" text-anchor=\"middle\" "
           "font-size=\"13\">real rollouts used</text>\n";
    svg += "<text x=\"14\" y=\"200\" text-anchor=\"middle\" font-size=\"13\" "
           "transform=\"rotate(-90 14 200)\">cost (median over seeds)"
           "</text>\n";
    double legend_y = 60.0;
    for (const auto& [agent, s] : curves) {
      std::string points;
      for (size_t i = 0; i < s.x.size(); ++i) {
        if (i > 0) points += ' ';
        points += format_double(sx(s.x[i])) + "," + format_double(sy(s.y[i]));
      }
      svg += "<polyline fill=\"none\" stroke=\"" + color_of(agent) +
             "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
      svg += "<text x=\"500\" y=\"" + format_double(legend_y) +
             "\" font-size=\"12\" fill=\"" + color_of(agent) + "\">" + agent +
             "</text>\n";
      legend_y += 16.0;
    }
    svg += "</svg>\n";
    write_text_file(
        (fs::path(dir) / ("plot_m" + std::to_string(m) + ".svg")).string(),
        svg);
  }
}

}  // namespace igpc
