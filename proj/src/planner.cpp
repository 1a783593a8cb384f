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

#include "igpc/planner.hpp"

#include <cmath>
#include <utility>

#include "igpc/errors.hpp"

namespace igpc {

PlannerMode planner_mode_from_name(const std::string& name) {
  if (name == "ilqg") return PlannerMode::kIlqg;
  if (name == "ilc") return PlannerMode::kIlc;
  if (name == "igpc") return PlannerMode::kIgpc;
  if (name == "ilqr_oracle") return PlannerMode::kIlqrOracle;
  throw ConfigError("unknown planner mode: " + name);
}

std::string planner_mode_name(PlannerMode mode) {
  switch (mode) {
    case PlannerMode::kIlqg: return "ilqg";
    case PlannerMode::kIlc: return "ilc";
    case PlannerMode::kIgpc: return "igpc";
    case PlannerMode::kIlqrOracle: return "ilqr_oracle";
  }
  throw ConfigError("unknown planner mode enum value");
}

namespace {

bool uses_real_system(PlannerMode mode) {
  return mode != PlannerMode::kIlqg;
}

}  // namespace

PlannerResult iterative_planner(const System& simulator, const System& real,
                                const DisturbanceModel& disturbance,
                                const CostModel& costs,
                                const PlannerConfig& config) {
  const int T = horizon(real);
  const int d_x = state_dim(real);
  const int d_u = action_dim(real);
  detail::check(horizon(simulator) == T && state_dim(simulator) == d_x &&
                    action_dim(simulator) == d_u,
                "simulator and real system must share dimensions");
  detail::check(config.iterations >= 1, "planner needs at least one iteration");
  detail::check(config.line_search.max_trials >= 1 &&
                    config.line_search.shrink > 0.0 &&
                    config.line_search.shrink < 1.0,
                "invalid line-search parameters");

  PlannerResult result;
  result.final_policy.alpha = 1.0;
  result.final_policy.x_nom.assign(T, Vector::Zero(d_x));
  result.final_policy.u_nom = config.initial_plan.empty()
                                  ? VectorSeq(T, Vector::Zero(d_u))
                                  : config.initial_plan;
  detail::check(static_cast<int>(result.final_policy.u_nom.size()) == T,
                "initial plan length mismatch with horizon");
  result.final_policy.k.assign(T, Vector::Zero(d_u));
  result.final_policy.K.assign(T, Matrix::Zero(d_u, d_x));
  AffineGainPolicy& policy = result.final_policy;

  const bool on_real = uses_real_system(config.mode);
  const VectorSeq no_disturbance(T, Vector::Zero(d_x));

  // One execution of `policy` at scale alpha. Returns false when the
  // real-rollout budget forbids it.
  auto execute = [&](double alpha, RolloutRecord* rec) -> bool {
    AffineGainPolicy probe = policy;
    probe.alpha = alpha;
    if (!on_real) {
      *rec = rollout(simulator, as_policy(probe), no_disturbance, costs,
                     {config.start_state, 1});
      return true;
    }
    if (result.real_rollouts_total >= config.real_rollout_budget) {
      result.budget_truncated = true;
      return false;
    }
    const int index = result.real_rollouts_total + 1;
    if (config.mode == PlannerMode::kIgpc) {
      GpcRolloutOptions opts;
      opts.start_state = config.start_state;
      opts.rollout_index = index;
      opts.plant = &real;
      *rec = gpc_rollout(simulator, as_policy(probe), disturbance, costs,
                         config.gpc, opts)
                 .record;
    } else {
      *rec = rollout(real, as_policy(probe), disturbance, costs,
                     {config.start_state, index});
    }
    result.real_rollouts_total += 1;
    return true;
  };

  const System& linearize_on =
      config.mode == PlannerMode::kIlqrOracle ? real : simulator;

  double prev_cost = 0.0;
  for (int iter = 1; iter <= config.iterations; ++iter) {
    RolloutRecord episode;
    double accepted_alpha = 0.0;
    bool accepted = false;

    if (iter == 1) {
      // Initial plan executes as-is (k and K are zero).
      if (!execute(1.0, &episode)) break;
      accepted = true;
      accepted_alpha = 1.0;
    } else {
      double alpha = config.line_search.alpha_plus;
      for (int trial = 0; trial < config.line_search.max_trials; ++trial) {
        RolloutRecord probe;
        if (!execute(alpha, &probe)) break;
        if (probe.average_cost < prev_cost) {
          episode = std::move(probe);
          accepted = true;
          accepted_alpha = alpha;
          break;
        }
        alpha *= config.line_search.shrink;
      }
      if (result.budget_truncated) break;
    }

    if (accepted) {
      prev_cost = episode.average_cost;
      LqrStepResult st = igpc_lqr_update(episode, linearize_on, costs, 1.0);
      policy.x_nom.assign(episode.states.begin(),
                          episode.states.begin() + T);
      policy.u_nom = episode.actions;
      policy.k = st.k;
      policy.K = st.K;
      policy.alpha = accepted_alpha;
      result.episodes.push_back(std::move(episode));
    } else {
      // Keep the previous plan; the current policy's trajectory did not
      // improve this round. The episode on record stays the previous one.
      if (!result.episodes.empty()) {
        result.episodes.push_back(result.episodes.back());
      }
    }

    PlannerLedgerRow row;
    row.mode = config.mode;
    row.iteration = iter;
    row.real_rollouts_used = result.real_rollouts_total;
    row.alpha = accepted ? accepted_alpha : 0.0;
    row.cost = prev_cost;
    result.ledger.push_back(row);
  }
  return result;
}

}  // namespace igpc
