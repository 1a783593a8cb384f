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

#ifndef IGPC_PLANNER_HPP_
#define IGPC_PLANNER_HPP_

#include <limits>
#include <string>
#include <vector>

#include "igpc/igpc.hpp"

namespace igpc {

// The iterative planners, distinguished by where they roll out and whose
// Jacobians they linearize:
//   kIlqg       plans and rolls out on the simulator f only; it never
//               touches the real system, so its ledger costs are
//               simulator costs and its real-rollout count stays 0.
//   kIlc        rolls out on the real system g, linearizes f's Jacobians
//               at the visited real states.
//   kIgpc       like kIlc but each real execution runs the GPC inner
//               controller on top of the affine policy (model f).
//   kIlqrOracle rolls out on g and linearizes g directly; an infeasible
//               reference since real Jacobians are unobservable.
enum class PlannerMode { kIlqg, kIlc, kIgpc, kIlqrOracle };

PlannerMode planner_mode_from_name(const std::string& name);
std::string planner_mode_name(PlannerMode mode);

struct PlannerConfig {
  PlannerMode mode = PlannerMode::kIlc;
  int iterations = 10;  // N, outer refinement rounds
  LineSearchParams line_search;
  GPCParams gpc;           // kIgpc mode
  VectorSeq initial_plan;  // empty = zero plan
  Vector start_state;      // empty = zero
  // Hard cap on executions of the real system, line-search probes
  // included. The run stops (flagged) when the next probe would exceed
  // it.
  int real_rollout_budget = std::numeric_limits<int>::max();
};

struct PlannerLedgerRow {
  PlannerMode mode;
  int iteration = 0;           // 1-based
  int real_rollouts_used = 0;  // cumulative g executions after this iteration
  double alpha = 0.0;          // accepted step scale; 0 when nothing accepted
  double cost = 0.0;           // accepted average cost (simulator cost for ilqg)
};

struct PlannerResult {
  std::vector<PlannerLedgerRow> ledger;
  std::vector<RolloutRecord> episodes;  // accepted episode per iteration
  AffineGainPolicy final_policy;
  int real_rollouts_total = 0;
  bool budget_truncated = false;
};

// Iterative planning loop: execute the current affine policy,
// quadratize costs along the accepted trajectory, solve the time-varying
// affine LQG on the linearized dynamics, line-search the feedforward
// scale on the next execution. The disturbance model is indexed by the
// cumulative real-rollout counter, so all planners facing the same model
// see the identical realization sequence.
PlannerResult iterative_planner(const System& simulator, const System& real,
                                const DisturbanceModel& disturbance,
                                const CostModel& costs,
                                const PlannerConfig& config);

}  // namespace igpc

#endif  // IGPC_PLANNER_HPP_
