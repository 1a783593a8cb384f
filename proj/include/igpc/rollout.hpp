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

#ifndef IGPC_ROLLOUT_HPP_
#define IGPC_ROLLOUT_HPP_

#include <functional>

#include "igpc/cost.hpp"
#include "igpc/disturbance.hpp"
#include "igpc/system.hpp"
#include "igpc/types.hpp"

namespace igpc {

// What a policy is allowed to see when choosing a_t: the past and the
// current state, never the future. states has size t (x_1..x_t), actions
// and disturbances have size t-1.
struct StepContext {
  int t = 1;  // 1-based
  const VectorSeq& states;
  const VectorSeq& actions;
  const VectorSeq& disturbances;

  const Vector& x() const { return states.back(); }
};

using Policy = std::function<Vector(const StepContext&)>;

// Everything produced by one episode. states has size T+1, the rest T.
// disturbances are the realized w_t = x_{t+1} - f_t(x_t, a_t) of the
// system that was rolled out; offsets are the o_t an inner controller
// added on top of the base action (zero when there is none).
struct RolloutRecord {
  VectorSeq states;
  VectorSeq actions;
  VectorSeq disturbances;
  VectorSeq offsets;
  std::vector<double> step_costs;
  double average_cost = 0.0;  // (1/T) sum_t c_t(x_t, a_t)

  double total_cost() const { return average_cost * step_costs.size(); }
};

struct RolloutOptions {
  Vector start_state;     // empty = zero
  int rollout_index = 1;  // 1-based index i into the disturbance process
};

// Simulate T steps of `sys` under `policy` with disturbances drawn from
// `model`. Throws DivergedRollout if a state goes non-finite.
RolloutRecord rollout(const System& sys, const Policy& policy,
                      const DisturbanceModel& model, const CostModel& costs,
                      const RolloutOptions& options = {});

// Same with an explicit disturbance sequence w_{1:T}.
RolloutRecord rollout(const System& sys, const Policy& policy,
                      const VectorSeq& w, const CostModel& costs,
                      const RolloutOptions& options = {});

// (1/T) sum_t c_t over an explicit trajectory; sizes must agree.
double trajectory_cost(const CostModel& costs, const VectorSeq& states,
                       const VectorSeq& actions);

}  // namespace igpc

#endif  // IGPC_ROLLOUT_HPP_
