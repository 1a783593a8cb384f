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

#include "igpc/rollout.hpp"

#include "igpc/errors.hpp"

namespace igpc {

namespace {

// Shared core: the disturbance for step t is produced by a callback so
// both the model-driven and explicit-sequence entry points stay in sync.
RolloutRecord run(const System& sys, const Policy& policy,
                  const std::function<Vector(int, const Vector&)>& disturb,
                  const CostModel& costs, const RolloutOptions& options) {
  const int T = horizon(sys);
  const int d_x = state_dim(sys);
  const int d_u = action_dim(sys);

  RolloutRecord rec;
  rec.states.reserve(T + 1);
  rec.actions.reserve(T);
  rec.disturbances.reserve(T);
  rec.offsets.reserve(T);
  rec.step_costs.reserve(T);

  Vector x0 = options.start_state.size() ? options.start_state
                                         : Vector(Vector::Zero(d_x));
  detail::check(x0.size() == d_x, "start state dimension mismatch");
  rec.states.push_back(x0);

  double total = 0.0;
  for (int t = 1; t <= T; ++t) {
    StepContext ctx{t, rec.states, rec.actions, rec.disturbances};
    Vector a = policy(ctx);
    detail::check(a.size() == d_u, "policy action dimension mismatch");

    double c = costs.value(t, rec.states.back(), a);
    Vector w = disturb(t, rec.states.back());
    detail::check(w.size() == d_x, "disturbance dimension mismatch");
    Vector fx = transition(sys, t, rec.states.back(), a);
    Vector next = fx + w;
    if (!next.allFinite()) throw DivergedRollout("state became non-finite", t);
    // Store the reconstruction x_{t+1} - f_t(x_t, a_t) rather than the
    // injected w: they agree to one ulp and the recovery identity then
    // holds bitwise on replay.
    w = next - fx;

    rec.actions.push_back(std::move(a));
    rec.disturbances.push_back(std::move(w));
    rec.offsets.push_back(Vector::Zero(d_u));
    rec.step_costs.push_back(c);
    rec.states.push_back(std::move(next));
    total += c;
  }
  rec.average_cost = T > 0 ? total / T : 0.0;
  return rec;
}

}  // namespace

RolloutRecord rollout(const System& sys, const Policy& policy,
                      const DisturbanceModel& model, const CostModel& costs,
                      const RolloutOptions& options) {
  detail::check(model.dim == state_dim(sys),
                "disturbance dimension mismatch with system state");
  const int i = options.rollout_index;
  return run(
      sys, policy,
      [&model, i](int t, const Vector& x) { return model.eval(i, t, x); },
      costs, options);
}

RolloutRecord rollout(const System& sys, const Policy& policy,
                      const VectorSeq& w, const CostModel& costs,
                      const RolloutOptions& options) {
  detail::check(static_cast<int>(w.size()) == horizon(sys),
                "disturbance sequence length mismatch with horizon");
  return run(
      sys, policy, [&w](int t, const Vector&) { return w[t - 1]; }, costs,
      options);
}

double trajectory_cost(const CostModel& costs, const VectorSeq& states,
                       const VectorSeq& actions) {
  const int T = static_cast<int>(actions.size());
  detail::check(static_cast<int>(states.size()) >= T,
                "trajectory_cost needs a state per action");
  double total = 0.0;
  for (int t = 1; t <= T; ++t) {
    total += costs.value(t, states[t - 1], actions[t - 1]);
  }
  return T > 0 ? total / T : 0.0;
}

}  // namespace igpc
