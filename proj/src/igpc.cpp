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

#include "igpc/igpc.hpp"

#include <chrono>
#include <cmath>
#include <utility>

#include "igpc/errors.hpp"
#include "igpc/planner.hpp"

namespace igpc {

namespace {

double seconds_since(
    const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void check_spec(const EpisodeSpec& spec, int i) {
  if (!spec.system || !spec.disturbance || !spec.costs) {
    throw ConfigError("environment stream exhausted at rollout " +
                      std::to_string(i));
  }
}

}  // namespace

EnvStream fixed_environment(const System& sys, const DisturbanceModel& dist,
                            const CostModel& costs,
                            const Vector& start_state) {
  return [&sys, &dist, &costs, start_state](int i) {
    EpisodeSpec spec;
    spec.system = &sys;
    spec.disturbance = &dist;
    spec.costs = &costs;
    spec.rollout_index = i;
    spec.start_state = start_state;
    return spec;
  };
}

VectorSeq outer_gradient(const System& sys, const VectorSeq& u,
                         const VectorSeq& offsets, const VectorSeq& w,
                         const CostModel& costs, const Vector& start_state) {
  const int T = horizon(sys);
  detail::check(static_cast<int>(u.size()) == T, "plan length mismatch");
  detail::check(static_cast<int>(offsets.size()) == T,
                "offsets length mismatch");
  detail::check(static_cast<int>(w.size()) == T,
                "disturbance length mismatch");
  const int d_x = state_dim(sys);

  // Forward: open-loop replay of u + o under the recorded disturbances.
  VectorSeq x(1, start_state.size() ? start_state
                                    : Vector(Vector::Zero(d_x)));
  VectorSeq a;
  for (int t = 1; t <= T; ++t) {
    a.push_back(u[t - 1] + offsets[t - 1]);
    x.push_back(step(sys, t, x.back(), a.back(), w[t - 1]));
  }

  // Backward adjoint over the averaged cost.
  const double inv_T = 1.0 / T;
  VectorSeq grad(T);
  Vector lambda = Vector::Zero(d_x);
  for (int t = T; t >= 1; --t) {
    Matrix B = jacobian_u(sys, t, x[t - 1], a[t - 1]);
    grad[t - 1] = inv_T * costs.grad_u(t, x[t - 1], a[t - 1]) +
                  B.transpose() * lambda;
    Matrix A = jacobian_x(sys, t, x[t - 1], a[t - 1]);
    lambda = inv_T * costs.grad_x(t, x[t - 1], a[t - 1]) +
             A.transpose() * lambda;
  }
  return grad;
}

LqrStepResult igpc_lqr_update(const RolloutRecord& episode,
                              const System& linearize_on,
                              const CostModel& costs, double alpha) {
  const int T = static_cast<int>(episode.actions.size());
  detail::check(T >= 1, "episode has no actions");
  QuadraticModel qm = quadratize(costs, episode.states, episode.actions);
  MatrixSeq A, B;
  A.reserve(T);
  B.reserve(T);
  for (int t = 1; t <= T; ++t) {
    A.push_back(jacobian_x(linearize_on, t, episode.states[t - 1],
                           episode.actions[t - 1]));
    B.push_back(jacobian_u(linearize_on, t, episode.states[t - 1],
                           episode.actions[t - 1]));
  }
  AffineLqrSolution sol = lqr_tv_solve(A, B, qm);

  LqrStepResult out;
  out.k = sol.k;
  out.K = sol.K;
  out.regularization = sol.regularization;
  out.policy.alpha = alpha;
  out.policy.x_nom.assign(episode.states.begin(),
                          episode.states.begin() + T);
  out.policy.u_nom = episode.actions;
  out.policy.k = sol.k;
  out.policy.K = sol.K;
  return out;
}

namespace {

IgpcRunResult igpc_run_gradient(const EnvStream& stream, OpenLoopPlan plan,
                                const IGPCConfig& config) {
  detail::check(config.rollouts >= 1, "rollout count must be >= 1");
  plan.u = project_plan(std::move(plan.u), plan.action_set);

  double eta = config.eta_out;
  if (config.theory_schedule) {
    const GpcTheoryConstants& c = config.constants;
    detail::check(c.delta > 0.0, "theory schedule needs delta > 0");
    double denom = c.G * c.kappa / (c.delta * c.delta) *
                   (c.kappa * c.U + c.kappa * c.gamma * c.L * c.W + c.W) *
                   std::sqrt(static_cast<double>(config.rollouts));
    eta = c.U / denom;
  }
  detail::check(eta > 0.0, "outer learning rate must be positive");

  IgpcRunResult out;
  GPCState carry;
  bool have_carry = false;
  for (int i = 1; i <= config.rollouts; ++i) {
    EpisodeSpec spec = stream(i);
    check_spec(spec, i);
    detail::check(static_cast<int>(plan.u.size()) == horizon(*spec.system),
                  "plan horizon mismatch with system");

    auto t0 = std::chrono::steady_clock::now();
    GpcRolloutOptions opts;
    opts.start_state = spec.start_state;
    opts.rollout_index = spec.rollout_index;
    if (config.warm_start_gpc && have_carry) opts.state = &carry;
    GpcRolloutResult rolled =
        gpc_rollout(*spec.system, as_policy(plan), *spec.disturbance,
                    *spec.costs, config.gpc, opts);
    carry = rolled.state;
    have_carry = true;

    VectorSeq grad =
        outer_gradient(*spec.system, plan.u, rolled.record.offsets,
                       rolled.record.disturbances, *spec.costs,
                       spec.start_state);

    EpisodeResult ep;
    ep.index = i;
    ep.plan = plan.u;
    ep.loss = rolled.record.average_cost;
    ep.record = std::move(rolled.record);
    ep.wall_time_s = seconds_since(t0);
    out.episodes.push_back(std::move(ep));

    for (int t = 0; t < static_cast<int>(plan.u.size()); ++t) {
      plan.u[t] -= eta * grad[t];
    }
    plan.u = project_plan(std::move(plan.u), plan.action_set);
  }
  out.final_plan = std::move(plan);
  return out;
}

IgpcRunResult igpc_run_lqr(const EnvStream& stream, OpenLoopPlan plan,
                           const IGPCConfig& config) {
  EpisodeSpec spec = stream(1);
  check_spec(spec, 1);

  PlannerConfig pc;
  pc.mode = PlannerMode::kIgpc;
  pc.iterations = config.rollouts;
  pc.line_search = config.line_search;
  pc.gpc = config.gpc;
  pc.initial_plan = plan.u;
  pc.start_state = spec.start_state;

  auto t0 = std::chrono::steady_clock::now();
  PlannerResult pr = iterative_planner(*spec.system, *spec.system,
                                       *spec.disturbance, *spec.costs, pc);
  double elapsed = seconds_since(t0);

  IgpcRunResult out;
  for (size_t i = 0; i < pr.episodes.size(); ++i) {
    EpisodeResult ep;
    ep.index = pr.ledger[i].real_rollouts_used;
    ep.record = pr.episodes[i];
    ep.plan = pr.episodes[i].actions;
    ep.loss = pr.episodes[i].average_cost;
    ep.wall_time_s = elapsed / pr.episodes.size();
    out.episodes.push_back(std::move(ep));
  }
  out.final_plan.u = pr.final_policy.u_nom;
  out.final_plan.action_set = plan.action_set;
  return out;
}

}  // namespace

IgpcRunResult igpc_run(const EnvStream& stream, OpenLoopPlan initial_plan,
                       const IGPCConfig& config) {
  if (config.update == IGPCConfig::Update::kGradient) {
    return igpc_run_gradient(stream, std::move(initial_plan), config);
  }
  return igpc_run_lqr(stream, std::move(initial_plan), config);
}

}  // namespace igpc
