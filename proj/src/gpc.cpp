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

#include "igpc/gpc.hpp"

#include <cmath>
#include <utility>

#include "igpc/errors.hpp"

namespace igpc {

namespace {

struct WindowShape {
  int S;      // lookback
  int L;      // memory
  int t;      // current step
  int j_lo;   // first simulated step, max(1, t - S)
};

WindowShape check_windows(const MatrixSeq& M, const VectorSeq& u_window,
                          const VectorSeq& w_window, int t, int lookback) {
  WindowShape shape;
  shape.S = lookback;
  shape.L = static_cast<int>(M.size());
  shape.t = t;
  detail::check(lookback >= 0, "lookback must be nonnegative");
  detail::check(t >= 1, "step index must be >= 1");
  detail::check(static_cast<int>(u_window.size()) == lookback,
                "u_window must hold exactly `lookback` base actions");
  detail::check(static_cast<int>(w_window.size()) == lookback + shape.L,
                "w_window must hold exactly lookback + memory disturbances");
  shape.j_lo = std::max(1, t - lookback);
  return shape;
}

// Window offsets: u_window[j - (t - S)] is u_j, w_window[i - (t - S - L)]
// is w_i.
inline int u_at(const WindowShape& s, int j) { return j - (s.t - s.S); }
inline int w_at(const WindowShape& s, int i) {
  return i - (s.t - s.S - s.L);
}

Vector dac_term(const MatrixSeq& M, const VectorSeq& w_window,
                const WindowShape& s, int j, int d_u) {
  Vector o = Vector::Zero(d_u);
  for (int r = 1; r <= s.L; ++r) {
    o += M[r - 1] * w_window[w_at(s, j - r)];
  }
  return o;
}

// Forward pass of the surrogate: simulated states y_{j_lo}..y_t and the
// actions that produced them.
struct SurrogateTrajectory {
  VectorSeq y;  // y[k] is the state at step j_lo + k; y.back() is x_hat_t
  VectorSeq a;  // actions at steps j_lo .. t-1
};

SurrogateTrajectory simulate_surrogate(const System& model, const MatrixSeq& M,
                                       const VectorSeq& u_window,
                                       const VectorSeq& w_window,
                                       const WindowShape& s) {
  const int d_x = state_dim(model);
  const int d_u = action_dim(model);
  SurrogateTrajectory traj;
  traj.y.push_back(Vector::Zero(d_x));
  for (int j = s.j_lo; j <= s.t - 1; ++j) {
    Vector a = u_window[u_at(s, j)] + dac_term(M, w_window, s, j, d_u);
    Vector next = transition(model, j, traj.y.back(), a) +
                  w_window[w_at(s, j)];
    traj.a.push_back(std::move(a));
    traj.y.push_back(std::move(next));
  }
  return traj;
}

}  // namespace

GPCState make_gpc_state(const GPCParams& params, int d_x, int d_u) {
  detail::check(params.memory >= 1, "GPC memory must be >= 1");
  detail::check(params.lookback >= 1, "GPC lookback must be >= 1");
  detail::check(params.learning_rate >= 0.0,
                "GPC learning rate must be nonnegative");
  detail::check(params.gamma >= 0.0, "GPC gamma must be nonnegative");
  GPCState state;
  state.M.assign(params.memory, Matrix::Zero(d_u, d_x));
  state.w_hist.assign(params.lookback + params.memory, Vector::Zero(d_x));
  state.u_hist.assign(params.lookback, Vector::Zero(d_u));
  state.t = 1;
  return state;
}

Vector gpc_surrogate_state(const System& model, const MatrixSeq& M,
                           const VectorSeq& u_window,
                           const VectorSeq& w_window, int t, int lookback) {
  WindowShape s = check_windows(M, u_window, w_window, t, lookback);
  return simulate_surrogate(model, M, u_window, w_window, s).y.back();
}

double gpc_loss(const System& model, const CostModel& costs,
                const MatrixSeq& M, const VectorSeq& u_window,
                const Vector& u_t, const VectorSeq& w_window, int t,
                int lookback) {
  WindowShape s = check_windows(M, u_window, w_window, t, lookback);
  SurrogateTrajectory traj = simulate_surrogate(model, M, u_window, w_window, s);
  Vector a_t = u_t + dac_term(M, w_window, s, t, static_cast<int>(u_t.size()));
  return costs.value(t, traj.y.back(), a_t);
}

MatrixSeq gpc_loss_grad(const System& model, const CostModel& costs,
                        const MatrixSeq& M, const VectorSeq& u_window,
                        const Vector& u_t, const VectorSeq& w_window, int t,
                        int lookback) {
  WindowShape s = check_windows(M, u_window, w_window, t, lookback);
  const int d_u = static_cast<int>(u_t.size());
  SurrogateTrajectory traj = simulate_surrogate(model, M, u_window, w_window, s);

  Vector a_t = u_t + dac_term(M, w_window, s, t, d_u);
  const Vector& x_hat = traj.y.back();

  MatrixSeq grad(s.L);
  // Direct path: the action at step t contains M_r w_{t-r}.
  Vector gu = costs.grad_u(t, x_hat, a_t);
  for (int r = 1; r <= s.L; ++r) {
    grad[r - 1] = gu * w_window[w_at(s, t - r)].transpose();
  }

  // Adjoint path through the simulated states: each simulated action a_j
  // also contains M_r w_{j-r}.
  Vector lambda = costs.grad_x(t, x_hat, a_t);
  for (int j = s.t - 1; j >= s.j_lo; --j) {
    const int k = j - s.j_lo;  // position in traj
    Matrix B = jacobian_u(model, j, traj.y[k], traj.a[k]);
    Vector bu = B.transpose() * lambda;
    for (int r = 1; r <= s.L; ++r) {
      grad[r - 1] += bu * w_window[w_at(s, j - r)].transpose();
    }
    Matrix A = jacobian_x(model, j, traj.y[k], traj.a[k]);
    lambda = A.transpose() * lambda;
  }
  return grad;
}

namespace {

GpcRolloutResult run_gpc(const System& model, const Policy& base_policy,
                         const std::function<Vector(int, const Vector&)>&
                             exogenous,
                         const CostModel& costs, const GPCParams& params,
                         const GpcRolloutOptions& options) {
  const System* plant = options.plant ? options.plant : &model;
  const int T = horizon(*plant);
  const int d_x = state_dim(model);
  const int d_u = action_dim(model);
  detail::check(state_dim(*plant) == d_x && action_dim(*plant) == d_u,
                "plant and model dimensions must agree");
  detail::check(horizon(model) >= T, "model horizon shorter than plant");

  GpcRolloutResult out;
  out.state = options.state ? *options.state
                            : make_gpc_state(params, d_x, d_u);
  GPCState& cs = out.state;
  detail::check(static_cast<int>(cs.M.size()) == params.memory,
                "warm-start state memory mismatch");
  detail::check(static_cast<int>(cs.u_hist.size()) == params.lookback,
                "warm-start state lookback mismatch");

  RolloutRecord& rec = out.record;
  rec.states.reserve(T + 1);
  Vector x0 = options.start_state.size() ? options.start_state
                                         : Vector(Vector::Zero(d_x));
  detail::check(x0.size() == d_x, "start state dimension mismatch");
  rec.states.push_back(x0);

  const int SL = params.lookback + params.memory;
  double total = 0.0;
  for (int t = 1; t <= T; ++t) {
    StepContext ctx{t, rec.states, rec.actions, rec.disturbances};
    Vector u_base = base_policy(ctx);
    detail::check(u_base.size() == d_u, "base policy action dimension");

    // Offset from the last L reconstructed disturbances.
    Vector o = Vector::Zero(d_u);
    for (int r = 1; r <= params.memory; ++r) {
      o += cs.M[r - 1] * cs.w_hist[SL - r];
    }
    Vector a = u_base + o;

    double c = costs.value(t, rec.states.back(), a);
    Vector w_exo = exogenous(t, rec.states.back());
    Vector fx_plant = transition(*plant, t, rec.states.back(), a);
    Vector x_next = fx_plant + w_exo;
    if (!x_next.allFinite()) {
      throw DivergedRollout("state became non-finite", t);
    }
    // Reconstruct against the model; when plant and model coincide this
    // is the exogenous disturbance to one ulp.
    Vector w = options.plant
                   ? Vector(x_next - transition(model, t, rec.states.back(), a))
                   : Vector(x_next - fx_plant);

    if (params.learning_rate > 0.0) {
      MatrixSeq g = gpc_loss_grad(model, costs, cs.M, cs.u_hist, u_base,
                                  cs.w_hist, t, params.lookback);
      double norm2 = 0.0;
      for (int r = 0; r < params.memory; ++r) {
        cs.M[r] -= params.learning_rate * g[r];
        norm2 += g[r].squaredNorm();
      }
      cs.M = project_spectral(std::move(cs.M), params.gamma);
      cs.last_grad_norm = std::sqrt(norm2);
    }

    cs.u_hist.erase(cs.u_hist.begin());
    cs.u_hist.push_back(u_base);
    cs.w_hist.erase(cs.w_hist.begin());
    cs.w_hist.push_back(w);
    cs.t += 1;

    rec.actions.push_back(std::move(a));
    rec.offsets.push_back(std::move(o));
    rec.disturbances.push_back(std::move(w));
    rec.step_costs.push_back(c);
    rec.states.push_back(std::move(x_next));
    total += c;
  }
  rec.average_cost = T > 0 ? total / T : 0.0;
  return out;
}

}  // namespace

GpcRolloutResult gpc_rollout(const System& model, const Policy& base_policy,
                             const DisturbanceModel& exogenous,
                             const CostModel& costs, const GPCParams& params,
                             const GpcRolloutOptions& options) {
  const int i = options.rollout_index;
  return run_gpc(
      model, base_policy,
      [&exogenous, i](int t, const Vector& x) {
        return exogenous.eval(i, t, x);
      },
      costs, params, options);
}

GpcRolloutResult gpc_rollout(const System& model, const Policy& base_policy,
                             const VectorSeq& w, const CostModel& costs,
                             const GPCParams& params,
                             const GpcRolloutOptions& options) {
  const System* plant = options.plant ? options.plant : &model;
  detail::check(static_cast<int>(w.size()) == horizon(*plant),
                "disturbance sequence length mismatch with horizon");
  return run_gpc(
      model, base_policy, [&w](int t, const Vector&) { return w[t - 1]; },
      costs, params, options);
}

double gpc_theory_learning_rate(const GpcTheoryConstants& c, int T) {
  detail::check(c.delta > 0.0,
                "theoretical learning rate needs a strongly stable system "
                "(delta > 0)");
  detail::check(T >= 1, "horizon must be >= 1");
  double grad_bound = c.G * c.L * c.W * (c.U + c.gamma * c.L * c.W) *
                      (1.0 + c.kappa * c.kappa / (c.delta * c.delta));
  double diameter_M = 2.0 * c.gamma * std::sqrt(static_cast<double>(c.L));
  return diameter_M / (grad_bound * std::sqrt(static_cast<double>(T)));
}

int gpc_theory_lookback(double delta, double learning_rate) {
  detail::check(delta > 0.0, "lookback schedule needs delta > 0");
  detail::check(learning_rate > 0.0 && learning_rate < 1.0,
                "lookback schedule expects a learning rate in (0, 1)");
  return std::max(1, static_cast<int>(
                         std::ceil(std::log(1.0 / learning_rate) / delta)));
}

}  // namespace igpc
