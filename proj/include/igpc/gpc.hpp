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

#ifndef IGPC_GPC_HPP_
#define IGPC_GPC_HPP_

#include "igpc/cost.hpp"
#include "igpc/disturbance.hpp"
#include "igpc/policies.hpp"
#include "igpc/rollout.hpp"
#include "igpc/system.hpp"
#include "igpc/types.hpp"

namespace igpc {

// Online disturbance-action controller run on top of a base policy.
// At step t it plays a_t = u_t + sum_{j=1}^{L} M_j w_{t-j} where u_t is
// the base action and w are the disturbances reconstructed against the
// model, then takes one projected gradient step on a surrogate of the
// just-suffered cost.
struct GPCParams {
  int memory = 3;    // L, number of disturbance-action matrices
  int lookback = 3;  // S, steps of counterfactual simulation in the surrogate
  // Step size for the M update. Zero freezes M at its initial value
  // (useful for evaluating a fixed controller).
  double learning_rate = 1e-2;
  double gamma = 1.0;  // spectral norm bound on each M_j
};

// Mutable controller state carried across steps (and, when warm-started,
// across rollouts). The history buffers have fixed sizes S + L and S,
// zero-padded on the left, so entry k of w_hist is w_{t-S-L+k} with
// w_i = 0 for i < 1.
struct GPCState {
  MatrixSeq M;      // L matrices, d_u x d_x
  VectorSeq w_hist;  // w_{t-S-L} .. w_{t-1}
  VectorSeq u_hist;  // base actions u_{t-S} .. u_{t-1}
  int t = 1;                     // next step to act at
  double last_grad_norm = 0.0;   // Frobenius norm of the last M gradient
};

// Fresh state: M = 0, empty (all-zero) histories.
GPCState make_gpc_state(const GPCParams& params, int d_x, int d_u);

// Counterfactual state x_hat_t: simulate the model from zero over
// j = max(1, t - S) .. t - 1 with actions u_j + sum_r M_r w_{j-r} and the
// recorded additive disturbances. u_window holds u_{t-S}..u_{t-1} (size
// S), w_window holds w_{t-S-L}..w_{t-1} (size S + L); both are
// zero-padded for indices < 1. When S >= t - 1 and the rollout started
// at x_1 = 0 under the same stationary M, this equals the true x_t.
Vector gpc_surrogate_state(const System& model, const MatrixSeq& M,
                           const VectorSeq& u_window,
                           const VectorSeq& w_window, int t, int lookback);

// Surrogate per-step loss c_t(x_hat_t, u_t + sum_r M_r w_{t-r}).
double gpc_loss(const System& model, const CostModel& costs,
                const MatrixSeq& M, const VectorSeq& u_window,
                const Vector& u_t, const VectorSeq& w_window, int t,
                int lookback);

// Exact gradient of gpc_loss with respect to each M_j, computed by one
// backward (adjoint) pass over the surrogate simulation.
MatrixSeq gpc_loss_grad(const System& model, const CostModel& costs,
                        const MatrixSeq& M, const VectorSeq& u_window,
                        const Vector& u_t, const VectorSeq& w_window, int t,
                        int lookback);

struct GpcRolloutOptions {
  Vector start_state;      // empty = zero
  int rollout_index = 1;   // index into the disturbance process
  // Dynamics actually executed. Null means the model itself. When they
  // differ (real system vs learned/idealized model), the reconstructed
  // disturbances absorb the model error on top of the exogenous input.
  const System* plant = nullptr;
  // Warm-start controller state; copied in, final state returned in the
  // result. Null starts fresh.
  const GPCState* state = nullptr;
};

struct GpcRolloutResult {
  // record.disturbances are reconstructed against the *model*:
  // w_t = x_{t+1} - f_t(x_t, a_t). record.offsets are the DAC terms o_t.
  RolloutRecord record;
  GPCState state;
};

// One episode of the online controller (observe x, act, reconstruct w,
// update M) on top of base_policy, with exogenous disturbances from a
// model. Also available with an explicit disturbance sequence.
GpcRolloutResult gpc_rollout(const System& model, const Policy& base_policy,
                             const DisturbanceModel& exogenous,
                             const CostModel& costs, const GPCParams& params,
                             const GpcRolloutOptions& options = {});

GpcRolloutResult gpc_rollout(const System& model, const Policy& base_policy,
                             const VectorSeq& w, const CostModel& costs,
                             const GPCParams& params,
                             const GpcRolloutOptions& options = {});

// Constants of the control instance used by the theoretical step-size
// rules: cost gradient bound G, disturbance bound W, stability pair
// (kappa, delta), action bound U, DAC class (gamma, L).
struct GpcTheoryConstants {
  double G = 1.0;
  double W = 1.0;
  double kappa = 1.0;
  double delta = 0.5;
  double U = 1.0;
  double gamma = 1.0;
  int L = 3;
};

// Step size eta = D_M / (G_M sqrt(T)) with D_M = 2 gamma sqrt(L) and G_M
// the worst-case surrogate gradient norm G L W (U + gamma L W)
// (1 + kappa^2 / delta^2). Requires delta > 0.
double gpc_theory_learning_rate(const GpcTheoryConstants& c, int T);

// Lookback S = ceil(log(1 / eta) / delta), at least 1. The truncation
// error of the surrogate then decays like the learning rate itself.
int gpc_theory_lookback(double delta, double learning_rate);

}  // namespace igpc

#endif  // IGPC_GPC_HPP_
