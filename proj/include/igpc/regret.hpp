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

// Planning-regret benchmark: the best fixed open-loop plan combined with a
// per-rollout optimal disturbance-action overlay, solved in hindsight on
// the recorded disturbance realizations, plus the closed-form linear state
// expansion used to cross-check rollouts and surrogates.

#ifndef IGPC_REGRET_HPP_
#define IGPC_REGRET_HPP_

#include <cstdint>
#include <vector>

#include "igpc/cost.hpp"
#include "igpc/policies.hpp"
#include "igpc/system.hpp"
#include "igpc/types.hpp"

namespace igpc {

// Product of effective state matrices mapping an input injected after step
// j into the state at step k: identity for k = j+1, otherwise
// A_{k-1} A_{k-2} ... A_{j+1}. Valid for 1 <= j < k <= T+1.
Matrix transfer_matrix(const LinearSystem& sys, int j, int k);

// Contribution of a stationary disturbance-action overlay to state k,
// accumulated from steps j..k-1:
//   sum_{t=j}^{k-1} T_{t->k} B_t sum_r M_r w_{t-r},
// with w indices below 1 treated as zero.
Vector psi_operator(const LinearSystem& sys, const MatrixSeq& M,
                    const VectorSeq& w, int j, int k);

// Closed-form state at step t under plan u and stationary overlay M:
//   sum_{j=1}^{t-1} T_{j->t}(B_j u_j + w_j) + psi_{1->t}.
// Pass an empty M for a plain open-loop rollout. Matches the recursive
// rollout exactly (up to accumulation roundoff) when x_1 = 0.
Vector expanded_state(const LinearSystem& sys, const VectorSeq& u,
                      const MatrixSeq& M, const VectorSeq& w, int t);

// Closed form of the lookback surrogate: same sum truncated to the last S
// steps, j running over max(1, t-S)..t-1.
Vector expanded_surrogate_state(const LinearSystem& sys, const VectorSeq& u,
                                const MatrixSeq& M, const VectorSeq& w, int t,
                                int lookback);

// One recorded rollout to be scored in hindsight: the system it ran on,
// the realized disturbances, and the cost. Systems of all rollouts must
// share horizon and dimensions.
struct RolloutSpec {
  const System* system = nullptr;
  VectorSeq disturbances;
  const CostModel* costs = nullptr;
  Vector start_state;  // empty means zero
};

struct ComparatorOptions {
  int memory = 3;       // overlay length L
  double gamma = 1.0;   // overlay spectral bound
  ConvexSet action_set = BallSet{1.0, {}};
  int multistarts = 4;
  int max_iterations = 4000;
  double tolerance = 1e-8;  // projected-gradient fixed-point residual
  std::uint64_t seed = 11;
  int workers = 1;  // multistart solves run in parallel when > 1
};

struct ComparatorSolution {
  OpenLoopPlan u_star;
  std::vector<DACPolicy> overlays;  // one per rollout
  std::vector<double> per_rollout_cost;
  double total_cost = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double multistart_spread = 0.0;  // max - min over multistart end values
  bool converged = false;
};

// Minimizes sum_i J_i(u, M_i) over u in the action set (per step) and each
// overlay spectrally bounded by gamma, via projected gradient descent with
// backtracking and multistart. Jointly convex for linear systems, so the
// residual certifies global optimality there; for nonlinear systems the
// result is a best-found lower-bound estimate and `converged` only attests
// to the local fixed point.
ComparatorSolution comparator_solve(const std::vector<RolloutSpec>& rollouts,
                                    const ComparatorOptions& options = {});

// Replays a comparator candidate on one rollout spec; used both inside the
// solver and by audits that re-derive the reported costs.
double comparator_rollout_cost(const RolloutSpec& spec, const VectorSeq& u,
                               const MatrixSeq& M);

struct RegretSeries {
  std::vector<double> per_rollout;  // J_i - comparator cost of rollout i
  std::vector<double> cumulative;   // running sum of the above
  std::vector<double> average;      // cumulative / i
};

RegretSeries planning_regret(const std::vector<double>& algorithm_costs,
                             const ComparatorSolution& comparator);

}  // namespace igpc

#endif  // IGPC_REGRET_HPP_
