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

#ifndef IGPC_IGPC_HPP_
#define IGPC_IGPC_HPP_

#include <functional>

#include "igpc/gpc.hpp"
#include "igpc/lqr.hpp"
#include "igpc/policies.hpp"

namespace igpc {

// Retracting line search: try alpha = alpha_plus * shrink^k for
// k = 0..max_trials-1, accept the first candidate improving on the
// previously accepted cost, keep the previous plan if none does.
struct LineSearchParams {
  double alpha_plus = 1.0;
  double shrink = 0.5;
  int max_trials = 8;
};

// Outer-loop configuration. In gradient mode the plan is refined by
// projected gradient with rate eta_out (or the theory schedule
// eta_out = U / (G kappa delta^-2 (kappa U + kappa gamma L W + W)
// sqrt(N)) when theory_schedule is set). In lqr_step mode each episode
// is followed by an affine LQR update with a retracting line search, the
// variant used for the nonlinear benchmarks.
struct IGPCConfig {
  enum class Update { kGradient, kLqrStep };
  Update update = Update::kGradient;
  int rollouts = 1;  // N
  double eta_out = 0.1;
  bool theory_schedule = false;
  GpcTheoryConstants constants;  // consulted by theory_schedule
  GPCParams gpc;
  LineSearchParams line_search;  // lqr_step mode only
  // Keep the inner controller's M across rollouts instead of resetting
  // it. Off by default: the regret comparator re-picks M per episode.
  bool warm_start_gpc = false;
};

// One refinement episode: the plan that was executed, what happened, and
// how long it took.
struct EpisodeResult {
  int index = 0;  // 1-based rollout index
  RolloutRecord record;
  VectorSeq plan;     // u^i, before the update triggered by this episode
  double loss = 0.0;  // record.average_cost
  double wall_time_s = 0.0;
};

// Per-rollout environment hand-out. Pointers must outlive the run; the
// disturbance model is evaluated at rollout_index.
struct EpisodeSpec {
  const System* system = nullptr;
  const DisturbanceModel* disturbance = nullptr;
  const CostModel* costs = nullptr;
  int rollout_index = 1;
  Vector start_state;  // empty = zero
};
using EnvStream = std::function<EpisodeSpec(int)>;

// Stream that hands out the same environment every episode, with the
// rollout index advancing so the disturbance process unfolds.
EnvStream fixed_environment(const System& sys, const DisturbanceModel& dist,
                            const CostModel& costs,
                            const Vector& start_state = Vector());

// Gradient of the averaged rollout cost J(u + o | f, w) with respect to
// the plan u, offsets held fixed, by one adjoint pass. The recorded
// offsets and disturbances are replayed as constants; this is the outer
// update's gradient with the inner controller frozen.
VectorSeq outer_gradient(const System& sys, const VectorSeq& u,
                         const VectorSeq& offsets, const VectorSeq& w,
                         const CostModel& costs,
                         const Vector& start_state = Vector());

// Affine LQR update around a finished episode: quadratize the costs and
// linearize `linearize_on` along (states, actions), solve the
// time-varying affine LQG, and package the result as the next rollout
// policy with the given alpha.
struct LqrStepResult {
  VectorSeq k;
  MatrixSeq K;
  AffineGainPolicy policy;
  double regularization = 0.0;
};
LqrStepResult igpc_lqr_update(const RolloutRecord& episode,
                              const System& linearize_on,
                              const CostModel& costs, double alpha);

struct IgpcRunResult {
  std::vector<EpisodeResult> episodes;
  OpenLoopPlan final_plan;
};

// N rollouts of plan refinement with the GPC controller overlaid on each
// execution. In lqr_step mode the stream is treated as a fixed
// environment (episode 1's spec) and line-search probes consume rollout
// indices; episodes then correspond to accepted iterations.
IgpcRunResult igpc_run(const EnvStream& stream, OpenLoopPlan initial_plan,
                       const IGPCConfig& config);

}  // namespace igpc

#endif  // IGPC_IGPC_HPP_
