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

#ifndef IGPC_POLICIES_HPP_
#define IGPC_POLICIES_HPP_

#include "igpc/rollout.hpp"
#include "igpc/sets.hpp"
#include "igpc/types.hpp"

namespace igpc {

// Open-loop plan u_{1:T} with the per-step feasible set U it must live in.
struct OpenLoopPlan {
  VectorSeq u;
  ConvexSet action_set = BallSet{1.0, {}};

  int horizon() const { return static_cast<int>(u.size()); }
};

// Disturbance-action controller: offset_t = sum_{j=1}^{L} M_j w_{t-j}.
// Each M_j is d_u x d_x with spectral norm at most gamma.
struct DACPolicy {
  MatrixSeq M;
  double gamma = 1.0;

  int memory() const { return static_cast<int>(M.size()); }
};

// Time-varying affine feedback around a nominal trajectory:
//   a_t = u_nom_t + alpha * k_t + K_t (x_t - x_nom_t).
// K_t is d_u x d_x. This is the policy class the iterative planners
// line-search over (alpha scales only the feedforward correction).
struct AffineGainPolicy {
  double alpha = 1.0;
  VectorSeq x_nom;  // length T
  VectorSeq u_nom;  // length T
  VectorSeq k;      // length T
  MatrixSeq K;      // length T

  int horizon() const { return static_cast<int>(u_nom.size()); }
  Vector action(int t, const Vector& x) const;
};

// DAC offset given the last L disturbances, newest first:
// w_recent[0] = w_{t-1}, w_recent[1] = w_{t-2}, ... Requires exactly
// memory() entries; callers zero-pad early steps themselves (as_policy
// does this).
Vector dac_offset(const DACPolicy& dac, const VectorSeq& w_recent);

// offset + base action.
Vector dac_action(const DACPolicy& dac, const VectorSeq& w_recent,
                  const Vector& base_action);

// Clip every singular value of m at gamma. Identity when already inside.
Matrix clip_spectral(const Matrix& m, double gamma);

// Projection of each M_j onto { ||M|| <= gamma } (Frobenius-nearest,
// which is exactly singular-value clipping).
MatrixSeq project_spectral(MatrixSeq M, double gamma);

// Per-step projection of a plan onto the action set.
VectorSeq project_plan(VectorSeq u, const ConvexSet& action_set);

// Policy adapters.
Policy as_policy(const OpenLoopPlan& plan);
Policy as_policy(const AffineGainPolicy& gains);

// u_t = K x_t.
Policy linear_feedback_policy(const Matrix& K);

// DAC stacked on a base policy: a_t = base(ctx) + sum_j M_j w_{t-j},
// reading disturbances from the rollout context, zero for t-j < 1.
Policy dac_over(const DACPolicy& dac, Policy base);

// a_t = first(ctx) + second(ctx). DAC-class policies are closed under
// this superposition.
Policy superpose(Policy first, Policy second);

}  // namespace igpc

#endif  // IGPC_POLICIES_HPP_
