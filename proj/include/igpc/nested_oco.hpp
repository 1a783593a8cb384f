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

// Two-level online learning: an outer learner picks a decision once per
// episode, an inner learner adapts within the episode, and both see only
// linearized losses. The audit helpers verify, numerically and per run,
// that the average planning regret is bounded by the measured linear
// regrets of the two learners.

#ifndef IGPC_NESTED_OCO_HPP_
#define IGPC_NESTED_OCO_HPP_

#include <functional>
#include <vector>

#include "igpc/sets.hpp"
#include "igpc/types.hpp"

namespace igpc {

// Projected online gradient descent over a convex set with the classic
// D/(G sqrt(t)) rate. When `lipschitz` is zero the gradient-norm running
// maximum stands in for G; supplying it makes the 1.5*D*G*sqrt(n) regret
// bound assertable. The learner additionally keeps enough state to report
// its own measured linear regret against the best fixed point in the set.
struct OgdLearner {
  ConvexSet set;
  Vector iterate;
  double diameter = 0.0;   // D; 0 means "use the set's diameter"
  double lipschitz = 0.0;  // G; 0 means "estimate from observed gradients"

  int rounds = 0;
  double observed_lipschitz = 0.0;
  double played_linear_loss = 0.0;  // sum of g_t . z_t
  Vector gradient_sum;              // sum of g_t
};

OgdLearner make_ogd(const ConvexSet& set, const Vector& init,
                    double diameter = 0.0, double lipschitz = 0.0);

// Records the linear loss grad . iterate, then takes one projected step.
void ogd_observe(OgdLearner& learner, const Vector& grad);

// Measured regret sum_t g_t . z_t - min_{z in set} sum_t g_t . z. Can be
// negative: a moving sequence may beat the best fixed point.
double ogd_linear_regret(const OgdLearner& learner);

// An N-episode, T-round game with jointly convex per-round losses
// f_t^i(x, y). Episodes and rounds are 1-based like everything else here.
struct NestedGame {
  ConvexSet outer_set;
  ConvexSet inner_set;
  int episodes = 0;  // N
  int rounds = 0;    // T
  std::function<double(int i, int t, const Vector& x, const Vector& y)> value;
  std::function<Vector(int i, int t, const Vector& x, const Vector& y)> grad_x;
  std::function<Vector(int i, int t, const Vector& x, const Vector& y)> grad_y;
};

struct NestedRunResult {
  VectorSeq outer_decisions;                // x_i, one per episode
  std::vector<VectorSeq> inner_decisions;   // y_t^i, episodes x rounds
  std::vector<std::vector<double>> losses;  // f_t^i(x_i, y_t^i)
  double total_loss = 0.0;
  double outer_linear_regret = 0.0;         // measured on the fed g_i
  std::vector<double> inner_linear_regrets; // measured per episode
};

// Plays the game. The outer learner decides x_i before episode i, a fresh
// inner learner (from the factory) runs its T rounds on linearized losses
// h_t(y) = grad_y f_t^i(x_i, y_t^i) . y, and after the episode the outer
// learner sees g_i(x) = sum_t grad_x f_t^i(x_i, y_t^i) . x. The round-zero
// inner loss is identically zero, so y_1^i is the factory's initialization.
NestedRunResult nested_run(const NestedGame& game, const OgdLearner& outer,
                           const std::function<OgdLearner(int)>& inner_factory);

// Benchmark point for the regret definition: the best fixed outer decision
// combined with the best per-episode inner decisions,
//   min_{x in K1} sum_i min_{y_i in K2} sum_t f_t^i(x, y_i),
// found by projected gradient descent on the partially minimized objective
// with multistart. Any feasible comparator only weakens measured regret, so
// the audit below stays valid even if this is merely a good local solve
// (it is exact for convex games up to the reported residual).
struct NestedComparator {
  Vector x_star;
  VectorSeq y_star;  // one per episode
  double value = 0.0;
  double residual = 0.0;  // projected-gradient fixed-point residual at x_star
  bool converged = false;
};

struct NestedComparatorOptions {
  int multistarts = 4;
  int max_iterations = 2000;
  double tolerance = 1e-9;
  std::uint64_t seed = 7;
};

NestedComparator nested_comparator(const NestedGame& game,
                                   const NestedComparatorOptions& options = {});

// (total played loss - comparator value) / (N * T).
double planning_regret_nested(const NestedRunResult& run,
                              const NestedComparator& comparator,
                              const NestedGame& game);

// Per-run certificate: by joint convexity and comparator feasibility,
//   average planning regret <= R_outer/(N*T) + (sum_i R_inner^i)/(N*T)
// with R values the measured linear regrets. `bound` is the right-hand
// side; `holds` allows a small floating-point guard.
struct NestedAudit {
  double average_planning_regret = 0.0;
  double outer_regret = 0.0;        // measured, on the episode-sum losses g_i
  double inner_regret_total = 0.0;  // sum over episodes
  double bound = 0.0;
  bool holds = false;
};

NestedAudit nested_audit(const NestedGame& game, const NestedRunResult& run,
                         const NestedComparator& comparator);

}  // namespace igpc

#endif  // IGPC_NESTED_OCO_HPP_
