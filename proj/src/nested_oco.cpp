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

#include "igpc/nested_oco.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "igpc/errors.hpp"
#include "igpc/rng.hpp"

namespace igpc {

OgdLearner make_ogd(const ConvexSet& set, const Vector& init, double diameter,
                    double lipschitz) {
  detail::check(init.size() > 0, "OGD initial point must be nonempty");
  detail::check(diameter >= 0.0 && lipschitz >= 0.0,
                "OGD constants must be nonnegative");
  OgdLearner learner;
  learner.set = set;
  learner.iterate = project(set, init);
  learner.diameter = diameter > 0.0 ? diameter : igpc::diameter(set);
  learner.lipschitz = lipschitz;
  learner.gradient_sum = Vector::Zero(init.size());
  return learner;
}

void ogd_observe(OgdLearner& learner, const Vector& grad) {
  detail::check(grad.size() == learner.iterate.size(),
                "OGD gradient dimension mismatch");
  detail::check(grad.allFinite(), "OGD gradient is not finite");
  learner.played_linear_loss += grad.dot(learner.iterate);
  learner.gradient_sum += grad;
  learner.observed_lipschitz =
      std::max(learner.observed_lipschitz, grad.norm());
  learner.rounds += 1;

  const double g = learner.lipschitz > 0.0 ? learner.lipschitz
                                           : learner.observed_lipschitz;
  if (g <= 0.0) return;  // all-zero gradients so far: stay put
  const double rate =
      learner.diameter / (g * std::sqrt(static_cast<double>(learner.rounds)));
  learner.iterate = project(learner.set, learner.iterate - rate * grad);
}

double ogd_linear_regret(const OgdLearner& learner) {
  if (learner.rounds == 0) return 0.0;
  const Vector best = linear_minimizer(learner.set, learner.gradient_sum);
  return learner.played_linear_loss - learner.gradient_sum.dot(best);
}

NestedRunResult nested_run(
    const NestedGame& game, const OgdLearner& outer,
    const std::function<OgdLearner(int)>& inner_factory) {
  detail::check(game.episodes >= 1 && game.rounds >= 1,
                "nested game needs at least one episode and one round");
  detail::check(static_cast<bool>(game.value) &&
                    static_cast<bool>(game.grad_x) &&
                    static_cast<bool>(game.grad_y),
                "nested game oracles must all be set");

  NestedRunResult result;
  result.outer_decisions.reserve(game.episodes);
  result.inner_decisions.reserve(game.episodes);
  result.losses.reserve(game.episodes);
  result.inner_linear_regrets.reserve(game.episodes);

  OgdLearner a1 = outer;
  for (int i = 1; i <= game.episodes; ++i) {
    const Vector x = a1.iterate;
    OgdLearner a2 = inner_factory(i);

    VectorSeq ys;
    std::vector<double> episode_losses;
    ys.reserve(game.rounds);
    episode_losses.reserve(game.rounds);
    Vector outer_grad_sum = Vector::Zero(x.size());

    for (int t = 1; t <= game.rounds; ++t) {
      const Vector y = a2.iterate;
      const double loss = game.value(i, t, x, y);
      detail::check(std::isfinite(loss), "nested game loss is not finite");
      const Vector gx = game.grad_x(i, t, x, y);
      const Vector gy = game.grad_y(i, t, x, y);
      ys.push_back(y);
      episode_losses.push_back(loss);
      result.total_loss += loss;
      outer_grad_sum += gx;
      ogd_observe(a2, gy);
    }

    ogd_observe(a1, outer_grad_sum);
    result.outer_decisions.push_back(x);
    result.inner_decisions.push_back(std::move(ys));
    result.losses.push_back(std::move(episode_losses));
    result.inner_linear_regrets.push_back(ogd_linear_regret(a2));
  }
  result.outer_linear_regret = ogd_linear_regret(a1);
  return result;
}

namespace {

// Minimizes the convex map y -> sum_t f_t^i(x, y) over the inner set by
// projected gradient with backtracking. Returns the minimizer.
Vector best_inner(const NestedGame& game, int i, const Vector& x,
                  const Vector& y0, int max_iterations, double tolerance) {
  auto objective = [&](const Vector& y) {
    double v = 0.0;
    for (int t = 1; t <= game.rounds; ++t) v += game.value(i, t, x, y);
    return v;
  };
  auto gradient = [&](const Vector& y) {
    Vector g = Vector::Zero(y.size());
    for (int t = 1; t <= game.rounds; ++t) g += game.grad_y(i, t, x, y);
    return g;
  };

  Vector y = project(game.inner_set, y0);
  double fy = objective(y);
  double step = 1.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Vector g = gradient(y);
    Vector candidate = project(game.inner_set, y - step * g);
    double fc = objective(candidate);
    int backtracks = 0;
    while (fc > fy && backtracks < 60) {
      step *= 0.5;
      candidate = project(game.inner_set, y - step * g);
      fc = objective(candidate);
      ++backtracks;
    }
    const double moved = (candidate - y).norm();
    y = candidate;
    fy = fc;
    if (moved <= tolerance * std::max(1.0, y.norm())) break;
    step = std::min(step * 2.0, 1e6);
  }
  return y;
}

}  // namespace

NestedComparator nested_comparator(const NestedGame& game,
                                   const NestedComparatorOptions& options) {
  detail::check(options.multistarts >= 1, "need at least one start");
  Rng rng(options.seed);

  // Decision dimensions come from the set descriptors. A box carries them
  // explicitly; a ball centered at the origin defaults to scalar, which is
  // what the scalar test games use.
  auto set_dim = [](const ConvexSet& set) -> int {
    if (const auto* ball = std::get_if<BallSet>(&set)) {
      return ball->center.size() > 0 ? static_cast<int>(ball->center.size())
                                     : 1;
    }
    const auto& box = std::get<BoxSet>(set);
    return static_cast<int>(box.lo.size());
  };
  const int dx = set_dim(game.outer_set);
  const int dy = set_dim(game.inner_set);

  auto partial_value = [&](const Vector& x, VectorSeq* ys) {
    double total = 0.0;
    for (int i = 1; i <= game.episodes; ++i) {
      const Vector yi =
          best_inner(game, i, x, Vector::Zero(dy), options.max_iterations,
                     options.tolerance);
      if (ys != nullptr) (*ys)[i - 1] = yi;
      for (int t = 1; t <= game.rounds; ++t) total += game.value(i, t, x, yi);
    }
    return total;
  };
  // Danskin: at the inner minimizer, the partial objective's gradient in x
  // is just the x-gradient summed over rounds and episodes.
  auto partial_gradient = [&](const Vector& x) {
    Vector g = Vector::Zero(dx);
    for (int i = 1; i <= game.episodes; ++i) {
      const Vector yi =
          best_inner(game, i, x, Vector::Zero(dy), options.max_iterations,
                     options.tolerance);
      for (int t = 1; t <= game.rounds; ++t) g += game.grad_x(i, t, x, yi);
    }
    return g;
  };

  NestedComparator best;
  best.value = std::numeric_limits<double>::infinity();
  for (int start = 0; start < options.multistarts; ++start) {
    Vector x = start == 0 ? project(game.outer_set, Vector::Zero(dx))
                          : project(game.outer_set,
                                    rng.normal_vector(dx) *
                                        (0.25 * igpc::diameter(game.outer_set)));
    double fx = partial_value(x, nullptr);
    double step = 1.0;
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < options.max_iterations; ++it) {
      const Vector g = partial_gradient(x);
      residual = (x - project(game.outer_set, x - g)).norm();
      if (residual <= options.tolerance * std::max(1.0, x.norm())) break;
      Vector candidate = project(game.outer_set, x - step * g);
      double fc = partial_value(candidate, nullptr);
      int backtracks = 0;
      while (fc > fx && backtracks < 60) {
        step *= 0.5;
        candidate = project(game.outer_set, x - step * g);
        fc = partial_value(candidate, nullptr);
        ++backtracks;
      }
      if ((candidate - x).norm() <=
          1e-14 * std::max(1.0, x.norm()) + 1e-300) {
        x = candidate;
        fx = fc;
        break;
      }
      x = candidate;
      fx = fc;
      step = std::min(step * 2.0, 1e6);
    }
    VectorSeq ys(game.episodes);
    const double value = partial_value(x, &ys);
    if (value < best.value) {
      best.x_star = x;
      best.y_star = std::move(ys);
      best.value = value;
      best.residual = residual;
      best.converged = residual <= 1e3 * options.tolerance;
    }
  }
  return best;
}

double planning_regret_nested(const NestedRunResult& run,
                              const NestedComparator& comparator,
                              const NestedGame& game) {
  const double cells = static_cast<double>(game.episodes) *
                       static_cast<double>(game.rounds);
  return (run.total_loss - comparator.value) / cells;
}

NestedAudit nested_audit(const NestedGame& game, const NestedRunResult& run,
                         const NestedComparator& comparator) {
  NestedAudit audit;
  audit.average_planning_regret =
      planning_regret_nested(run, comparator, game);
  audit.outer_regret = run.outer_linear_regret;
  audit.inner_regret_total = 0.0;
  for (double r : run.inner_linear_regrets) audit.inner_regret_total += r;
  const double cells = static_cast<double>(game.episodes) *
                       static_cast<double>(game.rounds);
  audit.bound = (audit.outer_regret + audit.inner_regret_total) / cells;
  const double guard =
      1e-9 * std::max({1.0, std::abs(audit.bound),
                       std::abs(audit.average_planning_regret)});
  audit.holds = audit.average_planning_regret <= audit.bound + guard;
  return audit;
}

}  // namespace igpc
