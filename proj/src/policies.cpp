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

#include "igpc/policies.hpp"

#include <string>
#include <utility>

#include "igpc/errors.hpp"

namespace igpc {

Vector AffineGainPolicy::action(int t, const Vector& x) const {
  detail::check(t >= 1 && t <= horizon(), "affine policy step out of range");
  const int i = t - 1;
  return u_nom[i] + alpha * k[i] + K[i] * (x - x_nom[i]);
}

Vector dac_offset(const DACPolicy& dac, const VectorSeq& w_recent) {
  detail::check(static_cast<int>(w_recent.size()) == dac.memory(),
                "dac_offset needs exactly memory() recent disturbances, got " +
                    std::to_string(w_recent.size()));
  if (dac.M.empty()) return Vector();
  Vector o = Vector::Zero(dac.M[0].rows());
  for (int j = 0; j < dac.memory(); ++j) {
    detail::check(w_recent[j].size() == dac.M[j].cols(),
                  "disturbance dimension mismatch in dac_offset");
    o += dac.M[j] * w_recent[j];
  }
  return o;
}

Vector dac_action(const DACPolicy& dac, const VectorSeq& w_recent,
                  const Vector& base_action) {
  Vector o = dac_offset(dac, w_recent);
  detail::check(o.size() == 0 || o.size() == base_action.size(),
                "offset dimension mismatch with base action");
  return o.size() ? Vector(base_action + o) : base_action;
}

Matrix clip_spectral(const Matrix& m, double gamma) {
  detail::check(gamma >= 0.0, "spectral bound must be nonnegative");
  if (m.size() == 0) return m;
  // A single-row or single-column matrix has one singular value, its
  // Euclidean norm, so the clip is a rescale. This shape dominates the
  // comparator's inner loop; skipping the SVD there matters.
  if (std::min(m.rows(), m.cols()) == 1) {
    const double n = m.norm();
    if (n <= gamma) return m;
    return m * (gamma / n);
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector s = svd.singularValues();
  if (s(0) <= gamma) return m;
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::min(s(i), gamma);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

MatrixSeq project_spectral(MatrixSeq M, double gamma) {
  for (Matrix& m : M) m = clip_spectral(m, gamma);
  return M;
}

VectorSeq project_plan(VectorSeq u, const ConvexSet& action_set) {
  for (Vector& v : u) v = project(action_set, v);
  return u;
}

Policy as_policy(const OpenLoopPlan& plan) {
  return [plan](const StepContext& ctx) -> Vector {
    detail::check(ctx.t >= 1 && ctx.t <= plan.horizon(),
                  "open-loop plan step out of range");
    return plan.u[ctx.t - 1];
  };
}

Policy as_policy(const AffineGainPolicy& gains) {
  return [gains](const StepContext& ctx) -> Vector {
    return gains.action(ctx.t, ctx.x());
  };
}

Policy linear_feedback_policy(const Matrix& K) {
  return [K](const StepContext& ctx) -> Vector { return K * ctx.x(); };
}

Policy dac_over(const DACPolicy& dac, Policy base) {
  return [dac, base = std::move(base)](const StepContext& ctx) -> Vector {
    Vector a = base(ctx);
    if (dac.memory() == 0) return a;
    const int d_x = dac.M[0].cols();
    VectorSeq recent(dac.memory(), Vector::Zero(d_x));
    for (int j = 1; j <= dac.memory(); ++j) {
      const int idx = ctx.t - j;  // 1-based step of w_{t-j}
      if (idx >= 1) recent[j - 1] = ctx.disturbances[idx - 1];
    }
    return dac_action(dac, recent, a);
  };
}

Policy superpose(Policy first, Policy second) {
  return [first = std::move(first),
          second = std::move(second)](const StepContext& ctx) -> Vector {
    return first(ctx) + second(ctx);
  };
}

}  // namespace igpc
