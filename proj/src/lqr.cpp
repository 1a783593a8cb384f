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

#include "igpc/lqr.hpp"

#include <cmath>

#include "igpc/errors.hpp"

namespace igpc {

double QuadraticModel::value(int t, const Vector& x, const Vector& u) const {
  const int i = t - 1;
  Vector dx = x - x0[i];
  Vector du = u - u0[i];
  return c0[i] + q[i].dot(dx) + r[i].dot(du) +
         0.5 * dx.dot(Qxx[i] * dx) + 0.5 * du.dot(Ruu[i] * du) +
         du.dot(Pux[i] * dx);
}

QuadraticModel quadratize(const CostModel& costs, const VectorSeq& xs,
                          const VectorSeq& us) {
  const int T = static_cast<int>(us.size());
  detail::check(static_cast<int>(xs.size()) >= T,
                "quadratize needs a pivot state per action");
  QuadraticModel m;
  m.x0.reserve(T);
  for (int t = 1; t <= T; ++t) {
    const Vector& x = xs[t - 1];
    const Vector& u = us[t - 1];
    m.x0.push_back(x);
    m.u0.push_back(u);
    m.c0.push_back(costs.value(t, x, u));
    m.q.push_back(costs.grad_x(t, x, u));
    m.r.push_back(costs.grad_u(t, x, u));
    m.Qxx.push_back(costs.hess_xx(t, x, u));
    m.Ruu.push_back(costs.hess_uu(t, x, u));
    m.Pux.push_back(costs.hess_ux(t, x, u));
    if (!std::isfinite(m.c0.back()) || !m.q.back().allFinite() ||
        !m.r.back().allFinite() || !m.Qxx.back().allFinite() ||
        !m.Ruu.back().allFinite() || !m.Pux.back().allFinite()) {
      throw SolveError("non-finite cost derivatives at step " +
                       std::to_string(t));
    }
  }
  return m;
}

namespace {

// PD solve helper: returns false if the (regularized) matrix is not
// usable as a control Hessian.
bool pd_solve(const Matrix& Quu, const Matrix& rhs, Matrix* out) {
  Eigen::LLT<Matrix> llt(Quu);
  if (llt.info() != Eigen::Success) return false;
  // Guard against semi-definite cases LLT happens to accept.
  Vector d = llt.matrixL().toDenseMatrix().diagonal();
  double dmin = d.minCoeff(), dmax = d.maxCoeff();
  if (!(dmin > 0.0) || dmin < 1e-12 * dmax) return false;
  *out = llt.solve(rhs);
  return out->allFinite();
}

}  // namespace

AffineLqrSolution lqr_tv_solve(const MatrixSeq& A, const MatrixSeq& B,
                               const QuadraticModel& model, double reg0) {
  const int T = model.horizon();
  detail::check(static_cast<int>(A.size()) == T &&
                    static_cast<int>(B.size()) == T,
                "lqr_tv_solve: A/B length mismatch with cost model");
  detail::check(T >= 1, "lqr_tv_solve needs at least one step");
  const int d_x = static_cast<int>(A[0].rows());
  const int d_u = static_cast<int>(B[0].cols());

  // Try unregularized first; only reach for lambda when a control
  // Hessian is not positive definite. This keeps the exact-oracle
  // equivalence on benign instances while still handling indefinite
  // quadratizations.
  double lambda = 0.0;
  for (int attempt = 0; attempt < 16; ++attempt) {
    AffineLqrSolution sol;
    sol.k.assign(T, Vector::Zero(d_u));
    sol.K.assign(T, Matrix::Zero(d_u, d_x));
    sol.regularization = lambda;

    Matrix V = Matrix::Zero(d_x, d_x);
    Vector v = Vector::Zero(d_x);
    bool ok = true;
    for (int t = T; t >= 1; --t) {
      const int i = t - 1;
      Matrix Qxx = model.Qxx[i] + A[i].transpose() * V * A[i];
      Matrix Quu = model.Ruu[i] + B[i].transpose() * V * B[i] +
                   lambda * Matrix::Identity(d_u, d_u);
      Matrix Qux = model.Pux[i] + B[i].transpose() * V * A[i];
      Vector qx = model.q[i] + A[i].transpose() * v;
      Vector qu = model.r[i] + B[i].transpose() * v;

      Matrix rhs(d_u, d_x + 1);
      rhs.leftCols(d_x) = Qux;
      rhs.col(d_x) = qu;
      Matrix kk;
      if (!pd_solve(Quu, rhs, &kk)) {
        ok = false;
        break;
      }
      sol.K[i] = -kk.leftCols(d_x);
      sol.k[i] = -kk.col(d_x);

      V = Qxx - Qux.transpose() * kk.leftCols(d_x);
      V = 0.5 * (V + V.transpose());  // keep the recursion symmetric
      v = qx - Qux.transpose() * kk.col(d_x);
      if (!V.allFinite() || !v.allFinite()) {
        ok = false;
        break;
      }
    }
    if (ok) return sol;
    lambda = lambda == 0.0 ? reg0 : lambda * 10.0;
  }
  throw SolveError(
      "control Hessian not positive definite after maximum regularization");
}

}  // namespace igpc
