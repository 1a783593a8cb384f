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

#ifndef IGPC_TESTS_TEST_UTIL_HPP_
#define IGPC_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <functional>
#include <vector>

#include "igpc/cost.hpp"
#include "igpc/lqr.hpp"
#include "igpc/rng.hpp"
#include "igpc/system.hpp"
#include "igpc/types.hpp"

namespace igpc::testutil {

// Relative error with an absolute floor so near-zero quantities do not
// produce spurious huge ratios.
inline double rel_err(double got, double want, double floor = 1e-8) {
  double scale = std::max({std::fabs(got), std::fabs(want), floor});
  return std::fabs(got - want) / scale;
}

inline double rel_err(const Vector& got, const Vector& want,
                      double floor = 1e-8) {
  double scale = std::max({got.norm(), want.norm(), floor});
  return (got - want).norm() / scale;
}

inline double spectral_norm(const Matrix& m) {
  return m.jacobiSvd().singularValues()(0);
}

// Random matrix with spectral norm exactly `norm`.
inline Matrix random_with_norm(Rng& rng, int rows, int cols, double norm) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.normal();
  double s = spectral_norm(m);
  if (s < 1e-12) return Matrix::Zero(rows, cols);
  return m * (norm / s);
}

// Random (kappa, delta)-strongly-stable LTV system: ||A_t|| <= 1 - delta,
// ||B_t|| <= kappa, with the per-step norms drawn up to the bounds.
inline LinearSystem random_stable_system(Rng& rng, int d_x, int d_u, int T,
                                         double kappa, double delta) {
  LinearSystem sys;
  sys.kappa = kappa;
  sys.delta = delta;
  for (int t = 0; t < T; ++t) {
    sys.A.push_back(
        random_with_norm(rng, d_x, d_x, (1.0 - delta) * rng.uniform(0.5, 1.0)));
    sys.B.push_back(random_with_norm(rng, d_x, d_u, kappa * rng.uniform(0.5, 1.0)));
  }
  return sys;
}

// Random PSD quadratic cost with goal/reference at zero.
inline CostModel random_quadratic_cost(Rng& rng, int d_x, int d_u) {
  Matrix Gx(d_x, d_x), Gu(d_u, d_u);
  for (int r = 0; r < d_x; ++r)
    for (int c = 0; c < d_x; ++c) Gx(r, c) = rng.normal();
  for (int r = 0; r < d_u; ++r)
    for (int c = 0; c < d_u; ++c) Gu(r, c) = rng.normal();
  Matrix Q = Gx * Gx.transpose() / d_x;
  Matrix R = Gu * Gu.transpose() / d_u + 0.1 * Matrix::Identity(d_u, d_u);
  return quadratic_cost(Q, R);
}

// Central finite difference of a scalar function of a vector.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f,
                          const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// Central finite difference of a scalar function of a matrix.
inline Matrix fd_gradient(const std::function<double(const Matrix&)>& f,
                          const Matrix& m, double h = 1e-6) {
  Matrix g(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      Matrix mp = m, mm = m;
      mp(r, c) += h;
      mm(r, c) -= h;
      g(r, c) = (f(mp) - f(mm)) / (2.0 * h);
    }
  }
  return g;
}

// Central finite-difference Jacobian of a vector function of a vector.
inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f,
                          const Vector& x, double h = 1e-6) {
  Vector f0 = f(x);
  Matrix J(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    J.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

inline Vector random_vector(Rng& rng, int d, double scale = 1.0) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = scale * rng.normal();
  return v;
}

// Stacked-deviation reference solution for the time-varying LQ problem:
// minimize sum_t model.value(t, x0_t + dx_t, u0_t + du_t) subject to
// dx_{t+1} = A_t dx_t + B_t du_t from a given dx_1. The objective is an
// exact quadratic in the stacked du, so its Hessian and gradient are
// recovered exactly (up to roundoff) from function evaluations at basis
// points, then solved densely. Intended for small instances only.
inline VectorSeq lqr_batch_solution(const MatrixSeq& A, const MatrixSeq& B,
                                    const QuadraticModel& model,
                                    const Vector& dx1) {
  const int T = model.horizon();
  const int d_u = static_cast<int>(model.u0[0].size());
  const int n = T * d_u;
  auto objective = [&](const Vector& z) {
    Vector dx = dx1;
    double total = 0.0;
    for (int t = 1; t <= T; ++t) {
      Vector du = z.segment((t - 1) * d_u, d_u);
      total += model.value(t, model.x0[t - 1] + dx, model.u0[t - 1] + du);
      dx = A[t - 1] * dx + B[t - 1] * du;
    }
    return total;
  };
  const double j0 = objective(Vector::Zero(n));
  std::vector<double> jp(n), jm(n);
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e[i] = 1.0;
    jp[i] = objective(e);
    e[i] = -1.0;
    jm[i] = objective(e);
  }
  Vector g(n);
  Matrix H(n, n);
  for (int i = 0; i < n; ++i) {
    g[i] = 0.5 * (jp[i] - jm[i]);
    H(i, i) = jp[i] + jm[i] - 2.0 * j0;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vector e = Vector::Zero(n);
      e[i] = 1.0;
      e[j] = 1.0;
      double hij = objective(e) - jp[i] - jp[j] + j0;
      H(i, j) = hij;
      H(j, i) = hij;
    }
  }
  Vector z = H.ldlt().solve(-g);
  VectorSeq du(T);
  for (int t = 0; t < T; ++t) du[t] = z.segment(t * d_u, d_u);
  return du;
}

// Deviations produced by rolling the affine policy du_t = k_t + K_t dx_t
// through the same deviation dynamics.
inline VectorSeq lqr_policy_controls(const MatrixSeq& A, const MatrixSeq& B,
                                     const AffineLqrSolution& sol,
                                     const Vector& dx1) {
  const int T = static_cast<int>(sol.k.size());
  Vector dx = dx1;
  VectorSeq du(T);
  for (int t = 0; t < T; ++t) {
    du[t] = sol.k[t] + sol.K[t] * dx;
    dx = A[t] * dx + B[t] * du[t];
  }
  return du;
}

// Largest action deviation between the Riccati policy and the stacked
// reference solution over the supplied starts.
inline double lqr_oracle_gap(const MatrixSeq& A, const MatrixSeq& B,
                             const QuadraticModel& model,
                             const AffineLqrSolution& sol,
                             const std::vector<Vector>& starts) {
  double worst = 0.0;
  for (const Vector& dx1 : starts) {
    VectorSeq want = lqr_batch_solution(A, B, model, dx1);
    VectorSeq got = lqr_policy_controls(A, B, sol, dx1);
    for (size_t t = 0; t < want.size(); ++t)
      worst = std::max(worst, (want[t] - got[t]).norm());
  }
  return worst;
}

}  // namespace igpc::testutil

#endif  // IGPC_TESTS_TEST_UTIL_HPP_
