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

#ifndef IGPC_LQR_HPP_
#define IGPC_LQR_HPP_

#include "igpc/cost.hpp"
#include "igpc/types.hpp"

namespace igpc {

// Second-order Taylor model of the per-step costs around a pivot
// trajectory: for dx = x - x0_t, du = u - u0_t,
//   c_t ~ c0_t + q_t.dx + r_t.du
//         + 1/2 (dx' Qxx_t dx + du' Ruu_t du) + du' Pux_t dx.
struct QuadraticModel {
  VectorSeq x0, u0;   // pivots
  std::vector<double> c0;
  VectorSeq q, r;     // gradients at the pivot
  MatrixSeq Qxx, Ruu; // Hessian blocks
  MatrixSeq Pux;      // d_u x d_x cross block

  int horizon() const { return static_cast<int>(x0.size()); }
  double value(int t, const Vector& x, const Vector& u) const;
};

// Taylor-expand costs around (xs, us); xs may have T+1 entries (the
// terminal state is ignored).
QuadraticModel quadratize(const CostModel& costs, const VectorSeq& xs,
                          const VectorSeq& us);

struct AffineLqrSolution {
  VectorSeq k;   // feedforward corrections
  MatrixSeq K;   // feedback gains (d_u x d_x)
  // Levenberg-style regularization that was needed to keep the control
  // Hessian positive definite (0 when none).
  double regularization = 0.0;
};

// Backward affine Riccati recursion for the time-varying LQ problem
//   min sum_t q_t.dx_t + r_t.du_t + 1/2 dx'Qxx dx + 1/2 du'Ruu du + du'Pux dx
//   s.t. dx_{t+1} = A_t dx_t + B_t du_t,   dx_1 = 0,
// returning du_t = k_t + K_t dx_t. Control Hessians are regularized by
// lambda I starting at reg0, growing tenfold on factorization failure;
// SolveError after max growth.
AffineLqrSolution lqr_tv_solve(const MatrixSeq& A, const MatrixSeq& B,
                               const QuadraticModel& model,
                               double reg0 = 1e-6);

}  // namespace igpc

#endif  // IGPC_LQR_HPP_
