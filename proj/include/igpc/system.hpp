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

#ifndef IGPC_SYSTEM_HPP_
#define IGPC_SYSTEM_HPP_

#include <functional>
#include <variant>

#include "igpc/types.hpp"

namespace igpc {

// Time-varying linear dynamics x_{t+1} = A_t x_t + B_t u_t + w_t.
// If a stabilizing gain sequence K is supplied, the system is the
// transformed one: x_{t+1} = (A_t - B_t K_t) x_t + B_t u_t + w_t, i.e.
// the policy acts on top of the baseline -K_t x_t and all analysis
// (Jacobians, transfer operators) sees the closed-loop A.
struct LinearSystem {
  MatrixSeq A;  // length T, d_x x d_x
  MatrixSeq B;  // length T, d_x x d_u
  MatrixSeq K;  // optional, length T, d_u x d_x; empty when unused

  // Declared strong-stability constants: ||A_t|| <= 1 - delta and
  // ||B_t|| <= kappa in spectral norm (for the effective A when K is
  // set). Purely declarative; validate_stability checks them. Systems
  // that do not satisfy any such pair (the double integrator) leave
  // delta at zero and cannot use the theoretical step-size schedules.
  double kappa = 1.0;
  double delta = 0.0;

  int horizon() const { return static_cast<int>(A.size()); }
  int state_dim() const { return A.empty() ? 0 : static_cast<int>(A[0].rows()); }
  int action_dim() const { return B.empty() ? 0 : static_cast<int>(B[0].cols()); }

  // A_t - B_t K_t when stabilized, A_t otherwise. 1-based t.
  Matrix effective_A(int t) const;
};

// Convenience: time-invariant (A, B) replicated over a horizon.
LinearSystem make_lti(const Matrix& A, const Matrix& B, int T,
                      double kappa = 1.0, double delta = 0.0);

// General dynamics x_{t+1} = f(t, x_t, u_t) + w_t with user-supplied
// Jacobians. t is 1-based.
struct NonlinearSystem {
  int T = 0;
  int d_x = 0;
  int d_u = 0;
  std::function<Vector(int, const Vector&, const Vector&)> f;
  std::function<Matrix(int, const Vector&, const Vector&)> df_dx;
  std::function<Matrix(int, const Vector&, const Vector&)> df_du;
};

using System = std::variant<LinearSystem, NonlinearSystem>;

int horizon(const System& sys);
int state_dim(const System& sys);
int action_dim(const System& sys);

// Disturbance-free transition f_t(x, u). Throws DimensionError on shape
// mismatch and if t is outside 1..T.
Vector transition(const System& sys, int t, const Vector& x, const Vector& u);

// One step x_{t+1} = f_t(x, u) + w. Throws DivergedRollout if the result
// is non-finite.
Vector step(const System& sys, int t, const Vector& x, const Vector& u,
            const Vector& w);

// d f_t / dx and d f_t / du at (x, u). For LinearSystem these are the
// (effective) A_t and B_t regardless of the evaluation point.
Matrix jacobian_x(const System& sys, int t, const Vector& x, const Vector& u);
Matrix jacobian_u(const System& sys, int t, const Vector& x, const Vector& u);

// Report on the declared (kappa, delta) pair of a linear system: the
// realized per-step spectral norms and whether every step satisfies
// ||A_t|| <= 1 - delta and ||B_t|| <= kappa. Informational only; nothing
// in the library refuses to run on an unstable system.
struct StabilityReport {
  bool satisfied = false;
  double max_A_norm = 0.0;  // max_t ||A_t^eff||
  double max_B_norm = 0.0;  // max_t ||B_t||
};
StabilityReport validate_stability(const LinearSystem& sys);

// Wrap a LinearSystem as a NonlinearSystem (handy for instrumenting
// call counts in tests or composing with state-dependent effects).
NonlinearSystem as_nonlinear(const LinearSystem& sys);

}  // namespace igpc

#endif  // IGPC_SYSTEM_HPP_
