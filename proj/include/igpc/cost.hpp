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

#ifndef IGPC_COST_HPP_
#define IGPC_COST_HPP_

#include <functional>

#include "igpc/types.hpp"

namespace igpc {

// Per-step cost c_t(x, u) with first and second derivatives. t is
// 1-based. hess_ux is the d_u x d_x cross block d^2 c / du dx.
struct CostModel {
  std::function<double(int, const Vector&, const Vector&)> value;
  std::function<Vector(int, const Vector&, const Vector&)> grad_x;
  std::function<Vector(int, const Vector&, const Vector&)> grad_u;
  std::function<Matrix(int, const Vector&, const Vector&)> hess_xx;
  std::function<Matrix(int, const Vector&, const Vector&)> hess_uu;
  std::function<Matrix(int, const Vector&, const Vector&)> hess_ux;

  // Declared Lipschitz constant of the gradient-bearing quantities on
  // the operating envelope, used only by the theoretical step-size
  // schedules. Zero means "not declared".
  double lipschitz = 0.0;
};

// c(x, u) = (x - x_goal)' Q (x - x_goal) + (u - u_ref)' R (u - u_ref).
// Empty x_goal / u_ref mean zero targets.
CostModel quadratic_cost(const Matrix& Q, const Matrix& R,
                         const Vector& x_goal = Vector(),
                         const Vector& u_ref = Vector());

}  // namespace igpc

#endif  // IGPC_COST_HPP_
