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

#include "igpc/cost.hpp"

#include "igpc/errors.hpp"

namespace igpc {

CostModel quadratic_cost(const Matrix& Q, const Matrix& R,
                         const Vector& x_goal, const Vector& u_ref) {
  detail::check(Q.rows() == Q.cols(), "Q must be square");
  detail::check(R.rows() == R.cols(), "R must be square");
  Vector xg = x_goal.size() ? x_goal : Vector(Vector::Zero(Q.rows()));
  Vector ur = u_ref.size() ? u_ref : Vector(Vector::Zero(R.rows()));
  detail::check(xg.size() == Q.rows(), "x_goal dimension mismatch with Q");
  detail::check(ur.size() == R.rows(), "u_ref dimension mismatch with R");

  CostModel c;
  c.value = [Q, R, xg, ur](int, const Vector& x, const Vector& u) -> double {
    Vector dx = x - xg;
    Vector du = u - ur;
    return dx.dot(Q * dx) + du.dot(R * du);
  };
  c.grad_x = [Q, xg](int, const Vector& x, const Vector&) -> Vector {
    return 2.0 * Q * (x - xg);
  };
  c.grad_u = [R, ur](int, const Vector&, const Vector& u) -> Vector {
    return 2.0 * R * (u - ur);
  };
  c.hess_xx = [Q](int, const Vector&, const Vector&) -> Matrix {
    return 2.0 * Q;
  };
  c.hess_uu = [R](int, const Vector&, const Vector&) -> Matrix {
    return 2.0 * R;
  };
  c.hess_ux = [Q, R](int, const Vector&, const Vector&) -> Matrix {
    return Matrix::Zero(R.rows(), Q.rows());
  };
  return c;
}

}  // namespace igpc
