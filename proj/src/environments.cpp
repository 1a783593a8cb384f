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

#include "igpc/environments.hpp"

#include <array>
#include <cmath>

#include "igpc/dual.hpp"
#include "igpc/errors.hpp"

namespace igpc {

namespace {

// ---------------------------------------------------------------------
// Planar quadrotor (birotor). Unit mass, inertia folded into the torque
// so that omega' = omega + dt (u1 - u2).
constexpr double kGravity = 9.81;

template <typename S>
std::array<S, 6> quadrotor_f(const std::array<S, 6>& x,
                             const std::array<S, 2>& u, double dt) {
  const S& px = x[0];
  const S& py = x[1];
  const S& th = x[2];
  const S& vx = x[3];
  const S& vy = x[4];
  const S& om = x[5];
  S thrust = u[0] + u[1];
  return {
      px + dt * vx,
      py + dt * vy,
      th + dt * om,
      vx + dt * (-thrust * sin(th)),
      vy + dt * (thrust * cos(th) - kGravity),
      om + dt * (u[0] - u[1]),
  };
}

// ---------------------------------------------------------------------
// Two-link arm, horizontal plane (no gravity term). Standard rigid-body
// parameters for links of length 0.5, unit mass, center of mass at the
// middle, rod inertia m l^2 / 12, viscous joint damping.
constexpr double kLink = 0.5;
constexpr double kDamping = 0.05;
// a1 = I1 + I2 + m1 r1^2 + m2 (l1^2 + r2^2), a2 = m2 l1 r2, a3 = I2 + m2 r2^2
constexpr double kRodInertia = kLink * kLink / 12.0;
constexpr double kA1 = 2.0 * kRodInertia + 0.0625 + (0.25 + 0.0625);
constexpr double kA2 = kLink * (kLink / 2.0);
constexpr double kA3 = kRodInertia + 0.0625;

template <typename S>
std::array<S, 6> reacher_f(const std::array<S, 6>& x,
                           const std::array<S, 2>& u, double dt) {
  const S& q1 = x[0];
  const S& q2 = x[1];
  const S& w1 = x[2];
  const S& w2 = x[3];

  S c2 = cos(q2);
  S s2 = sin(q2);
  S m11 = S(kA1) + S(2.0 * kA2) * c2;
  S m12 = S(kA3) + S(kA2) * c2;
  S m22 = S(kA3);

  // Coriolis/centrifugal torques.
  S h = S(-kA2) * s2;
  S cor1 = h * w2 * w1 + h * (w1 + w2) * w2;
  S cor2 = S(0.0) - h * w1 * w1;

  S tau1 = u[0] - S(kDamping) * w1 - cor1;
  S tau2 = u[1] - S(kDamping) * w2 - cor2;

  // 2x2 inverse by the determinant.
  S det = m11 * m22 - m12 * m12;
  S qdd1 = (m22 * tau1 - m12 * tau2) / det;
  S qdd2 = (m11 * tau2 - m12 * tau1) / det;

  S q1n = q1 + dt * w1;
  S q2n = q2 + dt * w2;
  // End effector carried through the state, always consistent with the
  // new joint angles.
  S ex = S(kLink) * cos(q1n) + S(kLink) * cos(q1n + q2n);
  S ey = S(kLink) * sin(q1n) + S(kLink) * sin(q1n + q2n);
  return {q1n, q2n, w1 + dt * qdd1, w2 + dt * qdd2, ex, ey};
}

// Wrap a templated step function into a NonlinearSystem with exact
// forward-mode Jacobians.
template <std::array<Dual, 6> (*FDual)(const std::array<Dual, 6>&,
                                       const std::array<Dual, 2>&, double),
          std::array<double, 6> (*FVal)(const std::array<double, 6>&,
                                        const std::array<double, 2>&, double)>
NonlinearSystem wrap6x2(int T, double dt) {
  NonlinearSystem sys;
  sys.T = T;
  sys.d_x = 6;
  sys.d_u = 2;
  sys.f = [dt](int, const Vector& x, const Vector& u) -> Vector {
    std::array<double, 6> xs;
    std::array<double, 2> us;
    for (int i = 0; i < 6; ++i) xs[i] = x[i];
    for (int i = 0; i < 2; ++i) us[i] = u[i];
    auto next = FVal(xs, us, dt);
    Vector out(6);
    for (int i = 0; i < 6; ++i) out[i] = next[i];
    return out;
  };
  auto eval_duals = [dt](const Vector& x, const Vector& u) {
    std::array<Dual, 6> xs;
    std::array<Dual, 2> us;
    for (int i = 0; i < 6; ++i) xs[i] = Dual::seed(x[i], 8, i);
    for (int i = 0; i < 2; ++i) us[i] = Dual::seed(u[i], 8, 6 + i);
    return FDual(xs, us, dt);
  };
  sys.df_dx = [eval_duals](int, const Vector& x, const Vector& u) -> Matrix {
    auto next = eval_duals(x, u);
    Matrix J(6, 6);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) J(r, c) = next[r].d[c];
    return J;
  };
  sys.df_du = [eval_duals](int, const Vector& x, const Vector& u) -> Matrix {
    auto next = eval_duals(x, u);
    Matrix J(6, 2);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 2; ++c) J(r, c) = next[r].d[6 + c];
    return J;
  };
  return sys;
}

Vector vec6(double a, double b, double c, double d, double e, double f) {
  Vector v(6);
  v << a, b, c, d, e, f;
  return v;
}

}  // namespace

Environment make_double_integrator(int T) {
  Environment env;
  env.name = "double_integrator";
  Matrix A(2, 2), B(2, 1);
  A << 1.0, 1.0, 0.0, 1.0;
  B << 0.0, 1.0;
  env.system = make_lti(A, B, T);
  Matrix Q = Matrix::Identity(2, 2);
  Matrix R = 0.1 * Matrix::Identity(1, 1);
  env.costs = quadratic_cost(Q, R);
  env.start_state = Vector::Zero(2);
  env.start_state[0] = 1.0;
  env.goal_state = Vector::Zero(2);
  env.trim_action = Vector::Zero(1);
  env.dt = 1.0;
  env.action_set = BallSet{10.0, {}};
  return env;
}

Environment make_planar_quadrotor(int T, double dt) {
  Environment env;
  env.name = "planar_quadrotor";
  env.system = wrap6x2<&quadrotor_f<Dual>, &quadrotor_f<double>>(T, dt);
  env.dt = dt;
  env.start_state = Vector::Zero(6);
  env.goal_state = vec6(1.0, 1.0, 0.0, 0.0, 0.0, 0.0);
  env.trim_action = Vector::Constant(2, kGravity / 2.0);
  Matrix Q = vec6(1.0, 1.0, 0.2, 0.1, 0.1, 0.1).asDiagonal();
  Matrix R = 0.01 * Matrix::Identity(2, 2);
  env.costs = quadratic_cost(Q, R, env.goal_state, env.trim_action);
  env.action_set = BallSet{30.0, {}};
  return env;
}

Environment make_reacher_2dof(int T, double dt) {
  Environment env;
  env.name = "reacher_2dof";
  env.system = wrap6x2<&reacher_f<Dual>, &reacher_f<double>>(T, dt);
  env.dt = dt;
  // Stretched along +x at rest: q = 0 gives end effector (2 * kLink, 0).
  env.start_state = vec6(0.0, 0.0, 0.0, 0.0, 2.0 * kLink, 0.0);
  const double q_goal = 3.14159265358979323846 / 3.0;  // both joints at 60 deg
  double ex = kLink * std::cos(q_goal) + kLink * std::cos(2.0 * q_goal);
  double ey = kLink * std::sin(q_goal) + kLink * std::sin(2.0 * q_goal);
  env.goal_state = vec6(0.0, 0.0, 0.0, 0.0, ex, ey);
  env.trim_action = Vector::Zero(2);
  Matrix Q = vec6(0.0, 0.0, 0.05, 0.05, 5.0, 5.0).asDiagonal();
  Matrix R = 0.01 * Matrix::Identity(2, 2);
  env.costs = quadratic_cost(Q, R, env.goal_state);
  env.action_set = BallSet{5.0, {}};
  return env;
}

Environment make_environment(const std::string& name, int T, double dt) {
  if (name == "double_integrator") return make_double_integrator(T);
  if (name == "planar_quadrotor") return make_planar_quadrotor(T, dt);
  if (name == "reacher_2dof") return make_reacher_2dof(T, dt);
  throw ConfigError("unknown environment: " + name);
}

}  // namespace igpc
