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

#ifndef IGPC_ENVIRONMENTS_HPP_
#define IGPC_ENVIRONMENTS_HPP_

#include <string>

#include "igpc/cost.hpp"
#include "igpc/sets.hpp"
#include "igpc/system.hpp"
#include "igpc/types.hpp"

namespace igpc {

// A benchmark task: dynamics, cost, start/goal, and a sensible action
// set. `trim_action` is the action that holds the start state in
// equilibrium (gravity compensation for the quadrotor, zero elsewhere);
// planners initialize their plans with it.
struct Environment {
  std::string name;
  System system;
  CostModel costs;
  Vector start_state;
  Vector goal_state;
  Vector trim_action;
  double dt = 1.0;
  ConvexSet action_set;
};

// "double_integrator": x = (position, velocity), scalar action,
//   x_{t+1} = [[1, 1], [0, 1]] x + [0, 1]' u. Start (1, 0), goal origin,
//   cost |x|^2 + 0.1 u^2.
//
// "planar_quadrotor": x = (px, py, theta, vx, vy, omega), u = two rotor
//   thrusts. Unit mass, gravity 9.81, thrust torque arm such that
//   omega' = omega + dt (u1 - u2). Euler integration at dt (default
//   0.05). Start at rest at the origin, goal hover at (1, 1), cost
//   weights positions 1, angle 0.2, velocities 0.1, action deviation
//   from the 4.905-per-rotor hover trim 0.01.
//
// "reacher_2dof": two-link arm in the horizontal plane (no gravity),
//   x = (q1, q2, w1, w2, ex, ey) where (ex, ey) is the end effector
//   position carried through the state so the reach cost is quadratic.
//   Links of length 0.5, unit masses, viscous joint damping 0.05, Euler
//   at dt (default 0.05). Start stretched along +x at rest, goal end
//   effector (0, sqrt(3)/2), cost weights end effector 5, joint
//   velocities 0.05, action 0.01.
Environment make_double_integrator(int T);
Environment make_planar_quadrotor(int T, double dt = 0.05);
Environment make_reacher_2dof(int T, double dt = 0.05);

// Dispatch by name; throws ConfigError for unknown names.
Environment make_environment(const std::string& name, int T, double dt = 0.05);

}  // namespace igpc

#endif  // IGPC_ENVIRONMENTS_HPP_
