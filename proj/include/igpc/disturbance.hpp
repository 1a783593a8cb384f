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

#ifndef IGPC_DISTURBANCE_HPP_
#define IGPC_DISTURBANCE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "igpc/types.hpp"

namespace igpc {

enum class DisturbanceKind {
  kZero,
  kConstantOffset,          // fixed vector, identical across rollouts and steps
  kRolloutGrowingOffset,    // constant per rollout, magnitude ramps with the
                            // rollout index
  kPhaseShiftedSinusoid,    // sinusoid in t with a per-rollout random phase
  kWindField,               // state-dependent: position-proportional kick on
                            // the velocity components (a dispersive wind)
  kPeriodicImpulse,         // magnitude kick every `period` steps
  kCustomSequence,          // explicit per-rollout sequences (e.g. from CSV)
};

DisturbanceKind disturbance_kind_from_name(const std::string& name);
std::string disturbance_kind_name(DisturbanceKind kind);

// Deterministic disturbance process w^i_t. Everything is a pure function
// of (rollout index i, step t, state, seed), so replays are exact and all
// agents facing the same model and indices see identical disturbances.
// Every emitted vector is clipped to the Euclidean ball of radius
// `magnitude` (the W of the analysis).
struct DisturbanceModel {
  DisturbanceKind kind = DisturbanceKind::kZero;
  int dim = 0;                // d_x
  double magnitude = 0.0;     // W, sup bound enforced by clipping
  std::uint64_t seed = 0;

  // Unit direction for the offset/sinusoid/impulse kinds. Empty means a
  // random unit vector derived from the seed.
  Vector direction;

  // Sinusoid: w^i_t = magnitude * sin(2*pi*frequency*t + phi_i) * dir,
  // phi_i uniform in [0, 2*pi) per rollout.
  double frequency = 0.05;

  // Growing offset: scale_i = min(1, growth_rate * (i - 1)).
  double growth_rate = 0.1;

  // Impulse: fires at steps with t % period == phase % period.
  int period = 20;
  int phase = 0;

  // Wind: raw w[vel_k] = gain * x[pos_k] for each paired index, then the
  // whole vector is clipped at `magnitude`. `gain` already includes any
  // integration-step factor.
  double gain = 0.0;
  std::vector<int> wind_position_indices;
  std::vector<int> wind_velocity_indices;

  // Custom: sequences[i-1][t-1]; rollouts past the end reuse the last
  // sequence.
  std::vector<VectorSeq> sequences;

  // w^i_t as a function of the current state. rollout and t are 1-based.
  Vector eval(int rollout, int t, const Vector& x) const;

  // d eval / d x. Zero for all kinds except the wind field.
  Matrix jacobian(int rollout, int t, const Vector& x) const;

  bool state_dependent() const { return kind == DisturbanceKind::kWindField; }

  // The direction actually used (seeded draw if `direction` is empty).
  Vector resolved_direction() const;
};

// The full sequence w^i_{1:T} for state-independent kinds. Throws
// ConfigError for the wind field, whose realization depends on the
// visited states.
VectorSeq realize(const DisturbanceModel& model, int rollout, int T);

}  // namespace igpc

#endif  // IGPC_DISTURBANCE_HPP_
