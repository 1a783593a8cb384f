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

#include "igpc/disturbance.hpp"

#include <cmath>

#include "igpc/errors.hpp"
#include "igpc/rng.hpp"

namespace igpc {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

Vector clip_to_ball(Vector w, double radius) {
  double n = w.norm();
  if (n > radius) w *= radius / n;
  return w;
}

}  // namespace

DisturbanceKind disturbance_kind_from_name(const std::string& name) {
  if (name == "zero") return DisturbanceKind::kZero;
  if (name == "constant_offset") return DisturbanceKind::kConstantOffset;
  if (name == "rollout_growing_offset")
    return DisturbanceKind::kRolloutGrowingOffset;
  if (name == "phase_shifted_sinusoid")
    return DisturbanceKind::kPhaseShiftedSinusoid;
  if (name == "wind_field") return DisturbanceKind::kWindField;
  if (name == "periodic_impulse") return DisturbanceKind::kPeriodicImpulse;
  if (name == "custom_sequence") return DisturbanceKind::kCustomSequence;
  throw ConfigError("unknown disturbance kind: " + name);
}

std::string disturbance_kind_name(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::kZero: return "zero";
    case DisturbanceKind::kConstantOffset: return "constant_offset";
    case DisturbanceKind::kRolloutGrowingOffset:
      return "rollout_growing_offset";
    case DisturbanceKind::kPhaseShiftedSinusoid:
      return "phase_shifted_sinusoid";
    case DisturbanceKind::kWindField: return "wind_field";
    case DisturbanceKind::kPeriodicImpulse: return "periodic_impulse";
    case DisturbanceKind::kCustomSequence: return "custom_sequence";
  }
  throw ConfigError("unknown disturbance kind enum value");
}

Vector DisturbanceModel::resolved_direction() const {
  if (direction.size() != 0) {
    detail::check(direction.size() == dim, "disturbance direction dimension");
    double n = direction.norm();
    if (n == 0.0) return Vector::Zero(dim);
    return direction / n;
  }
  Rng rng(derive_seed(seed, {0x64697200ULL}));  // stream tag "dir"
  return rng.unit_vector(dim);
}

Vector DisturbanceModel::eval(int rollout, int t, const Vector& x) const {
  detail::check(rollout >= 1, "rollout index must be >= 1");
  detail::check(t >= 1, "step index must be >= 1");
  switch (kind) {
    case DisturbanceKind::kZero:
      return Vector::Zero(dim);
    case DisturbanceKind::kConstantOffset:
      return magnitude * resolved_direction();
    case DisturbanceKind::kRolloutGrowingOffset: {
      double scale = std::min(1.0, growth_rate * (rollout - 1));
      return magnitude * scale * resolved_direction();
    }
    case DisturbanceKind::kPhaseShiftedSinusoid: {
      Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(rollout)}));
      double phi = kTwoPi * rng.uniform();
      return magnitude * std::sin(kTwoPi * frequency * t + phi) *
             resolved_direction();
    }
    case DisturbanceKind::kWindField: {
      detail::check(x.size() == dim, "wind field needs the current state");
      detail::check(wind_position_indices.size() ==
                        wind_velocity_indices.size(),
                    "wind index pairing");
      Vector w = Vector::Zero(dim);
      for (size_t k = 0; k < wind_position_indices.size(); ++k) {
        w[wind_velocity_indices[k]] = gain * x[wind_position_indices[k]];
      }
      return clip_to_ball(std::move(w), magnitude);
    }
    case DisturbanceKind::kPeriodicImpulse: {
      detail::check(period >= 1, "impulse period must be >= 1");
      bool fire = (t % period) == (phase % period);
      return fire ? Vector(magnitude * resolved_direction())
                  : Vector(Vector::Zero(dim));
    }
    case DisturbanceKind::kCustomSequence: {
      detail::check(!sequences.empty(), "custom disturbance has no sequences");
      const VectorSeq& seq =
          sequences[std::min<size_t>(rollout - 1, sequences.size() - 1)];
      detail::check(t <= static_cast<int>(seq.size()),
                    "custom disturbance sequence shorter than horizon");
      return clip_to_ball(seq[t - 1], magnitude);
    }
  }
  throw ConfigError("unknown disturbance kind enum value");
}

Matrix DisturbanceModel::jacobian(int rollout, int t, const Vector& x) const {
  if (kind != DisturbanceKind::kWindField) {
    return Matrix::Zero(dim, dim);
  }
  detail::check(x.size() == dim, "wind field needs the current state");
  Matrix raw_jac = Matrix::Zero(dim, dim);
  Vector raw = Vector::Zero(dim);
  for (size_t k = 0; k < wind_position_indices.size(); ++k) {
    raw_jac(wind_velocity_indices[k], wind_position_indices[k]) = gain;
    raw[wind_velocity_indices[k]] = gain * x[wind_position_indices[k]];
  }
  double n = raw.norm();
  if (n <= magnitude || n == 0.0) return raw_jac;
  // Clipped branch: w = W * raw / ||raw||.
  Matrix scale = Matrix::Identity(dim, dim) / n - raw * raw.transpose() /
                                                      (n * n * n);
  (void)rollout;
  (void)t;
  return magnitude * scale * raw_jac;
}

VectorSeq realize(const DisturbanceModel& model, int rollout, int T) {
  if (model.state_dependent()) {
    throw ConfigError(
        "wind_field disturbances depend on the state and cannot be realized "
        "as a fixed sequence");
  }
  VectorSeq out;
  out.reserve(T);
  Vector dummy = Vector::Zero(model.dim);
  for (int t = 1; t <= T; ++t) out.push_back(model.eval(rollout, t, dummy));
  return out;
}

}  // namespace igpc
