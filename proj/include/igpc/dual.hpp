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

#ifndef IGPC_DUAL_HPP_
#define IGPC_DUAL_HPP_

#include <cmath>

#include <Eigen/Dense>

#include "igpc/types.hpp"

namespace igpc {

// Forward-mode dual number carrying a dynamic-length derivative vector.
// The environment physics are written once, templated on the scalar, and
// evaluated with Dual seeds to get exact Jacobians. Only the operations
// the environments need are provided.
struct Dual {
  double v = 0.0;
  Vector d;  // partials with respect to the seeded inputs

  Dual() = default;
  Dual(double value, int n) : v(value), d(Vector::Zero(n)) {}
  Dual(double value, Vector deriv) : v(value), d(std::move(deriv)) {}
  // Constant lift; the derivative length is patched on first combination
  // with a seeded Dual.
  Dual(double value) : v(value) {}  // NOLINT(runtime/explicit)

  static Dual seed(double value, int n, int slot) {
    Dual out(value, n);
    out.d[slot] = 1.0;
    return out;
  }
};

namespace detail {
// Combine derivative vectors where one operand may be a dimensionless
// constant (empty d).
inline Vector dsum(const Vector& a, double ca, const Vector& b, double cb) {
  if (a.size() == 0 && b.size() == 0) return Vector();
  if (a.size() == 0) return cb * b;
  if (b.size() == 0) return ca * a;
  return ca * a + cb * b;
}
}  // namespace detail

inline Dual operator+(const Dual& a, const Dual& b) {
  return Dual(a.v + b.v, detail::dsum(a.d, 1.0, b.d, 1.0));
}
inline Dual operator-(const Dual& a, const Dual& b) {
  return Dual(a.v - b.v, detail::dsum(a.d, 1.0, b.d, -1.0));
}
inline Dual operator-(const Dual& a) {
  return Dual(-a.v, a.d.size() ? Vector(-a.d) : Vector());
}
inline Dual operator*(const Dual& a, const Dual& b) {
  return Dual(a.v * b.v, detail::dsum(a.d, b.v, b.d, a.v));
}
inline Dual operator/(const Dual& a, const Dual& b) {
  return Dual(a.v / b.v,
              detail::dsum(a.d, 1.0 / b.v, b.d, -a.v / (b.v * b.v)));
}

inline Dual sin(const Dual& a) {
  return Dual(std::sin(a.v), a.d.size() ? Vector(std::cos(a.v) * a.d) : Vector());
}
inline Dual cos(const Dual& a) {
  return Dual(std::cos(a.v), a.d.size() ? Vector(-std::sin(a.v) * a.d) : Vector());
}

// Plain-double overloads so templated physics compile for both scalars.
inline double sin(double a) { return std::sin(a); }
inline double cos(double a) { return std::cos(a); }

}  // namespace igpc

#endif  // IGPC_DUAL_HPP_
