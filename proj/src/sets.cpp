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

#include "igpc/sets.hpp"

#include <algorithm>
#include <cmath>

#include "igpc/errors.hpp"

namespace igpc {

namespace {

Vector ball_center(const BallSet& b, int dim) {
  if (b.center.size() == 0) return Vector::Zero(dim);
  detail::check(b.center.size() == dim, "ball center dimension mismatch");
  return b.center;
}

}  // namespace

Vector project(const ConvexSet& set, const Vector& v) {
  if (const auto* ball = std::get_if<BallSet>(&set)) {
    Vector c = ball_center(*ball, static_cast<int>(v.size()));
    Vector d = v - c;
    double n = d.norm();
    if (n <= ball->radius) return v;
    return c + d * (ball->radius / n);
  }
  const auto& box = std::get<BoxSet>(set);
  detail::check(box.lo.size() == v.size() && box.hi.size() == v.size(),
                "box bound dimension mismatch");
  return v.cwiseMax(box.lo).cwiseMin(box.hi);
}

double diameter(const ConvexSet& set) {
  if (const auto* ball = std::get_if<BallSet>(&set)) return 2.0 * ball->radius;
  const auto& box = std::get<BoxSet>(set);
  return (box.hi - box.lo).norm();
}

Vector linear_minimizer(const ConvexSet& set, const Vector& g) {
  if (const auto* ball = std::get_if<BallSet>(&set)) {
    Vector c = ball_center(*ball, static_cast<int>(g.size()));
    double n = g.norm();
    if (n == 0.0) return c;
    return c - g * (ball->radius / n);
  }
  const auto& box = std::get<BoxSet>(set);
  detail::check(box.lo.size() == g.size(), "box bound dimension mismatch");
  Vector v(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    v[i] = g[i] >= 0.0 ? box.lo[i] : box.hi[i];
  }
  return v;
}

Vector set_center(const ConvexSet& set, int dim) {
  if (const auto* ball = std::get_if<BallSet>(&set)) {
    return ball_center(*ball, dim);
  }
  const auto& box = std::get<BoxSet>(set);
  return 0.5 * (box.lo + box.hi);
}

}  // namespace igpc
