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

#ifndef IGPC_SETS_HPP_
#define IGPC_SETS_HPP_

#include <variant>

#include "igpc/types.hpp"

namespace igpc {

// Euclidean ball { v : ||v - center|| <= radius }. An empty center means
// the origin of whatever dimension the projected point has.
struct BallSet {
  double radius = 1.0;
  Vector center;
};

// Axis-aligned box { v : lo <= v <= hi } componentwise.
struct BoxSet {
  Vector lo, hi;
};

using ConvexSet = std::variant<BallSet, BoxSet>;

// Euclidean projection onto the set. Idempotent and nonexpansive.
Vector project(const ConvexSet& set, const Vector& v);

// Euclidean diameter sup_{a,b in set} ||a - b||.
double diameter(const ConvexSet& set);

// Exact minimizer of the linear form g . v over the set. Ball: move from
// the center against g by the radius; box: pick each coordinate bound by
// the sign of g. Used to evaluate linear-regret comparators exactly.
Vector linear_minimizer(const ConvexSet& set, const Vector& g);

// A point in the set to start iterations from (ball center / box midpoint).
Vector set_center(const ConvexSet& set, int dim);

}  // namespace igpc

#endif  // IGPC_SETS_HPP_
