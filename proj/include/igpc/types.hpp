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

#ifndef IGPC_TYPES_HPP_
#define IGPC_TYPES_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace igpc {

// Dense dynamic-size doubles throughout. Problem sizes here are tiny
// (state dims <= 6, horizons <= a few thousand), so there is no reason
// to fix dimensions at compile time.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Time convention used across the library: steps are 1-based, matching
// the usual control notation x_{t+1} = f_t(x_t, a_t) + w_t for t = 1..T.
// Containers are 0-based, so quantity q_t lives at index t-1. A rollout
// over horizon T therefore stores T+1 states (x_1..x_{T+1}) and T each of
// actions, disturbances and step costs.
using index_t = int;

// Per-step sequences. seq.size() == T unless stated otherwise.
using VectorSeq = std::vector<Vector>;
using MatrixSeq = std::vector<Matrix>;

inline Vector zeros(index_t d) { return Vector::Zero(d); }

}  // namespace igpc

#endif  // IGPC_TYPES_HPP_
