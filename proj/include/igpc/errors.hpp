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

#ifndef IGPC_ERRORS_HPP_
#define IGPC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace igpc {

// Shape mismatch between inputs (wrong vector length, wrong matrix
// block, horizon disagreement). The message names the offending axis.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what)
      : std::invalid_argument(what) {}
};

// A state became non-finite during simulation. step_index is the 1-based
// step at which the rollout blew up.
class DivergedRollout : public std::runtime_error {
 public:
  DivergedRollout(const std::string& what, int step_index)
      : std::runtime_error(what + " (step " + std::to_string(step_index) + ")"),
        step_index(step_index) {}
  int step_index;
};

// Invalid or inconsistent configuration (parse errors, unknown names,
// out-of-range parameters).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to produce a usable answer (singular
// quadratic term after maximum regularization, and the like).
class SolveError : public std::runtime_error {
 public:
  explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void check(bool ok, const std::string& message) {
  if (!ok) throw DimensionError(message);
}

}  // namespace detail

}  // namespace igpc

#endif  // IGPC_ERRORS_HPP_
