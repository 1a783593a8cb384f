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

#ifndef IGPC_RNG_HPP_
#define IGPC_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "igpc/types.hpp"

namespace igpc {

// Deterministic random source. std::mt19937_64 is specified bit-exactly by
// the standard, but the std::*_distribution adaptors are not, so all
// conversions to doubles are done by hand. Runs must be byte-identical
// across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller. One branch of the pair is kept; the
  // waste is irrelevant at our sizes and keeps the stream simple.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    // Guard against log(0).
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Uniform integer in [lo, hi] by rejection-free modulo; bias is far
  // below anything observable for the small ranges used here.
  std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) {
    return lo + eng_() % (hi - lo + 1);
  }

  Vector normal_vector(int d) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = normal();
    return v;
  }

  // Uniform direction on the unit sphere.
  Vector unit_vector(int d) {
    Vector v = normal_vector(d);
    double n = v.norm();
    while (n < 1e-12) {
      v = normal_vector(d);
      n = v.norm();
    }
    return v / n;
  }

 private:
  std::mt19937_64 eng_;
};

// SplitMix64 step, used to derive substream seeds from a root seed plus a
// path of integers (rollout index, stream tag, ...). Mixing instead of
// arithmetic on the seed keeps substreams statistically independent.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(root);
  for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p));
  return s;
}

}  // namespace igpc

#endif  // IGPC_RNG_HPP_
