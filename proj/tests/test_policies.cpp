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

#include "doctest.h"
#include "igpc/errors.hpp"
#include "igpc/policies.hpp"
#include "igpc/sets.hpp"
#include "test_util.hpp"

using namespace igpc;
using namespace igpc::testutil;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("dac_action hand example: 1.0 * 0.3 + 0.5 = 0.8") {
  DACPolicy dac;
  dac.M = {Matrix::Constant(1, 1, 1.0)};
  dac.gamma = 1.0;
  CHECK(dac_action(dac, {vec({0.3})}, vec({0.5}))[0] ==
        doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("dac with zero M is the base action") {
  DACPolicy dac;
  dac.M = {Matrix::Zero(2, 3), Matrix::Zero(2, 3)};
  Vector base = vec({0.4, -0.2});
  Vector a = dac_action(dac, {Vector::Ones(3), Vector::Ones(3)}, base);
  CHECK((a - base).norm() == 0.0);
}

TEST_CASE("dac_offset rejects wrong history length") {
  DACPolicy dac;
  dac.M = {Matrix::Zero(1, 1), Matrix::Zero(1, 1)};
  CHECK_THROWS_AS(dac_offset(dac, {vec({1})}), DimensionError);
}

TEST_CASE("dac_offset is linear in M and in the disturbances") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    DACPolicy a, b, sum;
    for (int j = 0; j < 3; ++j) {
      Matrix Ma = random_with_norm(rng, 2, 4, 0.8);
      Matrix Mb = random_with_norm(rng, 2, 4, 0.8);
      a.M.push_back(Ma);
      b.M.push_back(Mb);
      sum.M.push_back(Ma + Mb);
    }
    VectorSeq w1, w2, w12;
    for (int j = 0; j < 3; ++j) {
      w1.push_back(random_vector(rng, 4));
      w2.push_back(random_vector(rng, 4));
      w12.push_back(w1.back() + w2.back());
    }
    Vector lhs = dac_offset(sum, w1);
    Vector rhs = dac_offset(a, w1) + dac_offset(b, w1);
    CHECK(rel_err(lhs, rhs) < 1e-12);
    CHECK(rel_err(dac_offset(a, w12),
                  Vector(dac_offset(a, w1) + dac_offset(a, w2))) < 1e-12);
  }
}

TEST_CASE("spectral clip: diag(3, 0.5) at gamma 1 becomes diag(1, 0.5)") {
  Matrix m = vec({3.0, 0.5}).asDiagonal();
  Matrix clipped = clip_spectral(m, 1.0);
  CHECK(clipped(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(clipped(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::fabs(clipped(0, 1)) < 1e-12);
}

TEST_CASE("spectral projection properties") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m = random_with_norm(rng, 3, 2, rng.uniform(0.0, 3.0));
    double gamma = rng.uniform(0.1, 1.5);
    Matrix p = clip_spectral(m, gamma);
    CHECK(spectral_norm(p) <= gamma + 1e-10);
    // Idempotent.
    CHECK((clip_spectral(p, gamma) - p).norm() < 1e-10);
    // Inside the ball: identity.
    if (spectral_norm(m) <= gamma) CHECK((p - m).norm() == 0.0);
  }
  // gamma = 0 maps everything to zero.
  Matrix m = random_with_norm(rng, 2, 2, 1.0);
  CHECK(clip_spectral(m, 0.0).norm() < 1e-14);
}

TEST_CASE("ball projection: (3,4) onto radius 1 gives (0.6, 0.8)") {
  ConvexSet ball = BallSet{1.0, {}};
  Vector p = project(ball, vec({3, 4}));
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-14));
  CHECK((project(ball, vec({0.3, 0.1})) - vec({0.3, 0.1})).norm() == 0.0);
}

TEST_CASE("box projection clamps 2.5 to 1") {
  ConvexSet box = BoxSet{vec({-1}), vec({1})};
  CHECK(project(box, vec({2.5}))[0] == doctest::Approx(1.0));
  CHECK(project(box, vec({-3}))[0] == doctest::Approx(-1.0));
  CHECK(project(box, vec({0.2}))[0] == doctest::Approx(0.2));
}

TEST_CASE("projections are idempotent and nonexpansive") {
  Rng rng(19);
  ConvexSet ball = BallSet{0.8, {}};
  ConvexSet box = BoxSet{vec({-0.5, -1}), vec({0.5, 2})};
  for (const ConvexSet& set : {ball, box}) {
    for (int trial = 0; trial < 30; ++trial) {
      Vector a = random_vector(rng, 2, 2.0);
      Vector b = random_vector(rng, 2, 2.0);
      Vector pa = project(set, a);
      Vector pb = project(set, b);
      CHECK((project(set, pa) - pa).norm() < 1e-12);
      CHECK((pa - pb).norm() <= (a - b).norm() + 1e-12);
    }
  }
}

TEST_CASE("linear_minimizer beats random feasible points") {
  Rng rng(23);
  ConvexSet ball = BallSet{1.3, {}};
  ConvexSet box = BoxSet{vec({-1, 0}), vec({2, 1})};
  for (const ConvexSet& set : {ball, box}) {
    for (int trial = 0; trial < 10; ++trial) {
      Vector g = random_vector(rng, 2);
      Vector v = linear_minimizer(set, g);
      double best = g.dot(v);
      for (int s = 0; s < 50; ++s) {
        Vector p = project(set, random_vector(rng, 2, 2.0));
        CHECK(best <= g.dot(p) + 1e-10);
      }
    }
  }
}

TEST_CASE("diameters") {
  CHECK(diameter(BallSet{2.0, {}}) == doctest::Approx(4.0));
  CHECK(diameter(BoxSet{vec({0, 0}), vec({3, 4})}) == doctest::Approx(5.0));
}

TEST_CASE("project_plan applies per step") {
  VectorSeq u = {vec({3, 4}), vec({0.1, 0.1})};
  VectorSeq p = project_plan(u, BallSet{1.0, {}});
  CHECK(p[0].norm() == doctest::Approx(1.0));
  CHECK((p[1] - u[1]).norm() == 0.0);
}

TEST_CASE("superpose of open-loop plans adds actions: (1,1)+(2,3)=(3,4)") {
  OpenLoopPlan p1, p2;
  p1.u = {vec({1}), vec({1})};
  p2.u = {vec({2}), vec({3})};
  Policy sum = superpose(as_policy(p1), as_policy(p2));
  VectorSeq states = {vec({0})};
  VectorSeq empty;
  StepContext c1{1, states, empty, empty};
  CHECK(sum(c1)[0] == doctest::Approx(3.0));
  VectorSeq states2 = {vec({0}), vec({0})};
  VectorSeq acts = {vec({3})};
  VectorSeq dist = {vec({0})};
  StepContext c2{2, states2, acts, dist};
  CHECK(sum(c2)[0] == doctest::Approx(4.0));
}

TEST_CASE("affine gain policy formula") {
  AffineGainPolicy pol;
  pol.alpha = 0.5;
  pol.x_nom = {vec({1, 0})};
  pol.u_nom = {vec({2})};
  pol.k = {vec({4})};
  pol.K = {Matrix::Constant(1, 2, 1.0)};
  // a = 2 + 0.5*4 + [1 1] ((3,1) - (1,0)) = 2 + 2 + 3 = 7.
  CHECK(pol.action(1, vec({3, 1}))[0] == doctest::Approx(7.0));
  CHECK_THROWS_AS(pol.action(2, vec({3, 1})), DimensionError);
}

TEST_CASE("dac_over zero-pads missing history") {
  DACPolicy dac;
  dac.M = {Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 5.0)};
  OpenLoopPlan base;
  base.u = {vec({1}), vec({1}), vec({1})};
  Policy pol = dac_over(dac, as_policy(base));

  VectorSeq states = {vec({0})};
  VectorSeq empty;
  StepContext c1{1, states, empty, empty};
  CHECK(pol(c1)[0] == doctest::Approx(1.0));  // no history yet

  VectorSeq states2 = {vec({0}), vec({0})};
  VectorSeq acts = {vec({1})};
  VectorSeq dist = {vec({0.1})};
  StepContext c2{2, states2, acts, dist};
  // 1 + 2*0.1 + 5*0 (w_0 padded) = 1.2
  CHECK(pol(c2)[0] == doctest::Approx(1.2));

  VectorSeq states3 = {vec({0}), vec({0}), vec({0})};
  VectorSeq acts2 = {vec({1}), vec({1})};
  VectorSeq dist2 = {vec({0.1}), vec({0.3})};
  StepContext c3{3, states3, acts2, dist2};
  // 1 + 2*w_2 + 5*w_1 = 1 + 0.6 + 0.5 = 2.1
  CHECK(pol(c3)[0] == doctest::Approx(2.1));
}

TEST_CASE("open-loop plan feasibility via projection") {
  OpenLoopPlan plan;
  plan.action_set = BallSet{1.0, {}};
  plan.u = {vec({5, 0}), vec({0, 0.5})};
  plan.u = project_plan(plan.u, plan.action_set);
  for (const Vector& v : plan.u) CHECK(v.norm() <= 1.0 + 1e-12);
}
