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

#include <cmath>

#include "doctest.h"
#include "igpc/environments.hpp"
#include "igpc/errors.hpp"
#include "igpc/planner.hpp"
#include "test_util.hpp"

using namespace igpc;
using namespace igpc::testutil;

namespace {

// Call counters for one wrapped system. The planner's access pattern is
// part of its contract: which planner touches which system, and how
// often, is asserted against these.
struct SystemCounters {
  int f = 0;
  int df = 0;
};

System counted(const LinearSystem& base, SystemCounters* counters) {
  NonlinearSystem wrapped = as_nonlinear(base);
  auto f = wrapped.f;
  auto dfx = wrapped.df_dx;
  auto dfu = wrapped.df_du;
  wrapped.f = [f, counters](int t, const Vector& x, const Vector& u) {
    counters->f += 1;
    return f(t, x, u);
  };
  wrapped.df_dx = [dfx, counters](int t, const Vector& x, const Vector& u) {
    counters->df += 1;
    return dfx(t, x, u);
  };
  wrapped.df_du = [dfu, counters](int t, const Vector& x, const Vector& u) {
    counters->df += 1;
    return dfu(t, x, u);
  };
  return wrapped;
}

DisturbanceModel sinusoid(int dim, double magnitude, std::uint64_t seed) {
  DisturbanceModel d;
  d.kind = DisturbanceKind::kPhaseShiftedSinusoid;
  d.dim = dim;
  d.magnitude = magnitude;
  d.seed = seed;
  return d;
}

DisturbanceModel no_noise(int dim) {
  DisturbanceModel d;
  d.kind = DisturbanceKind::kZero;
  d.dim = dim;
  return d;
}

}  // namespace

TEST_CASE("mode names round-trip and reject unknowns") {
  for (PlannerMode m : {PlannerMode::kIlqg, PlannerMode::kIlc,
                        PlannerMode::kIgpc, PlannerMode::kIlqrOracle}) {
    CHECK(planner_mode_from_name(planner_mode_name(m)) == m);
  }
  CHECK_THROWS_AS(planner_mode_from_name("mpc"), ConfigError);
}

TEST_CASE("exact simulator, no noise: ilqg and ilc agree row by row") {
  Environment env = make_double_integrator(20);
  PlannerConfig config;
  config.iterations = 5;
  config.start_state = env.start_state;

  config.mode = PlannerMode::kIlqg;
  PlannerResult sim_only = iterative_planner(env.system, env.system,
                                             no_noise(2), env.costs, config);
  config.mode = PlannerMode::kIlc;
  PlannerResult on_real = iterative_planner(env.system, env.system,
                                            no_noise(2), env.costs, config);

  REQUIRE(sim_only.ledger.size() == 5);
  REQUIRE(on_real.ledger.size() == 5);
  for (size_t i = 0; i < 5; ++i) {
    CHECK(sim_only.ledger[i].cost == on_real.ledger[i].cost);
    CHECK(sim_only.ledger[i].alpha == on_real.ledger[i].alpha);
    CHECK(sim_only.ledger[i].real_rollouts_used == 0);
    CHECK(on_real.ledger[i].real_rollouts_used > 0);
  }
  CHECK(sim_only.real_rollouts_total == 0);
  CHECK(sim_only.ledger[0].alpha == 1.0);
  // The LQ problem is solved exactly at iteration 2.
  CHECK(sim_only.ledger[1].cost < 0.25 * sim_only.ledger[0].cost);
}

TEST_CASE("ilqg never touches the real system or the disturbance") {
  // Hand ilqg a *different* real system and a strong disturbance. If it
  // peeked at either, costs would differ from the pure-simulator run.
  Environment env = make_double_integrator(20);
  LinearSystem distorted = std::get<LinearSystem>(env.system);
  for (Matrix& b : distorted.B) b *= 3.0;
  SystemCounters real_counters;
  System real = counted(distorted, &real_counters);

  PlannerConfig config;
  config.mode = PlannerMode::kIlqg;
  config.iterations = 6;
  config.start_state = env.start_state;
  PlannerResult res = iterative_planner(env.system, real, sinusoid(2, 0.5, 9),
                                        env.costs, config);

  CHECK(real_counters.f == 0);
  CHECK(real_counters.df == 0);
  CHECK(res.real_rollouts_total == 0);

  PlannerResult clean = iterative_planner(env.system, env.system, no_noise(2),
                                          env.costs, config);
  for (size_t i = 0; i < res.ledger.size(); ++i) {
    CHECK(res.ledger[i].cost == clean.ledger[i].cost);
  }
  // Once converged, the remaining rows are flat.
  double final_cost = res.ledger.back().cost;
  CHECK(std::fabs(res.ledger[res.ledger.size() - 2].cost - final_cost) <=
        1e-9);
}

TEST_CASE("ilc and igpc roll out the real system but never linearize it") {
  Environment env = make_double_integrator(16);
  LinearSystem real_lin = std::get<LinearSystem>(env.system);
  for (Matrix& b : real_lin.B) b *= 1.15;  // model mismatch
  const int T = 16;

  for (PlannerMode mode : {PlannerMode::kIlc, PlannerMode::kIgpc}) {
    CAPTURE(planner_mode_name(mode));
    SystemCounters real_counters;
    System real = counted(real_lin, &real_counters);

    PlannerConfig config;
    config.mode = mode;
    config.iterations = 5;
    config.start_state = env.start_state;
    config.gpc.learning_rate = mode == PlannerMode::kIgpc ? 0.02 : 0.0;
    PlannerResult res = iterative_planner(env.system, real, sinusoid(2, 0.1, 4),
                                          env.costs, config);

    CHECK(real_counters.df == 0);
    // Exactly one transition per step per counted real rollout.
    CHECK(real_counters.f == T * res.real_rollouts_total);
    CHECK(res.real_rollouts_total >= 5);
    CHECK(res.ledger.back().real_rollouts_used == res.real_rollouts_total);
    // The line search only ever accepts improvements.
    for (size_t i = 1; i < res.ledger.size(); ++i) {
      CHECK(res.ledger[i].cost <= res.ledger[i - 1].cost);
    }
  }
}

TEST_CASE("ilqr oracle linearizes the real system and ignores the simulator") {
  Environment env = make_double_integrator(16);
  LinearSystem real_lin = std::get<LinearSystem>(env.system);
  for (Matrix& b : real_lin.B) b *= 1.15;
  SystemCounters sim_counters, real_counters;
  System sim = counted(std::get<LinearSystem>(env.system), &sim_counters);
  System real = counted(real_lin, &real_counters);

  PlannerConfig config;
  config.mode = PlannerMode::kIlqrOracle;
  config.iterations = 4;
  config.start_state = env.start_state;
  PlannerResult res =
      iterative_planner(sim, real, no_noise(2), env.costs, config);

  CHECK(sim_counters.f == 0);
  CHECK(sim_counters.df == 0);
  CHECK(real_counters.df > 0);
  CHECK(real_counters.f == 16 * res.real_rollouts_total);
  // With exact linearization the mismatch costs it nothing: solved by
  // iteration 2.
  CHECK(res.ledger[1].cost < 0.25 * res.ledger[0].cost);
}

TEST_CASE("ilc makes progress under model mismatch via retraction") {
  Environment env = make_double_integrator(20);
  LinearSystem real_lin = std::get<LinearSystem>(env.system);
  for (Matrix& b : real_lin.B) b *= 1.3;
  System real = real_lin;

  PlannerConfig config;
  config.mode = PlannerMode::kIlc;
  config.iterations = 8;
  config.start_state = env.start_state;
  PlannerResult res = iterative_planner(env.system, real, no_noise(2),
                                        env.costs, config);
  CHECK(res.ledger.back().cost <= 0.5 * res.ledger.front().cost);
}

TEST_CASE("every accepted alpha comes from the retraction grid") {
  Environment env = make_double_integrator(14);
  PlannerConfig config;
  config.mode = PlannerMode::kIlc;
  config.iterations = 6;
  config.start_state = env.start_state;
  config.line_search.alpha_plus = 0.8;
  config.line_search.shrink = 0.5;
  config.line_search.max_trials = 5;
  PlannerResult res = iterative_planner(env.system, env.system,
                                        sinusoid(2, 0.2, 12), env.costs,
                                        config);

  REQUIRE(!res.ledger.empty());
  CHECK(res.ledger[0].alpha == 1.0);
  for (size_t i = 1; i < res.ledger.size(); ++i) {
    double a = res.ledger[i].alpha;
    bool on_grid = a == 0.0;
    double candidate = 0.8;
    for (int k = 0; k < 5; ++k) {
      if (a == candidate) on_grid = true;
      candidate *= 0.5;
    }
    CHECK(on_grid);
  }
}

TEST_CASE("igpc turns its inner controller on") {
  Environment env = make_double_integrator(20);
  PlannerConfig config;
  config.mode = PlannerMode::kIgpc;
  config.iterations = 4;
  config.start_state = env.start_state;
  config.gpc.learning_rate = 0.05;
  config.gpc.memory = 3;
  PlannerResult res = iterative_planner(env.system, env.system,
                                        sinusoid(2, 0.4, 21), env.costs,
                                        config);
  double offset_norm = 0.0;
  for (const Vector& o : res.episodes.back().offsets) offset_norm += o.norm();
  CHECK(offset_norm > 0.0);

  PlannerConfig ilc_config = config;
  ilc_config.mode = PlannerMode::kIlc;
  PlannerResult ilc = iterative_planner(env.system, env.system,
                                        sinusoid(2, 0.4, 21), env.costs,
                                        ilc_config);
  for (const Vector& o : ilc.episodes.back().offsets) CHECK(o.norm() == 0.0);
}

TEST_CASE("budget truncation stops counting and flags the result") {
  Environment env = make_double_integrator(12);
  PlannerConfig config;
  config.mode = PlannerMode::kIlc;
  config.iterations = 10;
  config.start_state = env.start_state;
  config.real_rollout_budget = 3;
  PlannerResult res = iterative_planner(env.system, env.system,
                                        sinusoid(2, 0.3, 2), env.costs,
                                        config);
  CHECK(res.budget_truncated);
  CHECK(res.real_rollouts_total == 3);
  CHECK(res.ledger.size() < 10);
  for (const PlannerLedgerRow& row : res.ledger) {
    CHECK(row.real_rollouts_used <= 3);
  }
}

TEST_CASE("dimension mismatches are rejected") {
  Environment a = make_double_integrator(10);
  Environment b = make_double_integrator(11);
  PlannerConfig config;
  CHECK_THROWS_AS(iterative_planner(a.system, b.system, no_noise(2), a.costs,
                                    config),
                  DimensionError);
}
