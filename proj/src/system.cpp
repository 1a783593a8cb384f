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

#include "igpc/system.hpp"

#include <string>

#include "igpc/errors.hpp"

namespace igpc {

namespace {

void check_t(int t, int T) {
  detail::check(t >= 1 && t <= T,
                "step index " + std::to_string(t) + " outside 1.." +
                    std::to_string(T));
}

double spectral_norm(const Matrix& m) {
  return m.jacobiSvd().singularValues()(0);
}

}  // namespace

Matrix LinearSystem::effective_A(int t) const {
  const Matrix& a = A[t - 1];
  if (K.empty()) return a;
  return a - B[t - 1] * K[t - 1];
}

LinearSystem make_lti(const Matrix& A, const Matrix& B, int T, double kappa,
                      double delta) {
  detail::check(A.rows() == A.cols(), "A must be square");
  detail::check(B.rows() == A.rows(), "B row count must match state dim");
  LinearSystem sys;
  sys.A.assign(T, A);
  sys.B.assign(T, B);
  sys.kappa = kappa;
  sys.delta = delta;
  return sys;
}

int horizon(const System& sys) {
  return std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, LinearSystem>)
          return s.horizon();
        else
          return s.T;
      },
      sys);
}

int state_dim(const System& sys) {
  return std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, LinearSystem>)
          return s.state_dim();
        else
          return s.d_x;
      },
      sys);
}

int action_dim(const System& sys) {
  return std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, LinearSystem>)
          return s.action_dim();
        else
          return s.d_u;
      },
      sys);
}

Vector transition(const System& sys, int t, const Vector& x, const Vector& u) {
  check_t(t, horizon(sys));
  detail::check(x.size() == state_dim(sys), "state dimension mismatch");
  detail::check(u.size() == action_dim(sys), "action dimension mismatch");
  if (const auto* lin = std::get_if<LinearSystem>(&sys)) {
    return lin->effective_A(t) * x + lin->B[t - 1] * u;
  }
  const auto& nl = std::get<NonlinearSystem>(sys);
  Vector next = nl.f(t, x, u);
  detail::check(next.size() == nl.d_x, "transition output dimension mismatch");
  return next;
}

Vector step(const System& sys, int t, const Vector& x, const Vector& u,
            const Vector& w) {
  detail::check(w.size() == state_dim(sys), "disturbance dimension mismatch");
  Vector next = transition(sys, t, x, u) + w;
  if (!next.allFinite()) {
    throw DivergedRollout("state became non-finite", t);
  }
  return next;
}

Matrix jacobian_x(const System& sys, int t, const Vector& x, const Vector& u) {
  check_t(t, horizon(sys));
  if (const auto* lin = std::get_if<LinearSystem>(&sys)) {
    return lin->effective_A(t);
  }
  return std::get<NonlinearSystem>(sys).df_dx(t, x, u);
}

Matrix jacobian_u(const System& sys, int t, const Vector& x, const Vector& u) {
  check_t(t, horizon(sys));
  if (const auto* lin = std::get_if<LinearSystem>(&sys)) {
    return lin->B[t - 1];
  }
  return std::get<NonlinearSystem>(sys).df_du(t, x, u);
}

StabilityReport validate_stability(const LinearSystem& sys) {
  StabilityReport report;
  for (int t = 1; t <= sys.horizon(); ++t) {
    report.max_A_norm = std::max(report.max_A_norm,
                                 spectral_norm(sys.effective_A(t)));
    report.max_B_norm = std::max(report.max_B_norm,
                                 spectral_norm(sys.B[t - 1]));
  }
  report.satisfied = report.max_A_norm <= 1.0 - sys.delta &&
                     report.max_B_norm <= sys.kappa;
  return report;
}

NonlinearSystem as_nonlinear(const LinearSystem& sys) {
  NonlinearSystem nl;
  nl.T = sys.horizon();
  nl.d_x = sys.state_dim();
  nl.d_u = sys.action_dim();
  nl.f = [sys](int t, const Vector& x, const Vector& u) -> Vector {
    return sys.effective_A(t) * x + sys.B[t - 1] * u;
  };
  nl.df_dx = [sys](int t, const Vector&, const Vector&) -> Matrix {
    return sys.effective_A(t);
  };
  nl.df_du = [sys](int t, const Vector&, const Vector&) -> Matrix {
    return sys.B[t - 1];
  };
  return nl;
}

}  // namespace igpc
