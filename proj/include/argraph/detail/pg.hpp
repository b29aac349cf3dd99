// Copyright 2026 The argraph Authors
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

#pragma once

#include <functional>
#include <optional>

#include "argraph/poly.hpp"

namespace argraph::detail {

struct PgEval {
  double value = 0.0;
  Vector grad;
};

struct PgOptions {
  double tol_pg = 1e-7;          // stationarity: step norm / step size
  int max_iter = 5000;
  double backtrack = 0.5;        // line-search shrink factor
  double tol_rel_change = 1e-14; // relative objective change floor
  int flat_patience = 12;        // consecutive flat steps before giving up
};

enum class PgStop {
  kRunning,     // max_iter reached without any stop firing
  kCallerStop,  // on_step returned true
  kStationary,  // pg_norm fell below tol_pg
  kFlat,        // objective stayed flat for flat_patience accepted steps
  kNoStep,      // line search exhausted every representable step size
};

struct PgIterate {
  double value = 0.0;
  double step = 0.0;
  double pg_norm = 0.0;
  const Vector* z = nullptr;      // current iterate
  const PgEval* eval = nullptr;   // evaluation at the iterate
};

struct PgResult {
  Vector z;
  PgEval eval;
  int iterations = 0;
  bool converged = false;
  PgStop stop = PgStop::kRunning;
};

// Projected gradient ascent with Armijo backtracking on a smooth concave
// objective over a convex set, iterating on free-coordinate vectors.
//
//   evaluate: smooth part value and gradient; nullopt signals "outside the
//             objective's domain", which the line search treats as a failed
//             step (the domain is open and contains the feasible start).
//   project:  exact Euclidean projection onto the constraint set.
//   on_step:  optional observer, also an extra stopping predicate (return
//             true to stop); invoked after each accepted step.
//
// The step size is seeded from finite-difference curvature probes along the
// gradient, then follows safeguarded Barzilai-Borwein estimates with Armijo
// backtracking f(z+) >= f(z) + 1e-4 <g, z+ - z>.
PgResult pg_maximize(
    const std::function<std::optional<PgEval>(const Vector&)>& evaluate,
    const std::function<Vector(const Vector&)>& project,
    Vector z0, const PgOptions& opts,
    const std::function<bool(const PgIterate&)>& on_step = {});

}  // namespace argraph::detail
