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

#include "argraph/detail/pg.hpp"

#include <algorithm>
#include <cmath>

namespace argraph::detail {

namespace {

constexpr double kArmijo = 1e-4;

// Curvature along the gradient via finite differences, two power-iteration
// sweeps.  Deterministic: probe directions derive from the gradient itself.
double curvature_estimate(
    const std::function<std::optional<PgEval>(const Vector&)>& evaluate,
    const Vector& z0, const PgEval& e0) {
  const double gnorm = e0.grad.norm();
  if (gnorm < 1e-300) return 0.0;
  const Vector dir = e0.grad / gnorm;
  double eps = 1e-6 * (1.0 + z0.norm());
  for (int attempt = 0; attempt < 8; ++attempt, eps *= 0.25) {
    const auto probe = evaluate(z0 + eps * dir);
    if (!probe) continue;
    const Vector hv = (probe->grad - e0.grad) / eps;
    const double lam1 = hv.norm();
    if (lam1 <= 0.0) return 0.0;
    const auto probe2 = evaluate(z0 + (eps / lam1) * hv);
    if (!probe2) return lam1;
    const double lam2 = ((probe2->grad - e0.grad) / eps).norm();
    return std::max(lam1, lam2);
  }
  return 0.0;
}

}  // namespace

PgResult pg_maximize(
    const std::function<std::optional<PgEval>(const Vector&)>& evaluate,
    const std::function<Vector(const Vector&)>& project,
    Vector z0, const PgOptions& opts,
    const std::function<bool(const PgIterate&)>& on_step) {
  PgResult out;
  out.z = project(std::move(z0));
  auto eval = evaluate(out.z);
  if (!eval)
    throw std::runtime_error("pg_maximize: start outside objective domain");
  out.eval = *eval;

  const double curvature = curvature_estimate(evaluate, out.z, out.eval);
  const double t0 =
      std::clamp(curvature > 1e-12 ? 1.0 / curvature : 1.0, 1e-12, 1e12);
  const double t_min = 1e-10 * t0;
  const double t_max = 1e8 * t0;
  double t = t0;

  int flat_streak = 0;
  Vector z_prev;
  Vector g_prev;
  for (int it = 1; it <= opts.max_iter; ++it) {
    // Spectral (Barzilai-Borwein) step seed; the gradient of a concave
    // objective is monotone, so the curvature pairing below is nonnegative.
    if (it > 1) {
      const Vector dz = out.z - z_prev;
      const double denom = dz.dot(g_prev - out.eval.grad);
      const double dz2 = dz.squaredNorm();
      t = denom > 1e-300 * dz2 && dz2 > 0.0
              ? std::clamp(dz2 / denom, t_min, t_max)
              : std::min(t * 2.0, t_max);
    }
    z_prev = out.z;
    g_prev = out.eval.grad;

    Vector znew;
    std::optional<PgEval> enew;
    bool accepted = false;
    while (t >= 1e-16 * t0) {
      znew = project(out.z + t * out.eval.grad);
      const double ascent = out.eval.grad.dot(znew - out.z);
      enew = evaluate(znew);
      if (enew && enew->value >= out.eval.value + kArmijo * ascent) {
        accepted = true;
        break;
      }
      t *= opts.backtrack;
    }
    if (!accepted) {
      // No acceptable step at any representable size: numerically stationary.
      out.converged = true;
      out.stop = PgStop::kNoStep;
      break;
    }
    const double step_norm = (znew - out.z).norm();
    const double rel_change = std::abs(enew->value - out.eval.value) /
                              (1.0 + std::abs(enew->value));
    out.z = std::move(znew);
    out.eval = std::move(*enew);
    out.iterations = it;

    PgIterate snapshot;
    snapshot.value = out.eval.value;
    snapshot.step = t;
    snapshot.pg_norm = step_norm / t;
    snapshot.z = &out.z;
    snapshot.eval = &out.eval;
    if (on_step && on_step(snapshot)) {
      out.converged = true;
      out.stop = PgStop::kCallerStop;
      break;
    }
    if (snapshot.pg_norm <= opts.tol_pg) {
      out.converged = true;
      out.stop = PgStop::kStationary;
      break;
    }
    // The objective flattens out long before the iterate settles (warm
    // starts land on the right value with the wrong support), so a single
    // tiny change is not evidence of convergence; a sustained run is.
    flat_streak = rel_change <= opts.tol_rel_change ? flat_streak + 1 : 0;
    if (flat_streak >= opts.flat_patience) {
      out.converged = true;
      out.stop = PgStop::kFlat;
      break;
    }
  }
  return out;
}

}  // namespace argraph::detail
