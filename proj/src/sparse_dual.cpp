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

#include "argraph/sparse_dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "argraph/detail/pg.hpp"
#include "argraph/detail/zvec.hpp"

namespace argraph {

namespace {

void check_weights(const WeightSet& weights, int m, bool need_q) {
  if (weights.nn <= 0.0)
    throw std::invalid_argument("weights: effective sample count must be > 0");
  if (weights.gammas.rows() != m || weights.gammas.cols() != m)
    throw std::invalid_argument("weights: gamma matrix must be m x m");
  for (int j = 0; j < m; ++j)
    for (int h = 0; h <= j; ++h)
      if (!(weights.gammas(j, h) > 0.0))
        throw std::invalid_argument("weights: gammas must be positive");
  if (need_q) {
    if (!weights.q)
      throw std::invalid_argument("weights: latent solver needs q");
    if (weights.q->rows() != m || weights.q->cols() != m)
      throw std::invalid_argument("weights: q must be m x m");
    Eigen::LLT<Matrix> llt(*weights.q);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("weights: q must be positive definite");
  }
}

// Evaluation against a cached Toeplitz lift of the sample lags.
std::optional<DualEval> dual_eval_cached(const BlockToeplitz& t_rhat,
                                         const MatrixPoly& z) {
  BlockToeplitz b(t_rhat.m, t_rhat.n);
  b.mat = t_rhat.mat + toeplitz(z).mat;
  const auto schur = try_block_schur(b);
  if (!schur) return std::nullopt;
  Eigen::LLT<Matrix> llt(schur->w);
  if (llt.info() != Eigen::Success) return std::nullopt;
  DualEval out;
  out.w = schur->w;
  out.logdet_w = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  out.value = out.logdet_w + t_rhat.m;
  out.x = BlockToeplitz(t_rhat.m, t_rhat.n);
  out.x.mat = schur->a * llt.solve(schur->a.transpose());
  out.x.mat = ((out.x.mat + out.x.mat.transpose()) * 0.5).eval();
  out.grad = adjoint_D(out.x);
  return out;
}

// Shrinks a warm start toward zero until the Schur factorization succeeds;
// zero is always feasible because toeplitz(rhat) is positive definite.
MatrixPoly feasible_start(const BlockToeplitz& t_rhat, MatrixPoly z) {
  for (int attempt = 0; attempt < 80; ++attempt) {
    if (dual_eval_cached(t_rhat, z)) return z;
    z *= 0.5;
  }
  z.set_zero();
  return z;
}

}  // namespace

std::optional<DualEval> dual_objective_grad(const MatrixPoly& z,
                                            const MatrixPoly& rhat) {
  if (z.m != rhat.m || z.n != rhat.n)
    throw std::invalid_argument("dual_objective_grad: shape mismatch");
  return dual_eval_cached(toeplitz(rhat), z);
}

Vector weighted_l1_projection(const Vector& v, const Vector& w,
                              double radius) {
  if (radius < 0.0)
    throw std::invalid_argument("weighted_l1_projection: negative radius");
  if (v.size() != w.size())
    throw std::invalid_argument("weighted_l1_projection: size mismatch");
  const int g = static_cast<int>(v.size());
  double usage = 0.0;
  for (int i = 0; i < g; ++i) {
    if (!(w(i) > 0.0))
      throw std::invalid_argument(
          "weighted_l1_projection: weights must be positive");
    usage += w(i) * std::abs(v(i));
  }
  if (usage <= radius) return v;  // already feasible: unchanged, bit for bit

  const Vector magnitude = v.cwiseAbs();
  std::vector<int> order(static_cast<std::size_t>(g));
  std::iota(order.begin(), order.end(), 0);
  // Breakpoints |v_i| / w_i: as the threshold sweeps past one, coordinate i
  // leaves the active set.
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return magnitude(a) * w(b) < magnitude(b) * w(a);
  });

  double ws_tail = usage;
  double w2_tail = w.squaredNorm();
  double lambda = 0.0;
  for (int k = 0; k < g; ++k) {
    const int i = order[static_cast<std::size_t>(k)];
    const double candidate = (ws_tail - radius) / w2_tail;
    if (candidate <= magnitude(i) / w(i)) {
      lambda = std::max(candidate, 0.0);
      break;
    }
    ws_tail -= w(i) * magnitude(i);
    w2_tail -= w(i) * w(i);
    if (k == g - 1) lambda = magnitude(i) / w(i);  // radius 0: everything off
  }

  Vector out(g);
  for (int i = 0; i < g; ++i) {
    const double shrunk = magnitude(i) - lambda * w(i);
    out(i) = shrunk > 0.0 ? (v(i) > 0.0 ? shrunk : -shrunk) : 0.0;
  }
  return out;
}

namespace detail {

// Groupwise projection of a free-coordinate vector; shared by the sparse
// solver and the latent ADMM sweeps.
Vector project_zvec(const Vector& v, const WeightSet& weights,
                    const ZLayout& lay) {
  const int n = lay.n;
  Vector out(v.size());
  Vector w_off = Vector::Ones(2 * n + 1);
  w_off(0) = 2.0;
  const Vector w_diag = Vector::Ones(n + 1);
  for (int j = 0; j < lay.m; ++j) {
    for (int h = 0; h <= j; ++h) {
      const int at = lay.offsets[static_cast<std::size_t>(
          ZLayout::group_index(j, h))];
      const int size = lay.group_size(j, h);
      out.segment(at, size) = weighted_l1_projection(
          v.segment(at, size), j == h ? w_diag : w_off, weights.budget(j, h));
    }
  }
  return out;
}

}  // namespace detail

MatrixPoly project_group_ball(const MatrixPoly& z, const WeightSet& weights) {
  check_weights(weights, z.m, /*need_q=*/false);
  const detail::ZLayout lay = detail::make_zlayout(z.m, z.n);
  return detail::z_from_vec(
      detail::project_zvec(detail::z_to_vec(z, lay), weights, lay), lay);
}

double max_budget_violation(const MatrixPoly& z, const WeightSet& weights) {
  double worst = 0.0;
  for (int j = 0; j < z.m; ++j) {
    double usage = 0.0;
    for (int k = 0; k <= z.n; ++k) usage += std::abs(z.block(k)(j, j));
    worst = std::max(worst, usage - weights.budget(j, j));
    for (int h = 0; h < j; ++h) {
      usage = 2.0 * std::abs(z.block(0)(j, h));
      for (int k = 1; k <= z.n; ++k)
        usage += std::abs(z.block(k)(j, h)) + std::abs(z.block(k)(h, j));
      worst = std::max(worst, usage - weights.budget(j, h));
    }
  }
  return std::max(worst, 0.0);
}

double weighted_group_norm(const MatrixPoly& s, const WeightSet& weights) {
  double accum = 0.0;
  for (int j = 0; j < s.m; ++j)
    for (int h = 0; h <= j; ++h)
      accum += weights.gammas(j, h) * group_maxnorm(s, j, h);
  return accum;
}

SparseSolution solve_sparse_dual(const MatrixPoly& rhat,
                                 const WeightSet& weights,
                                 const SolverOptions& opts) {
  const int m = rhat.m;
  check_weights(weights, m, /*need_q=*/false);
  const BlockToeplitz t_rhat = toeplitz(rhat);
  {
    Eigen::LLT<Matrix> llt(t_rhat.mat);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error(
          "solve_sparse_dual: sample Toeplitz matrix is not positive "
          "definite");
  }
  const detail::ZLayout lay = detail::make_zlayout(m, rhat.n);

  MatrixPoly z0(m, rhat.n);
  if (opts.warm_z) {
    if (opts.warm_z->m == m && opts.warm_z->n == rhat.n)
      z0 = feasible_start(t_rhat, project_group_ball(*opts.warm_z, weights));
  }

  SparseSolution sol;
  // The dual ascent trajectory doubles as a primal candidate sequence via
  // X(z); the returned estimate is the best primal point seen, which makes
  // each solve at least as good as its warm start in primal value.
  double best_primal = std::numeric_limits<double>::infinity();
  double best_dual = -std::numeric_limits<double>::infinity();
  Vector best_zv;
  const auto primal_of = [&](const DualEval& ev) {
    return ev.logdet_w + poly_dot(rhat, ev.grad) +
           (2.0 / weights.nn) * weighted_group_norm(ev.grad, weights);
  };
  const auto offer = [&](const DualEval& ev, const Vector& zv) {
    best_dual = std::max(best_dual, ev.value);
    const double primal = primal_of(ev);
    if (primal < best_primal) {
      best_primal = primal;
      best_zv = zv;
    }
  };

  {
    const Vector zv0 = detail::z_to_vec(z0, lay);
    const auto ev0 = dual_eval_cached(t_rhat, z0);
    if (!ev0)
      throw std::runtime_error("solve_sparse_dual: infeasible start");
    offer(*ev0, zv0);
  }

  // Side channel: the matrix-space evaluation behind the last vector
  // evaluation, valid at each accepted step when on_step runs.
  std::optional<DualEval> last_eval;
  const auto evaluate =
      [&](const Vector& zv) -> std::optional<detail::PgEval> {
    last_eval = dual_eval_cached(t_rhat, detail::z_from_vec(zv, lay));
    if (!last_eval) return std::nullopt;
    return detail::PgEval{last_eval->value,
                          detail::grad_to_vec(last_eval->grad, lay)};
  };
  const auto project = [&](const Vector& zv) {
    return detail::project_zvec(zv, weights, lay);
  };

  int iteration = 0;
  const auto on_step = [&](const detail::PgIterate& snap) -> bool {
    ++iteration;
    offer(*last_eval, *snap.z);
    const double gap = best_primal - best_dual;
    if (opts.collect_trace)
      sol.trace.push_back(
          {iteration, snap.value, gap, snap.step,
           max_budget_violation(detail::z_from_vec(*snap.z, lay), weights)});
    return gap <= opts.tol_gap * (1.0 + std::abs(snap.value));
  };

  detail::PgOptions pg;
  pg.tol_pg = opts.tol_pg;
  pg.max_iter = opts.max_iter;
  pg.backtrack = opts.backtrack;
  const auto result =
      pg_maximize(evaluate, project, detail::z_to_vec(z0, lay), pg, on_step);
  best_dual = std::max(best_dual, result.eval.value);

  const MatrixPoly z_best = detail::z_from_vec(best_zv, lay);
  const auto final_eval = dual_eval_cached(t_rhat, z_best);
  if (!final_eval)
    throw std::runtime_error("solve_sparse_dual: lost feasibility");
  sol.x = final_eval->x;
  sol.z = z_best;
  sol.w = final_eval->w;
  sol.dual_value = best_dual;
  sol.primal_value = best_primal;
  sol.gap = sol.primal_value - sol.dual_value;
  sol.iterations = result.iterations;
  sol.converged = result.converged;
  return sol;
}

MatrixPoly recover_sigma(const BlockToeplitz& x) { return adjoint_D(x); }

}  // namespace argraph
