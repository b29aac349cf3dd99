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

#include <optional>
#include <vector>

#include "argraph/poly.hpp"

namespace argraph {

// Penalty weights for the group-sparse estimators.  gammas is m x m with the
// lower triangle (j >= h) meaningful: gammas(j, h) weights the coefficient
// group of entry pair (j, h), the diagonal weights the per-channel groups.
// q, when present, is the m x m SPD weight of the low-rank barrier.  nn is
// the effective sample count (N - n): the dual budget of group (j, h) is
// 2 gammas(j, h) / nn.
struct WeightSet {
  Matrix gammas;
  std::optional<Matrix> q;
  double nn = 0.0;

  double budget(int j, int h) const { return 2.0 * gammas(j, h) / nn; }
};

// Knobs shared by the sparse solver and the ADMM-based latent solver (the
// rho/admm/null fields only matter for the latter).
struct SolverOptions {
  double tol_pg = 1e-12;     // projected-gradient stationarity tolerance
  int max_iter = 20000;      // gradient iterations (per ADMM sweep: inner_max_iter)
  double backtrack = 0.5;
  bool verbose = false;
  double tol_gap = 1e-9;     // early stop on certified relative duality gap

  double rho = 1.0;          // ADMM penalty (adapted by residual balancing)
  double tol_admm = 1e-6;    // stop when max(primal, dual residual) below
  int max_admm = 2000;
  int inner_max_iter = 600;  // gradient iterations per ADMM sweep
  double tol_null = 1e-6;    // null-space threshold, relative to lambda_max
  double tol_active = 1e-8;  // relative slack deciding inactive groups

  bool collect_trace = false;
  std::optional<MatrixPoly> warm_z;  // projected onto the budgets, shrunk
                                     // toward zero if outside the domain
};

struct SolveTracePoint {
  int iteration = 0;
  double value = 0.0;       // dual objective
  double gap = 0.0;         // certified duality gap at the iterate
  double step = 0.0;
  double max_violation = 0.0;  // worst budget excess (should be ~0)
};

// Concentration estimate and its certificates.  x is the primal variable
// (m(n+1) square, PSD, x_00 = w^{-1}), z the dual at the stop, w the
// innovation-side Schur block.
struct SparseSolution {
  BlockToeplitz x;
  MatrixPoly z;
  Matrix w;
  double dual_value = 0.0;
  double primal_value = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<SolveTracePoint> trace;
};

// Smooth dual objective log det W(Z) + m and its gradient.
//   B(Z) = toeplitz(rhat) + toeplitz(Z),   (W, a) = block_schur(B),
//   X = a W^{-1} a^T,   value = log det W + m,   grad = adjoint_D(X).
// Returns nullopt when B is not positive definite (line-search signal).
struct DualEval {
  double value = 0.0;
  MatrixPoly grad;      // = adjoint_D(x)
  BlockToeplitz x;
  Matrix w;
  double logdet_w = 0.0;
};
std::optional<DualEval> dual_objective_grad(const MatrixPoly& z,
                                            const MatrixPoly& rhat);

// Euclidean projection onto { z : sum_i w_i |z_i| <= radius } with strictly
// positive weights; exact sorted-breakpoint solve.  Inputs already inside
// the ball are returned unchanged, bit for bit.
Vector weighted_l1_projection(const Vector& v, const Vector& w, double radius);

// Groupwise projection onto the dual budgets: for j > h the coordinates are
// (Z_0)_{jh} (weight 2, mirrored into (Z_0)_{hj}) and (Z_k)_{jh}, (Z_k)_{hj}
// for k >= 1 (weight 1 each); for j == h the n+1 diagonal coefficients with
// weight 1.  Radii are weights.budget(j, h).
MatrixPoly project_group_ball(const MatrixPoly& z, const WeightSet& weights);

// Worst absolute budget excess over groups; diagnostic for invariant tests.
double max_budget_violation(const MatrixPoly& z, const WeightSet& weights);

// Weighted dual-norm surrogate sum_{j >= h} gammas(j,h) * q_{jh}(s); the
// penalty term of the primal objective is (2 / nn) times this.
double weighted_group_norm(const MatrixPoly& s, const WeightSet& weights);

// Maximizes log det W(Z) + m over the dual budgets by projected gradient
// ascent from Z = 0 (or opts.warm_z).  Requires toeplitz(rhat) positive
// definite and all weights positive.
SparseSolution solve_sparse_dual(const MatrixPoly& rhat,
                                 const WeightSet& weights,
                                 const SolverOptions& opts = {});

// Inverse-spectrum coefficients of the solution: adjoint_D(x).  Pointwise,
// eval_poly of the result reproduces Delta(theta) X Delta(theta)^* exactly,
// so no further scaling is involved.
MatrixPoly recover_sigma(const BlockToeplitz& x);

}  // namespace argraph
