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

#include <vector>

#include "argraph/sparse_dual.hpp"

namespace argraph {

struct AdmmTracePoint {
  int outer = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double rho = 0.0;
  double dual_value = 0.0;
};

// Sparse-plus-low-rank concentration estimate.  x and h are the two primal
// parts (h positive semidefinite, ideally low rank), z the dual variable,
// psd_certificate the projection of the barrier matrix
// (2/nn) I (x) Q + toeplitz(z) onto the PSD cone; complementarity
// psd_certificate * h ~ 0 holds at an accurate stop.
struct LatentSolution {
  BlockToeplitz x;
  BlockToeplitz h;
  MatrixPoly z;
  Matrix w;
  Matrix q_used;
  BlockToeplitz psd_certificate;
  double dual_value = 0.0;
  double primal_value = 0.0;
  double gap = 0.0;
  int admm_iterations = 0;
  int inner_iterations = 0;  // gradient steps summed over sweeps
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  std::vector<AdmmTracePoint> trace;
};

// Nearest (Frobenius) positive semidefinite matrix: eigendecomposition of
// the symmetrized input with negative eigenvalues clipped at zero.
Matrix psd_project(const Matrix& sym);

// Low-rank part from the dual solution.  P spans the null space of
// (2/nn) I (x) Q + toeplitz(z) (eigenvalues <= tol_null, absolute);
// H = P M P^T with symmetric M solved in least squares from the
// stationarity pattern of adjoint_D(X + H): groups whose budget is slack
// (relative slack above tol_active) zero their coefficients, groups at
// budget tie every coefficient carrying dual weight to one shared
// magnitude signed like the dual entry.  M is then projected onto the
// PSD cone.  Empty null space or no equations yields H = 0.
BlockToeplitz recover_lowrank(const MatrixPoly& z, const Matrix& q,
                              const BlockToeplitz& x,
                              const WeightSet& weights, double tol_null,
                              double tol_active = 1e-8);

// ADMM splitting: the smooth dual objective keeps the budget constraints and
// the gradient machinery of the sparse solver; the PSD constraint on
// (2/nn) I (x) Q + toeplitz(Z) moves to an auxiliary matrix K updated by
// psd_project, with scaled multiplier M and residual-balanced rho.
// Requires toeplitz(rhat) positive definite and weights.q present SPD.
LatentSolution solve_latent_dual(const MatrixPoly& rhat,
                                 const WeightSet& weights,
                                 const SolverOptions& opts = {});

}  // namespace argraph
