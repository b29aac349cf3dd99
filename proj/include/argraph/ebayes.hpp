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
#include <string>
#include <vector>

#include "argraph/latent_dual.hpp"
#include "argraph/sparse_dual.hpp"

namespace argraph {

struct EBConfig {
  double eps_s = 1e-3;    // group-norm smoothing in the weight updates
  double eps_l = 1e-3;    // eigenvalue smoothing in the barrier update
  double eps_stop = 1e-4; // outer stop on the iterate change
  int l_max = 50;
  double alpha = 0.1;     // latent initializer split
  bool gml_weights = true; // marginal-likelihood update; false: plain 1/(q+eps)
  bool relative_step = false; // step change relative to the iterate norm
  bool warm_start = true;  // reuse the previous outer iterate's dual point
  bool collect_trace = true;
  SolverOptions solver = default_eb_solver_options();

  // Inner tolerances tight enough that the certified gap cannot disturb the
  // outer objective monitoring at the 1e-8 level.
  static SolverOptions default_eb_solver_options() {
    SolverOptions opts;
    opts.tol_pg = 1e-13;
    opts.tol_gap = 1e-11;
    opts.max_iter = 50000;
    opts.tol_admm = 1e-9;
    opts.max_admm = 20000;
    return opts;
  }
};

struct EBTracePoint {
  int iteration = 0;
  Matrix gammas;
  std::optional<Matrix> q;
  double mm_value = 0.0;
  double step_change = 0.0;  // infinity on the first record
  double gap = 0.0;
  double dual_value = 0.0;
  int inner_iterations = 0;
};

struct EstimateResult {
  std::string mode;  // "sparse" or "latent"
  int m = 0;
  int n = 0;
  double nn = 0.0;
  BlockToeplitz x;
  std::optional<BlockToeplitz> h;
  MatrixPoly s;               // adjoint_D(x + h); the sparse coefficients
  std::optional<MatrixPoly> l; // adjoint_D(h)
  MatrixPoly z;               // final dual point (warm-start handle)
  double gap = 0.0;
  double dual_value = 0.0;
  double primal_value = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
  bool converged = false;
  std::vector<EBTracePoint> trace;
  WeightSet final_weights;    // weights used by the last inner solve
};

// Reweighting rule: gamma_jj = (n+1)/(q_jj(s)+eps), gamma_jh =
// (2n+1)/(q_jh(s)+eps) for j > h; each entry minimizes
// gamma q - (count) log gamma, the marginal-likelihood surrogate.
// gml=false uses the plain 1/(q+eps) rule on every group.
Matrix update_gamma(const MatrixPoly& s, double eps, bool gml = true);

// Barrier weight update: Q = ((m+1)/2) (L0 + eps I)^{-1}, the minimizer of
// tr(Q L0') - ((m+1)/2) log det Q.  L0 is symmetrized on entry.
Matrix update_q(const Matrix& l0, double eps);

// Surrogate objective monitored across outer iterations: the weighted
// log-sum penalty plus the (sample-scaled) negative log-likelihood
//   sum_{j>h} (2n+1) log(q_jh + eps_s) + sum_j (n+1) log(q_jj + eps_s)
//   + (nn/2)(-log det X_00 + <toeplitz(rhat), X>),
// with q evaluated on adjoint_D(X) (sparse) or adjoint_D(X+H) (latent);
// the latent form adds ((m+1)/2) log det(D_0(H) + eps_l I).
double mm_objective(const BlockToeplitz& x, const BlockToeplitz* h,
                    const MatrixPoly& rhat, double nn, const EBConfig& cfg);

// Outer loop, sparse model: initialize weights from the plain order-n fit,
// alternate solve / reweight until the iterate change drops below eps_stop
// or l_max solves have run.  nn is the effective sample count (N - n).
EstimateResult run_sparse_eb(const MatrixPoly& rhat, double nn,
                             const EBConfig& cfg = {});

// Outer loop, latent model: weights start from the split
// (1 + alpha) adjoint_D(X_B) / alpha D_0(X_B); the step change is
// ||dX||_F + ||dH||_F.
EstimateResult run_latent_eb(const MatrixPoly& rhat, double nn,
                             const EBConfig& cfg = {});

}  // namespace argraph
