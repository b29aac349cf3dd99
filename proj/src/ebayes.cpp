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

#include "argraph/ebayes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "argraph/armodel.hpp"

namespace argraph {

namespace {

double group_count(int n, int j, int h) {
  return j == h ? n + 1.0 : 2.0 * n + 1.0;
}

// sum over groups count * log(q_jh(s) + eps); the concave penalty whose
// tangent at the current iterate yields update_gamma.
double log_penalty(const MatrixPoly& s, double eps) {
  double total = 0.0;
  for (int j = 0; j < s.m; ++j) {
    for (int h = 0; h <= j; ++h) {
      total += group_count(s.n, j, h) * std::log(group_maxnorm(s, j, h) + eps);
    }
  }
  return total;
}

// (nn/2) (-log det X_00 + <toeplitz(rhat), X>); X_00 = W^{-1} at solutions,
// so -log det X_00 = log det W there.
double scaled_likelihood(const BlockToeplitz& x, const MatrixPoly& rhat,
                         double nn) {
  const Matrix x00 = x.block(0, 0);
  const double pairing = toeplitz(rhat).mat.cwiseProduct(x.mat).sum();
  return 0.5 * nn * (-logdet_spd(x00) + pairing);
}

Matrix lowrank_top_block(const BlockToeplitz& h) {
  Matrix l0 = Matrix::Zero(h.m, h.m);
  for (int k = 0; k <= h.n; ++k) l0 += h.block(k, k);
  return 0.5 * (l0 + l0.transpose());
}

double step_norm(const BlockToeplitz& current, const BlockToeplitz& previous,
                 bool relative) {
  const double raw = (current.mat - previous.mat).norm();
  return relative ? raw / (1.0 + previous.mat.norm()) : raw;
}

// Inner objective the solvers minimize, evaluated at an arbitrary feasible
// point.  Comparing the fresh solve against the previous iterate under the
// fresh weights decides whether the solve made genuine progress; the
// majorization argument then keeps the outer objective non-increasing.
double fit_term(const BlockToeplitz& x, const Matrix& t_rhat_mat) {
  return -logdet_spd(x.block(0, 0)) + t_rhat_mat.cwiseProduct(x.mat).sum();
}

double sparse_inner_primal(const BlockToeplitz& x, const Matrix& t_rhat_mat,
                           const WeightSet& weights) {
  return fit_term(x, t_rhat_mat) +
         (2.0 / weights.nn) * weighted_group_norm(adjoint_D(x), weights);
}

double latent_inner_primal(const BlockToeplitz& x, const BlockToeplitz& h,
                           const Matrix& t_rhat_mat,
                           const WeightSet& weights) {
  BlockToeplitz total = x;
  total.mat += h.mat;
  const double q_pairing =
      weights.q->cwiseProduct(lowrank_top_block(h)).sum();
  return fit_term(x, t_rhat_mat) +
         (2.0 / weights.nn) *
             (weighted_group_norm(adjoint_D(total), weights) + q_pairing);
}

}  // namespace

Matrix update_gamma(const MatrixPoly& s, double eps, bool gml) {
  if (eps <= 0.0) {
    throw std::invalid_argument("update_gamma: eps must be positive");
  }
  Matrix gammas(s.m, s.m);
  for (int j = 0; j < s.m; ++j) {
    for (int h = 0; h <= j; ++h) {
      const double numer = gml ? group_count(s.n, j, h) : 1.0;
      gammas(j, h) = numer / (group_maxnorm(s, j, h) + eps);
      gammas(h, j) = gammas(j, h);
    }
  }
  return gammas;
}

Matrix update_q(const Matrix& l0, double eps) {
  if (l0.rows() != l0.cols()) {
    throw std::invalid_argument("update_q: L0 must be square");
  }
  if (eps <= 0.0) {
    throw std::invalid_argument("update_q: eps must be positive");
  }
  const int m = static_cast<int>(l0.rows());
  Matrix shifted = 0.5 * (l0 + l0.transpose());
  shifted.diagonal().array() += eps;
  Eigen::LLT<Matrix> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("update_q: L0 + eps I is not positive definite");
  }
  Matrix inv = llt.solve(Matrix::Identity(m, m));
  inv = 0.5 * (inv + inv.transpose());
  return 0.5 * (m + 1.0) * inv;
}

double mm_objective(const BlockToeplitz& x, const BlockToeplitz* h,
                    const MatrixPoly& rhat, double nn, const EBConfig& cfg) {
  BlockToeplitz total = x;
  if (h != nullptr) total.mat += h->mat;
  double value = log_penalty(adjoint_D(total), cfg.eps_s) +
                 scaled_likelihood(x, rhat, nn);
  if (h != nullptr) {
    Matrix shifted = lowrank_top_block(*h);
    shifted.diagonal().array() += cfg.eps_l;
    value += 0.5 * (x.m + 1.0) * logdet_spd(shifted);
  }
  return value;
}

EstimateResult run_sparse_eb(const MatrixPoly& rhat, double nn,
                             const EBConfig& cfg) {
  if (nn <= 0.0) {
    throw std::invalid_argument("run_sparse_eb: nn must be positive");
  }
  EstimateResult out;
  out.mode = "sparse";
  out.m = rhat.m;
  out.n = rhat.n;
  out.nn = nn;

  const BlockToeplitz x_plain = yule_walker_concentration(rhat);
  WeightSet weights;
  weights.nn = nn;
  weights.gammas = update_gamma(adjoint_D(x_plain), cfg.eps_s, cfg.gml_weights);

  const Matrix t_rhat_mat = toeplitz(rhat).mat;
  SolverOptions opts = cfg.solver;
  SparseSolution sol;
  std::optional<SparseSolution> prev;
  for (int l = 0; l < cfg.l_max; ++l) {
    if (l > 0) {
      weights.gammas =
          update_gamma(adjoint_D(sol.x), cfg.eps_s, cfg.gml_weights);
      if (cfg.warm_start) opts.warm_z = sol.z;
    }
    sol = solve_sparse_dual(rhat, weights, opts);
    out.outer_iterations = l + 1;
    out.inner_iterations += sol.iterations;
    if (prev && sparse_inner_primal(sol.x, t_rhat_mat, weights) >
                    sparse_inner_primal(prev->x, t_rhat_mat, weights)) {
      // The solve could not improve on the incumbent at the new weights:
      // the inner accuracy is exhausted, so keep the incumbent and stop.
      sol = *prev;
    }

    const double step =
        prev ? step_norm(sol.x, prev->x, cfg.relative_step)
             : std::numeric_limits<double>::infinity();
    if (cfg.collect_trace) {
      EBTracePoint point;
      point.iteration = l;
      point.gammas = weights.gammas;
      point.mm_value = mm_objective(sol.x, nullptr, rhat, nn, cfg);
      point.step_change = step;
      point.gap = sol.gap;
      point.dual_value = sol.dual_value;
      point.inner_iterations = sol.iterations;
      out.trace.push_back(std::move(point));
    }
    if (prev && step < cfg.eps_stop) {
      out.converged = true;
      break;
    }
    prev = sol;
  }

  out.x = sol.x;
  out.s = adjoint_D(sol.x);
  out.z = sol.z;
  out.gap = sol.gap;
  out.dual_value = sol.dual_value;
  out.primal_value = sol.primal_value;
  out.final_weights = weights;
  return out;
}

EstimateResult run_latent_eb(const MatrixPoly& rhat, double nn,
                             const EBConfig& cfg) {
  if (nn <= 0.0) {
    throw std::invalid_argument("run_latent_eb: nn must be positive");
  }
  EstimateResult out;
  out.mode = "latent";
  out.m = rhat.m;
  out.n = rhat.n;
  out.nn = nn;

  // Initial split of the plain fit: the sparse share grows by alpha, the
  // low-rank barrier starts from alpha times the top block.
  const BlockToeplitz x_plain = yule_walker_concentration(rhat);
  const MatrixPoly sigma_plain = adjoint_D(x_plain);
  WeightSet weights;
  weights.nn = nn;
  weights.gammas = update_gamma((1.0 + cfg.alpha) * sigma_plain, cfg.eps_s,
                                cfg.gml_weights);
  weights.q = update_q(cfg.alpha * sigma_plain.block(0), cfg.eps_l);

  const Matrix t_rhat_mat = toeplitz(rhat).mat;
  SolverOptions opts = cfg.solver;
  LatentSolution sol;
  std::optional<LatentSolution> prev;
  for (int l = 0; l < cfg.l_max; ++l) {
    if (l > 0) {
      BlockToeplitz total = sol.x;
      total.mat += sol.h.mat;
      weights.gammas =
          update_gamma(adjoint_D(total), cfg.eps_s, cfg.gml_weights);
      weights.q = update_q(lowrank_top_block(sol.h), cfg.eps_l);
      if (cfg.warm_start) opts.warm_z = sol.z;
    }
    sol = solve_latent_dual(rhat, weights, opts);
    out.outer_iterations = l + 1;
    out.inner_iterations += sol.inner_iterations;
    if (prev &&
        latent_inner_primal(sol.x, sol.h, t_rhat_mat, weights) >
            latent_inner_primal(prev->x, prev->h, t_rhat_mat, weights)) {
      // The solve could not improve on the incumbent at the new weights:
      // the inner accuracy is exhausted, so keep the incumbent and stop.
      sol = *prev;
    }

    double step = std::numeric_limits<double>::infinity();
    if (prev) {
      step = step_norm(sol.x, prev->x, cfg.relative_step) +
             step_norm(sol.h, prev->h, cfg.relative_step);
    }
    if (cfg.collect_trace) {
      EBTracePoint point;
      point.iteration = l;
      point.gammas = weights.gammas;
      point.q = weights.q;
      point.mm_value = mm_objective(sol.x, &sol.h, rhat, nn, cfg);
      point.step_change = step;
      point.gap = sol.gap;
      point.dual_value = sol.dual_value;
      point.inner_iterations = sol.inner_iterations;
      out.trace.push_back(std::move(point));
    }
    if (prev && step < cfg.eps_stop) {
      out.converged = true;
      break;
    }
    prev = sol;
  }

  out.x = sol.x;
  out.h = sol.h;
  BlockToeplitz total = sol.x;
  total.mat += sol.h.mat;
  out.s = adjoint_D(total);
  out.l = adjoint_D(sol.h);
  out.z = sol.z;
  out.gap = sol.gap;
  out.dual_value = sol.dual_value;
  out.primal_value = sol.primal_value;
  out.final_weights = weights;
  return out;
}

}  // namespace argraph
