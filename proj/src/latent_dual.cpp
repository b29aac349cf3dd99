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

#include "argraph/latent_dual.hpp"

#include <algorithm>
#include <cmath>

#include "argraph/detail/pg.hpp"
#include "argraph/detail/zvec.hpp"

namespace argraph {

namespace {

Matrix block_diag_q(const Matrix& q, int n) {
  const int m = static_cast<int>(q.rows());
  Matrix out = Matrix::Zero(m * (n + 1), m * (n + 1));
  for (int h = 0; h <= n; ++h) out.block(h * m, h * m, m, m) = q;
  return out;
}

struct GroupUsage {
  double usage = 0.0;
  double budget = 0.0;
};

GroupUsage group_usage(const MatrixPoly& z, const WeightSet& weights, int j,
                       int h) {
  GroupUsage out;
  out.budget = weights.budget(j, h);
  if (j == h) {
    for (int k = 0; k <= z.n; ++k) out.usage += std::abs(z.block(k)(j, j));
  } else {
    out.usage = 2.0 * std::abs(z.block(0)(j, h));
    for (int k = 1; k <= z.n; ++k)
      out.usage += std::abs(z.block(k)(j, h)) + std::abs(z.block(k)(h, j));
  }
  return out;
}

}  // namespace

Matrix psd_project(const Matrix& sym) {
  const Matrix s = ((sym + sym.transpose()) * 0.5).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("psd_project: eigendecomposition failed");
  const Vector clipped = eig.eigenvalues().cwiseMax(0.0);
  Matrix out = eig.eigenvectors() * clipped.asDiagonal() *
               eig.eigenvectors().transpose();
  return ((out + out.transpose()) * 0.5).eval();
}

BlockToeplitz recover_lowrank(const MatrixPoly& z, const Matrix& q,
                              const BlockToeplitz& x,
                              const WeightSet& weights, double tol_null,
                              double tol_active) {
  const int m = z.m;
  const int n = z.n;
  const double c = 2.0 / weights.nn;
  BlockToeplitz h_out(m, n);

  Matrix v = c * block_diag_q(q, n) + toeplitz(z).mat;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(
      ((v + v.transpose()) * 0.5).eval());
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("recover_lowrank: eigendecomposition failed");
  int null_dim = 0;
  while (null_dim < eig.eigenvalues().size() &&
         eig.eigenvalues()(null_dim) <= tol_null)
    ++null_dim;
  if (null_dim == 0) return h_out;
  const Matrix p = eig.eigenvectors().leftCols(null_dim);

  // Stationarity equations on the coefficients of adjoint_D(X + H): a
  // group with slack budget forces its coefficients to vanish, a group at
  // budget ties every coefficient carrying dual weight to one shared
  // magnitude, signed like the dual entry.  The shared magnitudes are
  // extra least-squares unknowns appended after the entries of M.
  struct Constraint {
    int k, row, col;
    int tvar;     // index of the shared magnitude, -1 for zero equations
    double sign;  // dual sign on shared-magnitude rows
  };
  std::vector<Constraint> constraints;
  int shared = 0;
  for (int j = 0; j < m; ++j) {
    for (int hh = 0; hh <= j; ++hh) {
      const GroupUsage gu = group_usage(z, weights, j, hh);
      if (gu.budget - gu.usage > tol_active * gu.budget) {
        for (int k = 0; k <= n; ++k) {
          constraints.push_back({k, j, hh, -1, 0.0});
          if (k >= 1 && j != hh) constraints.push_back({k, hh, j, -1, 0.0});
        }
        continue;
      }
      // The groupwise projection soft-thresholds, so the dual support is
      // clean; the tolerance only sheds roundoff survivors.
      const double support_tol = 1e-9 * gu.budget;
      const std::size_t before = constraints.size();
      const auto add = [&](int k, int row, int col) {
        const double ze = z.block(k)(row, col);
        if (std::abs(ze) > support_tol)
          constraints.push_back({k, row, col, shared, ze > 0.0 ? 1.0 : -1.0});
      };
      add(0, j, hh);
      for (int k = 1; k <= n; ++k) {
        add(k, j, hh);
        if (j != hh) add(k, hh, j);
      }
      if (constraints.size() > before) ++shared;
    }
  }
  if (constraints.empty()) return h_out;

  const MatrixPoly dx = adjoint_D(x);
  const int unknowns = null_dim * (null_dim + 1) / 2;
  Matrix a = Matrix::Zero(static_cast<Eigen::Index>(constraints.size()),
                          unknowns + shared);
  Vector rhs(static_cast<Eigen::Index>(constraints.size()));
  for (std::size_t row = 0; row < constraints.size(); ++row) {
    rhs(static_cast<Eigen::Index>(row)) =
        -dx.block(constraints[row].k)(constraints[row].row,
                                      constraints[row].col);
    if (constraints[row].tvar >= 0)
      a(static_cast<Eigen::Index>(row), unknowns + constraints[row].tvar) =
          -constraints[row].sign;
  }

  BlockToeplitz scratch(m, n);
  int col = 0;
  for (int ii = 0; ii < null_dim; ++ii) {
    for (int jj = ii; jj < null_dim; ++jj, ++col) {
      if (ii == jj)
        scratch.mat = p.col(ii) * p.col(ii).transpose();
      else
        scratch.mat = p.col(ii) * p.col(jj).transpose() +
                      p.col(jj) * p.col(ii).transpose();
      const MatrixPoly db = adjoint_D(scratch);
      for (std::size_t row = 0; row < constraints.size(); ++row)
        a(static_cast<Eigen::Index>(row), col) =
            db.block(constraints[row].k)(constraints[row].row,
                                         constraints[row].col);
    }
  }

  const Vector solution =
      a.completeOrthogonalDecomposition().solve(rhs);
  Matrix mcoeff = Matrix::Zero(null_dim, null_dim);
  col = 0;
  for (int ii = 0; ii < null_dim; ++ii) {
    for (int jj = ii; jj < null_dim; ++jj, ++col) {
      mcoeff(ii, jj) = solution(col);
      mcoeff(jj, ii) = solution(col);
    }
  }
  mcoeff = psd_project(mcoeff);
  h_out.mat = p * mcoeff * p.transpose();
  h_out.mat = ((h_out.mat + h_out.mat.transpose()) * 0.5).eval();
  return h_out;
}

LatentSolution solve_latent_dual(const MatrixPoly& rhat,
                                 const WeightSet& weights,
                                 const SolverOptions& opts) {
  const int m = rhat.m;
  const int n = rhat.n;
  if (weights.nn <= 0.0 || !weights.q)
    throw std::invalid_argument("solve_latent_dual: weights need nn and q");
  {
    Eigen::LLT<Matrix> llt(*weights.q);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("solve_latent_dual: q must be SPD");
  }
  const BlockToeplitz t_rhat = toeplitz(rhat);
  {
    Eigen::LLT<Matrix> llt(t_rhat.mat);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error(
          "solve_latent_dual: sample Toeplitz matrix is not positive "
          "definite");
  }

  const double c = 2.0 / weights.nn;
  const Matrix iq = c * block_diag_q(*weights.q, n);

  const auto smooth_eval = [&](const MatrixPoly& z) {
    BlockToeplitz b(m, n);
    b.mat = t_rhat.mat + toeplitz(z).mat;
    const auto schur = try_block_schur(b);
    if (!schur) return std::optional<std::pair<double, BlockToeplitz>>();
    Eigen::LLT<Matrix> llt(schur->w);
    BlockToeplitz x(m, n);
    x.mat = schur->a * llt.solve(schur->a.transpose());
    x.mat = ((x.mat + x.mat.transpose()) * 0.5).eval();
    const double logdet =
        2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return std::make_optional(std::make_pair(logdet, std::move(x)));
  };

  MatrixPoly z(m, n);
  if (opts.warm_z && opts.warm_z->m == m && opts.warm_z->n == n) {
    z = project_group_ball(*opts.warm_z, weights);
    for (int attempt = 0; attempt < 80 && !smooth_eval(z); ++attempt)
      z *= 0.5;
    if (!smooth_eval(z)) z.set_zero();
  }

  LatentSolution sol;
  sol.q_used = *weights.q;
  const detail::ZLayout lay = detail::make_zlayout(m, n);
  double rho = opts.rho;
  Matrix v = iq + toeplitz(z).mat;
  Matrix k = psd_project(v);
  Matrix mult = Matrix::Zero(v.rows(), v.cols());
  double resid = (v - k).norm();
  const auto project = [&](const Vector& zv) {
    return detail::project_zvec(zv, weights, lay);
  };

  // The splitting residuals alone do not bound the duality gap, so a stop
  // is only accepted once the gap certified from the recovered primal
  // candidate is below target; otherwise the residual tolerance tightens
  // and the sweeps continue.
  const double gap_target = std::max(opts.tol_gap, 1e-6);
  const auto certify = [&]() {
    const auto final_smooth = smooth_eval(z);
    if (!final_smooth)
      throw std::runtime_error("solve_latent_dual: lost feasibility");
    sol.z = z;
    sol.x = final_smooth->second;
    {
      BlockToeplitz b(m, n);
      b.mat = t_rhat.mat + toeplitz(z).mat;
      sol.w = block_schur(b).w;
    }
    sol.dual_value = final_smooth->first + m;

    const Matrix vz = iq + toeplitz(z).mat;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(vz, Eigen::EigenvaluesOnly);
    const double lambda_max = std::max(eig.eigenvalues().maxCoeff(), 0.0);
    // The null-space threshold keeps a floor of ten times the achieved
    // splitting residual: eigenvalues are only trustworthy to that order.
    const double tol_null_abs =
        std::max(opts.tol_null * lambda_max,
                 10.0 * std::max(sol.primal_residual, sol.dual_residual));
    sol.h = recover_lowrank(z, *weights.q, sol.x, weights, tol_null_abs,
                            opts.tol_active);
    sol.psd_certificate = BlockToeplitz(m, n);
    sol.psd_certificate.mat = psd_project(vz);

    BlockToeplitz xh(m, n);
    xh.mat = sol.x.mat + sol.h.mat;
    const MatrixPoly s_xh = adjoint_D(xh);
    const MatrixPoly d0x = adjoint_D(sol.x);
    Matrix d0h = Matrix::Zero(m, m);
    for (int blockrow = 0; blockrow <= n; ++blockrow)
      d0h += sol.h.block(blockrow, blockrow);
    const double h_barrier = c * (weights.q->cwiseProduct(d0h)).sum();
    const double logdet_w = sol.dual_value - m;
    sol.primal_value =
        logdet_w + poly_dot(rhat, d0x) +
        (2.0 / weights.nn) * weighted_group_norm(s_xh, weights) + h_barrier;
    sol.gap = sol.primal_value - sol.dual_value;
    return sol.gap / (1.0 + std::abs(sol.dual_value));
  };

  bool admm_converged = false;
  double tol_admm_eff = opts.tol_admm;
  for (int outer = 1; outer <= opts.max_admm; ++outer) {
    sol.admm_iterations = outer;
    // Sweep tolerance tracks the outer residual so early sweeps stay cheap.
    const double inner_tol = std::clamp(0.1 * resid, 1e-10, 1e-3);

    const auto evaluate =
        [&](const Vector& zv) -> std::optional<detail::PgEval> {
      const MatrixPoly zz = detail::z_from_vec(zv, lay);
      const auto se = smooth_eval(zz);
      if (!se) return std::nullopt;
      BlockToeplitz residual(m, n);
      residual.mat = iq + toeplitz(zz).mat - k + mult;
      detail::PgEval ev;
      ev.value = se->first - 0.5 * rho * residual.mat.squaredNorm();
      MatrixPoly grad = adjoint_D(se->second);
      grad -= rho * adjoint_D(residual);
      ev.grad = detail::grad_to_vec(grad, lay);
      return ev;
    };
    detail::PgOptions pg;
    pg.tol_pg = inner_tol;
    pg.max_iter = opts.inner_max_iter;
    pg.backtrack = opts.backtrack;
    const auto step =
        pg_maximize(evaluate, project, detail::z_to_vec(z, lay), pg);
    z = detail::z_from_vec(step.z, lay);
    sol.inner_iterations += step.iterations;

    v = iq + toeplitz(z).mat;
    const Matrix k_new = psd_project(v + mult);
    sol.primal_residual = (v - k_new).norm();
    BlockToeplitz dk(m, n);
    dk.mat = k_new - k;
    sol.dual_residual = rho * adjoint_D(dk).norm();
    mult += v - k_new;
    k = k_new;
    resid = std::max(sol.primal_residual, sol.dual_residual);

    if (opts.collect_trace) {
      const auto se = smooth_eval(z);
      sol.trace.push_back({outer, sol.primal_residual, sol.dual_residual, rho,
                           se ? se->first + m : 0.0});
    }
    if (resid <= tol_admm_eff) {
      if (certify() <= gap_target) {
        admm_converged = true;
        break;
      }
      if (tol_admm_eff <= 1e-11) break;
      tol_admm_eff = std::max(0.1 * tol_admm_eff, 1e-11);
    }
    // Residual balancing keeps the two rates comparable; the multiplier is
    // stored in scaled form, so it rescales inversely with rho.
    if (sol.primal_residual > 10.0 * sol.dual_residual && rho < 1e6) {
      rho *= 2.0;
      mult *= 0.5;
    } else if (sol.dual_residual > 10.0 * sol.primal_residual && rho > 1e-6) {
      rho *= 0.5;
      mult *= 2.0;
    }
  }
  sol.converged = admm_converged;
  certify();
  return sol;
}

}  // namespace argraph
