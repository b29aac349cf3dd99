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

#include <cmath>
#include <random>

#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "argraph/latent_dual.hpp"
#include "test_util.hpp"

namespace argraph {
namespace {

using testutil::random_matrix;
using testutil::random_rhat;
using testutil::uniform_weights;

TEST_SUITE("latent_dual") {

TEST_CASE("positive part projection") {
  Matrix psd(2, 2);
  psd << 2.0, 0.5, 0.5, 1.0;
  CHECK((psd_project(psd) - psd).norm() <= 1e-12);

  Matrix indef = Matrix::Zero(2, 2);
  indef(0, 0) = 1.0;
  indef(1, 1) = -1.0;
  Matrix clipped = psd_project(indef);
  CHECK(clipped(0, 0) == doctest::Approx(1.0));
  CHECK(clipped(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("projection is Frobenius-nearest among candidates") {
  std::mt19937_64 rng(41);
  Matrix k = random_matrix(4, 4, rng);
  k = (0.5 * (k + k.transpose())).eval();
  const Matrix proj = psd_project(k);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(proj);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
  const double dist = (k - proj).norm();
  for (int rep = 0; rep < 100; ++rep) {
    const Matrix g = random_matrix(4, 4, rng);
    const Matrix candidate = g * g.transpose();
    CHECK(dist <= (k - candidate).norm() + 1e-12);
  }
}

TEST_CASE("huge low-rank penalty collapses to the sparse solver") {
  for (std::uint64_t seed : {801ull, 802ull}) {
    const MatrixPoly rhat = random_rhat(4, 1, seed);
    WeightSet w = uniform_weights(4, 2.0, 300.0);
    const SparseSolution sparse = solve_sparse_dual(rhat, w);

    w.q = 1e6 * Matrix::Identity(4, 4);
    const LatentSolution latent = solve_latent_dual(rhat, w);
    CHECK(latent.h.mat.norm() <= 1e-7);
    CHECK((latent.x.mat - sparse.x.mat).norm() /
              (1.0 + sparse.x.mat.norm()) <=
          1e-5);
  }
}

TEST_CASE("scalar order-zero collapse has the analytic limit") {
  MatrixPoly rhat(1, 0);
  rhat.block(0)(0, 0) = 1.0;
  WeightSet w = uniform_weights(1, 1.0, 100.0);
  w.q = Matrix::Constant(1, 1, 1e7);
  const LatentSolution sol = solve_latent_dual(rhat, w);
  CHECK(std::abs(sol.h.mat(0, 0)) <= 1e-8);
  CHECK(std::abs(sol.x.mat(0, 0) - 1.0 / 1.02) <= 1e-5);
}

TEST_CASE("certificates hold on random latent instances") {
  for (std::uint64_t seed : {811ull, 812ull, 813ull}) {
    const MatrixPoly rhat = random_rhat(4, 1, seed);
    WeightSet w = uniform_weights(4, 3.0, 400.0);
    w.q = 2.0 * Matrix::Identity(4, 4);
    SolverOptions opts;
    opts.collect_trace = true;
    const LatentSolution sol = solve_latent_dual(rhat, w, opts);
    CHECK(sol.converged);
    CHECK(sol.gap <= 1e-4 * (1.0 + std::abs(sol.dual_value)));
    const double compl_norm = (sol.psd_certificate.mat * sol.h.mat).norm();
    CHECK(compl_norm <= 1e-5 * (1.0 + sol.h.mat.norm()));

    // Weak residual trend: late residuals sit below early ones.
    if (sol.trace.size() >= 20) {
      const auto& early = sol.trace[9];
      const auto& late = sol.trace.back();
      CHECK(std::max(late.primal_residual, late.dual_residual) <=
            std::max(early.primal_residual, early.dual_residual));
    }

    // Dual feasibility: budgets, Schur positivity, PSD certificate.
    CHECK(max_budget_violation(sol.z, w) <= 1e-9);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sol.psd_certificate.mat);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
    CHECK(sol.h.mat.selfadjointView<Eigen::Lower>()
              .eigenvalues()
              .minCoeff() >= -1e-8);
  }
}

TEST_CASE("adding the semidefinite constraint cannot raise the dual") {
  const MatrixPoly rhat = random_rhat(3, 1, 821);
  WeightSet w = uniform_weights(3, 2.0, 250.0);
  const SparseSolution sparse = solve_sparse_dual(rhat, w);
  w.q = 1.5 * Matrix::Identity(3, 3);
  const LatentSolution latent = solve_latent_dual(rhat, w);
  CHECK(latent.dual_value <= sparse.dual_value + 1e-7);
}

TEST_CASE("strictly positive dual slack yields no latent part") {
  const MatrixPoly rhat = random_rhat(3, 1, 831);
  WeightSet w = uniform_weights(3, 1.0, 200.0);
  w.q = Matrix::Identity(3, 3);
  MatrixPoly z(3, 1);  // zero is strictly inside every budget
  const BlockToeplitz x = yule_walker_concentration(rhat);
  const BlockToeplitz h = recover_lowrank(z, *w.q, x, w, 1e-6);
  CHECK(h.mat.norm() == 0.0);
}

TEST_CASE("constructed null space recovery is exact") {
  // Order zero: the lifted matrix is a plain symmetric matrix, the
  // slack-group equations read X + H = 0, and with H = P M P^T the unique
  // solution is M*.
  const int m = 4;
  std::mt19937_64 rng(43);
  Matrix basis = random_matrix(m, 2, rng);
  const Eigen::HouseholderQR<Matrix> qr(basis);
  const Matrix p = qr.householderQ() * Matrix::Identity(m, 2);

  Matrix mstar(2, 2);
  mstar << 2.0, 0.5, 0.5, 1.0;  // positive definite
  const Matrix h_true = p * mstar * p.transpose();

  // Null space of the certificate matrix is exactly span(p).
  Matrix perp_basis = random_matrix(m, m, rng);
  perp_basis.leftCols(2) = p;
  const Eigen::HouseholderQR<Matrix> full(perp_basis);
  const Matrix q_full = full.householderQ();
  const Matrix perp = q_full.rightCols(m - 2);
  const Matrix v_hat =
      perp * (Matrix::Identity(m - 2, m - 2) * 3.0) * perp.transpose();

  WeightSet w = uniform_weights(m, 50.0, 100.0);  // all groups slack at z=0
  const double c = 2.0 / w.nn;
  const Matrix q_input = v_hat / c;  // so the rebuilt certificate equals v_hat
  MatrixPoly z(m, 0);

  BlockToeplitz x(m, 0);
  x.mat = -h_true;

  const BlockToeplitz h = recover_lowrank(z, q_input, x, w, 1e-6);
  CHECK((h.mat - h_true).norm() <= 1e-6);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(h.mat);
  const int rank = (eig.eigenvalues().array() > 1e-8).count();
  CHECK(rank <= 2);
}

}  // TEST_SUITE

}  // namespace
}  // namespace argraph
