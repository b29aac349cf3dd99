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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "argraph/armodel.hpp"
#include "argraph/tsdata.hpp"
#include "test_util.hpp"

namespace argraph {
namespace {

TEST_SUITE("armodel") {

TEST_CASE("zero density gives a diagonal truth") {
  const GroundTruth truth = random_sparse_inverse(4, 1, 0.0, 0.1, 3);
  CHECK(truth.support.empty());
  CHECK(truth.r == 0);
  for (int k = 0; k <= 1; ++k) {
    Matrix off = truth.S.block(k);
    off.diagonal().setZero();
    CHECK(off.norm() == 0.0);
  }
}

TEST_CASE("generator respects the positivity margin") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 9ull}) {
    const GroundTruth truth = random_sparse_inverse(5, 2, 0.3, 0.25, seed);
    CHECK(grid_min_eig(truth.S) >= 0.25 - 1e-9);
  }
}

TEST_CASE("generator support count matches the requested density") {
  const int m = 8;
  const double density = 0.2;
  const GroundTruth truth = random_sparse_inverse(m, 1, density, 0.1, 5);
  const int requested =
      static_cast<int>(std::ceil(density * m * (m - 1) / 2.0));
  CHECK(std::abs(static_cast<int>(truth.support.size()) - requested) <= 1);
  // Off-support coefficients are exactly zero.
  for (int j = 1; j < m; ++j) {
    for (int h = 0; h < j; ++h) {
      const bool on = std::find(truth.support.begin(), truth.support.end(),
                                std::pair{j, h}) != truth.support.end();
      if (!on) CHECK(group_maxnorm(truth.S, j, h) == 0.0);
    }
  }
}

TEST_CASE("generator is deterministic in the seed") {
  const GroundTruth a = random_sparse_inverse(5, 1, 0.3, 0.1, 42);
  const GroundTruth b = random_sparse_inverse(5, 1, 0.3, 0.1, 42);
  for (int k = 0; k <= 1; ++k) {
    CHECK((a.S.block(k) - b.S.block(k)).norm() == 0.0);
  }
  CHECK(a.support == b.support);
}

TEST_CASE("latent generator rank and positivity") {
  const GroundTruth truth = random_latent_inverse(6, 1, 0.2, 2, 0.1, 7);
  REQUIRE(truth.H.has_value());
  REQUIRE(truth.L.has_value());
  CHECK(truth.r == 2);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(truth.H->mat);
  const int above = (eig.eigenvalues().array() > 1e-10).count();
  CHECK(above == 2);

  // The low-rank spectrum is PSD on the grid and the difference keeps the
  // margin.
  CHECK(grid_min_eig(*truth.L) >= -1e-10);
  MatrixPoly diff = truth.S;
  diff -= *truth.L;
  CHECK(grid_min_eig(diff) >= 0.1 - 1e-9);
}

TEST_CASE("white spectrum has identity lags") {
  MatrixPoly s(3, 1);
  s.block(0) = Matrix::Identity(3, 3);
  const MatrixPoly lags = exact_lags(s, 2);
  CHECK((lags.block(0) - Matrix::Identity(3, 3)).norm() <= 1e-10);
  CHECK(lags.block(1).norm() <= 1e-10);
  CHECK(lags.block(2).norm() <= 1e-10);
}

TEST_CASE("scalar lag zero has the closed form") {
  MatrixPoly s(1, 1);
  s.block(0)(0, 0) = 2.0;
  s.block(1)(0, 0) = 1.0;
  const MatrixPoly lags = exact_lags(s, 1);
  // Integral of (2 + cos t)^{-1} over the circle is 1/sqrt(3).
  CHECK(std::abs(lags.block(0)(0, 0) - 1.0 / std::sqrt(3.0)) <= 1e-8);
}

TEST_CASE("fit residuals vanish on exact lags") {
  const GroundTruth truth = random_sparse_inverse(4, 2, 0.3, 0.15, 11);
  const MatrixPoly lags = exact_lags(truth.S, 6);
  MatrixPoly head(4, 2);
  for (int k = 0; k <= 2; ++k) head.block(k) = lags.block(k);
  const ARModel fit = yule_walker(head);
  // R_k + sum_j A_j R_{k-j} = 0 for k >= 1 (transposed lag convention for
  // negative indices).
  for (int k = 1; k <= 4; ++k) {
    Matrix resid = lags.block(k);
    for (int j = 1; j <= 2; ++j) {
      const int idx = k - j;
      const Matrix lag =
          idx >= 0 ? lags.block(idx) : Matrix(lags.block(-idx).transpose());
      resid += fit.coeffs[static_cast<std::size_t>(j - 1)] * lag;
    }
    CHECK(resid.norm() <= 1e-6);
  }
}

TEST_CASE("white-noise fit is trivial") {
  MatrixPoly lags(3, 2);
  lags.block(0) = Matrix::Identity(3, 3);
  const ARModel fit = yule_walker(lags);
  CHECK(fit.coeffs[0].norm() <= 1e-12);
  CHECK(fit.coeffs[1].norm() <= 1e-12);
  CHECK((fit.noise_cov - Matrix::Identity(3, 3)).norm() <= 1e-12);
}

TEST_CASE("scalar normal equations by hand") {
  MatrixPoly lags(1, 1);
  lags.block(0)(0, 0) = 1.0;
  lags.block(1)(0, 0) = 0.5;
  const ARModel fit = yule_walker(lags);
  CHECK(fit.coeffs[0](0, 0) == doctest::Approx(-0.5));
  CHECK(fit.noise_cov(0, 0) == doctest::Approx(0.75));
}

TEST_CASE("fit on exact lags recovers the concentration coefficients") {
  const GroundTruth truth = random_sparse_inverse(4, 1, 0.3, 0.2, 13);
  const MatrixPoly lags = exact_lags(truth.S, 1);
  const BlockToeplitz x = yule_walker_concentration(lags);
  const MatrixPoly s_hat = adjoint_D(x);
  double num = 0.0, den = 0.0;
  for (int k = 0; k <= 1; ++k) {
    num += (s_hat.block(k) - truth.S.block(k)).squaredNorm();
    den += truth.S.block(k).squaredNorm();
  }
  CHECK(std::sqrt(num / den) <= 1e-5);
}

TEST_CASE("simulation is deterministic and stable models are required") {
  const GroundTruth truth = random_sparse_inverse(3, 1, 0.3, 0.2, 17);
  CHECK(companion_spectral_radius(truth.ar) < 1.0);
  const TimeSeries a = simulate(truth.ar, 100, 5);
  const TimeSeries b = simulate(truth.ar, 100, 5);
  CHECK((a.samples - b.samples).norm() == 0.0);
  const TimeSeries c = simulate(truth.ar, 100, 6);
  CHECK((a.samples - c.samples).norm() > 0.0);

  ARModel unstable;
  unstable.m = 1;
  unstable.n = 1;
  unstable.coeffs = {Matrix::Constant(1, 1, -1.1)};
  unstable.noise_cov = Matrix::Identity(1, 1);
  CHECK(companion_spectral_radius(unstable) > 1.0);
  CHECK_THROWS(simulate(unstable, 10, 1));
}

TEST_CASE("white simulation matches its covariance") {
  ARModel white;
  white.m = 2;
  white.n = 1;
  white.coeffs = {Matrix::Zero(2, 2)};
  white.noise_cov = Matrix::Identity(2, 2);
  const TimeSeries y = simulate(white, 20000, 23);
  const MatrixPoly rhat = covariance_lags(y, 1);
  CHECK((rhat.block(0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <=
        0.05);
  CHECK(rhat.block(1).cwiseAbs().maxCoeff() <= 0.05);
}

TEST_CASE("scalar autoregression has the expected autocorrelation") {
  ARModel model;
  model.m = 1;
  model.n = 1;
  model.coeffs = {Matrix::Constant(1, 1, -0.9)};
  model.noise_cov = Matrix::Identity(1, 1);
  const TimeSeries y = simulate(model, 100000, 29);
  const MatrixPoly rhat = covariance_lags(y, 1);
  const double rho = rhat.block(1)(0, 0) / rhat.block(0)(0, 0);
  CHECK(std::abs(rho - 0.9) <= 0.02);
}

}  // TEST_SUITE

}  // namespace
}  // namespace argraph
