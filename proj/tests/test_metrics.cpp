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

#include "argraph/armodel.hpp"
#include "argraph/metrics.hpp"
#include "test_util.hpp"

namespace argraph {
namespace {

using testutil::random_poly;

TEST_SUITE("metrics") {

TEST_CASE("relative errors vanish on exact recovery and scale out") {
  std::mt19937_64 rng(71);
  const MatrixPoly s = random_poly(3, 1, rng);
  const auto [e_same, e_sl_same] = rel_errors(s, nullptr, s, nullptr);
  CHECK(e_same == doctest::Approx(0.0));
  CHECK_FALSE(e_sl_same.has_value());

  const MatrixPoly doubled = 2.0 * s;
  const auto [e_doubled, ignored] = rel_errors(doubled, nullptr, s, nullptr);
  (void)ignored;
  CHECK(e_doubled == doctest::Approx(1.0));
}

TEST_CASE("relative errors match the brute-force sums") {
  std::mt19937_64 rng(73);
  const MatrixPoly s_true = random_poly(3, 2, rng);
  const MatrixPoly l_true = random_poly(3, 2, rng);
  const MatrixPoly s_hat = random_poly(3, 2, rng);
  const MatrixPoly l_hat = random_poly(3, 2, rng);
  const auto [e, e_sl] = rel_errors(s_hat, &l_hat, s_true, &l_true);
  REQUIRE(e_sl.has_value());

  double num_e = 0.0, num_sl = 0.0, den = 0.0;
  for (int k = 0; k <= 2; ++k) {
    num_e += ((s_hat.block(k) - l_hat.block(k)) -
              (s_true.block(k) - l_true.block(k)))
                 .squaredNorm();
    num_sl += (s_hat.block(k) - s_true.block(k)).squaredNorm() +
              (l_hat.block(k) - l_true.block(k)).squaredNorm();
    den += (s_true.block(k) - l_true.block(k)).squaredNorm();
  }
  CHECK(e == doctest::Approx(num_e / den).epsilon(1e-12));
  CHECK(*e_sl == doctest::Approx(num_sl / den).epsilon(1e-12));
}

TEST_CASE("degenerate truth is rejected") {
  MatrixPoly zero(2, 1);
  MatrixPoly hat(2, 1);
  hat.block(0) = Matrix::Identity(2, 2);
  CHECK_THROWS(rel_errors(hat, nullptr, zero, nullptr));
}

TEST_CASE("coherence of a diagonal spectrum vanishes off the diagonal") {
  MatrixPoly s(3, 1);
  s.block(0) = Matrix::Identity(3, 3) * 2.0;
  s.block(1) = Matrix::Identity(3, 3) * 0.5;
  const Matrix pc = partial_coherence(s, nullptr);
  for (int j = 0; j < 3; ++j) {
    for (int h = 0; h < 3; ++h) {
      if (j == h) {
        CHECK(pc(j, h) == doctest::Approx(1.0));
      } else {
        CHECK(pc(j, h) <= 1e-14);
      }
    }
  }
}

TEST_CASE("constant spectrum coherence has a closed form") {
  const double rho = 0.37;
  MatrixPoly s(2, 0);
  s.block(0) << 1.0, rho, rho, 1.0;
  const Matrix pc = partial_coherence(s, nullptr);
  CHECK(pc(1, 0) == doctest::Approx(rho).epsilon(1e-12));
}

TEST_CASE("coherence is invariant under diagonal rescaling") {
  std::mt19937_64 rng(79);
  const GroundTruth truth = random_sparse_inverse(4, 1, 0.4, 0.2, 79);
  const Matrix before = partial_coherence(truth.S, nullptr);

  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 2.0, 0.5, 3.0, 1.5;
  MatrixPoly scaled(4, 1);
  for (int k = 0; k <= 1; ++k) scaled.block(k) = d * truth.S.block(k) * d;
  const Matrix after = partial_coherence(scaled, nullptr);
  CHECK((before - after).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("thresholding recovers the exact pattern as the cut vanishes") {
  const GroundTruth truth = random_sparse_inverse(5, 1, 0.3, 0.2, 83);
  const Matrix pc = partial_coherence(truth.S, nullptr);
  const auto [e_sp, support] = support_error(pc, truth.support, 1e-9);
  CHECK(e_sp == doctest::Approx(0.0));
  CHECK(support == truth.support);
}

TEST_CASE("support error counting") {
  Matrix pc = Matrix::Zero(4, 4);
  pc(1, 0) = pc(0, 1) = 0.05;  // missed true edge
  pc(2, 0) = pc(0, 2) = 0.5;   // spurious edge
  const std::vector<std::pair<int, int>> truth = {{1, 0}};
  const auto [e_sp, support] = support_error(pc, truth, 0.1);
  CHECK(e_sp == doctest::Approx(2.0 / 6.0));
  REQUIRE(support.size() == 1);
  CHECK(support[0] == std::pair{2, 0});

  const auto [perfect, s2] = support_error(pc, {{2, 0}}, 0.1);
  (void)s2;
  CHECK(perfect == doctest::Approx(0.0));

  // Complement support: every pair misplaced.
  Matrix all = Matrix::Ones(3, 3);
  const auto [worst, s3] = support_error(Matrix::Zero(3, 3), {{1, 0}, {2, 0}, {2, 1}}, 0.1);
  (void)s3;
  CHECK(worst == doctest::Approx(1.0));
  const auto [worst2, s4] = support_error(all, {}, 0.1);
  (void)s4;
  CHECK(worst2 == doctest::Approx(1.0));
}

TEST_CASE("numerical rank of constructed spectra") {
  MatrixPoly zero(4, 1);
  CHECK(numerical_rank(zero, 0.1) == 0);

  std::mt19937_64 rng(89);
  Matrix f = testutil::random_matrix(8, 2, rng);
  BlockToeplitz h(4, 1);
  h.mat = f * f.transpose();
  const MatrixPoly l = adjoint_D(h);
  CHECK(numerical_rank(l, 0.1) == 2);
  CHECK(numerical_rank(l, 1.0) <= 1);
}

TEST_CASE("complexity formula") {
  // Printed denominator at the full scale.
  CHECK(complexity_c(2, 1, 30, 2) * 2265.0 ==
        doctest::Approx(0.5 * (2 + 30) + 2 * 2 + 1 * 30 * 3));
  // Diagonal-only support.
  CHECK(complexity_c(3, 0, 3, 1) == doctest::Approx(0.4));
  // Monotonicity in both arguments.
  CHECK(complexity_c(5, 1, 4, 1) > complexity_c(3, 1, 4, 1));
  CHECK(complexity_c(5, 2, 4, 1) > complexity_c(5, 1, 4, 1));
}

TEST_CASE("truth complexity uses the generator pattern") {
  const GroundTruth truth = random_latent_inverse(6, 1, 0.2, 2, 0.1, 97);
  const double c = complexity_of_truth(truth);
  const int s_count = 2 * static_cast<int>(truth.support.size()) + 6;
  const double expect = complexity_c(s_count, 2, 6, 1);
  CHECK(c == doctest::Approx(expect));
}

TEST_CASE("full report on a perfect sparse estimate") {
  const GroundTruth truth = random_sparse_inverse(4, 1, 0.4, 0.2, 101);
  const MetricReport report = evaluate_estimate(truth.S, nullptr, truth);
  CHECK(report.e == doctest::Approx(0.0));
  CHECK_FALSE(report.e_sl.has_value());
  CHECK(report.rank_hat == 0);

  // The report is self-consistent with the standalone metric pieces.
  const Matrix pc = partial_coherence(truth.S, nullptr);
  const auto [e_sp, support] =
      support_error(pc, truth.support, report.pc_threshold);
  CHECK(report.e_sp == doctest::Approx(e_sp));
  CHECK(report.support_hat == support);
  const int s_count = 2 * static_cast<int>(support.size()) + 4;
  CHECK(report.c == doctest::Approx(complexity_c(s_count, 0, 4, 1)));
}

}  // TEST_SUITE

}  // namespace
}  // namespace argraph
