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
#include <complex>
#include <random>

#include "doctest.h"

#include "argraph/poly.hpp"
#include "test_util.hpp"

namespace argraph {
namespace {

using testutil::random_block_matrix;
using testutil::random_matrix;
using testutil::random_poly;

// Delta(theta) = [I, e^{i theta} I, ..., e^{i n theta} I], m x m(n+1).
ComplexMatrix delta_stack(int m, int n, double theta) {
  ComplexMatrix d = ComplexMatrix::Zero(m, m * (n + 1));
  for (int k = 0; k <= n; ++k) {
    const std::complex<double> phase =
        std::exp(std::complex<double>(0.0, k * theta));
    d.block(0, k * m, m, m) =
        phase * ComplexMatrix::Identity(m, m);
  }
  return d;
}

TEST_SUITE("poly") {

TEST_CASE("toeplitz scalar examples") {
  MatrixPoly y(1, 1);
  y.block(0)(0, 0) = 1.0;
  y.block(1)(0, 0) = 0.0;
  CHECK(toeplitz(y).mat.isApprox(Matrix::Identity(2, 2), 1e-15));

  y.block(0)(0, 0) = 2.0;
  y.block(1)(0, 0) = 1.0;
  Matrix expect(2, 2);
  expect << 2.0, 1.0, 1.0, 2.0;
  CHECK(toeplitz(y).mat.isApprox(expect, 1e-15));
}

TEST_CASE("toeplitz of the identity coefficients is the identity") {
  for (const auto& [m, n] : {std::pair{3, 2}, std::pair{4, 1}}) {
    MatrixPoly y(m, n);
    y.block(0) = Matrix::Identity(m, m);
    const BlockToeplitz t = toeplitz(y);
    CHECK(t.mat.isApprox(Matrix::Identity(t.dim(), t.dim()), 1e-15));
  }
}

TEST_CASE("toeplitz block layout and symmetry") {
  std::mt19937_64 rng(7);
  const MatrixPoly y = random_poly(3, 2, rng);
  const BlockToeplitz t = toeplitz(y);
  CHECK((t.mat - t.mat.transpose()).norm() == doctest::Approx(0.0));
  for (int j = 0; j <= 2; ++j) {
    for (int h = 0; h <= j; ++h) {
      CHECK((t.block(h, j) - y.block(j - h)).norm() ==
            doctest::Approx(0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("adjoint examples") {
  BlockToeplitz x(1, 1);
  x.mat << 1.0, 2.0, 2.0, 5.0;
  const MatrixPoly d = adjoint_D(x);
  CHECK(d.block(0)(0, 0) == doctest::Approx(6.0));
  CHECK(d.block(1)(0, 0) == doctest::Approx(4.0));

  BlockToeplitz id(3, 2);
  id.mat = Matrix::Identity(9, 9);
  const MatrixPoly di = adjoint_D(id);
  CHECK(di.block(0).isApprox(3.0 * Matrix::Identity(3, 3), 1e-15));
  CHECK(di.block(1).norm() == doctest::Approx(0.0));
  CHECK(di.block(2).norm() == doctest::Approx(0.0));
}

TEST_CASE("pairing identity between the lift and its adjoint") {
  std::mt19937_64 rng(11);
  for (const auto& [m, n] :
       {std::pair{1, 1}, std::pair{3, 2}, std::pair{5, 1}}) {
    for (int rep = 0; rep < 100; ++rep) {
      const MatrixPoly y = random_poly(m, n, rng);
      const BlockToeplitz x = random_block_matrix(m, n, rng);
      const double lhs = toeplitz(y).mat.cwiseProduct(x.mat).sum();
      const double rhs = poly_dot(y, adjoint_D(x));
      CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("adjoint of the lift scales coefficients by block counts") {
  std::mt19937_64 rng(13);
  const int m = 3, n = 2;
  const MatrixPoly y = random_poly(m, n, rng);
  const MatrixPoly dty = adjoint_D(toeplitz(y));
  CHECK((dty.block(0) - (n + 1) * y.block(0)).norm() <= 1e-12);
  for (int k = 1; k <= n; ++k) {
    CHECK((dty.block(k) - 2.0 * (n + 1 - k) * y.block(k)).norm() <= 1e-12);
  }
}

TEST_CASE("eval examples") {
  MatrixPoly s(1, 1);
  s.block(0)(0, 0) = 2.0;
  s.block(1)(0, 0) = 1.0;
  CHECK(eval_poly(s, 0.0)(0, 0).real() == doctest::Approx(3.0));
  CHECK(eval_poly(s, M_PI)(0, 0).real() == doctest::Approx(1.0));

  MatrixPoly ident(3, 2);
  ident.block(0) = Matrix::Identity(3, 3);
  CHECK(eval_poly(ident, 1.234)
            .isApprox(ComplexMatrix::Identity(3, 3), 1e-14));
}

TEST_CASE("eval at opposite angles is the complex conjugate") {
  // Real coefficients give Y(-theta) = conj(Y(theta)), which equals the
  // transpose because every value is Hermitian.
  std::mt19937_64 rng(17);
  const MatrixPoly s = random_poly(3, 2, rng);
  for (const double theta : {0.3, 1.1, 2.7}) {
    const ComplexMatrix a = eval_poly(s, theta);
    const ComplexMatrix b = eval_poly(s, -theta);
    CHECK((b - a.conjugate()).norm() <= 1e-12);
    CHECK((b - a.transpose()).norm() <= 1e-12);
    CHECK((a - a.adjoint()).norm() <= 1e-12);  // Hermitian
  }
}

TEST_CASE("eval of the adjoint image matches the congruence form") {
  std::mt19937_64 rng(19);
  for (const auto& [m, n] : {std::pair{2, 1}, std::pair{3, 2}}) {
    const BlockToeplitz x = random_block_matrix(m, n, rng);
    const MatrixPoly s = adjoint_D(x);
    for (const double theta : {0.0, 0.5, 1.9, M_PI}) {
      const ComplexMatrix d = delta_stack(m, n, theta);
      const ComplexMatrix direct = d * x.mat * d.adjoint();
      CHECK((eval_poly(s, theta) - direct).norm() <= 1e-10);
    }
  }
}

TEST_CASE("group maximum norm") {
  MatrixPoly zero(2, 1);
  CHECK(group_maxnorm(zero, 1, 0) == 0.0);

  MatrixPoly s(2, 1);
  s.block(0) << 1.0, 0.3, 0.3, 2.0;
  s.block(1) << 0.0, 0.5, -0.2, 0.0;
  CHECK(group_maxnorm(s, 1, 0) == doctest::Approx(0.5));
  CHECK(group_maxnorm(s, 0, 0) == doctest::Approx(1.0));
  CHECK(group_maxnorm(s, 1, 1) == doctest::Approx(2.0));

  MatrixPoly diag(3, 1);
  diag.block(0) = Matrix::Identity(3, 3);
  diag.block(1) = 2.0 * Matrix::Identity(3, 3);
  CHECK(group_maxnorm(diag, 2, 1) == 0.0);
  CHECK(group_maxnorm(diag, 1, 1) == doctest::Approx(2.0));
}

TEST_CASE("grid minimum eigenvalue") {
  MatrixPoly ident(2, 1);
  ident.block(0) = Matrix::Identity(2, 2);
  CHECK(grid_min_eig(ident) == doctest::Approx(1.0));

  MatrixPoly s(1, 1);
  s.block(0)(0, 0) = 2.0;
  s.block(1)(0, 0) = 1.0;
  // theta = pi is on the default grid, so the minimum 2 + cos(pi) = 1 is
  // attained exactly.
  CHECK(grid_min_eig(s) == doctest::Approx(1.0));

  MatrixPoly indef(2, 1);
  indef.block(0) << 1.0, 0.0, 0.0, -1.0;
  CHECK(grid_min_eig(indef) == doctest::Approx(-1.0));
}

TEST_CASE("block schur examples") {
  BlockToeplitz ident(2, 1);
  ident.mat = Matrix::Identity(4, 4);
  const SchurResult ri = block_schur(ident);
  CHECK(ri.w.isApprox(Matrix::Identity(2, 2), 1e-14));
  CHECK(ri.a.topRows(2).isApprox(Matrix::Identity(2, 2), 1e-14));
  CHECK(ri.a.bottomRows(2).norm() == doctest::Approx(0.0));

  BlockToeplitz b(1, 1);
  b.mat << 2.0, 1.0, 1.0, 2.0;
  const SchurResult r = block_schur(b);
  CHECK(r.w(0, 0) == doctest::Approx(1.5));
  CHECK(r.a(0, 0) == doctest::Approx(1.0));
  CHECK(r.a(1, 0) == doctest::Approx(-0.5));
}

TEST_CASE("schur determinant identity and order-zero case") {
  std::mt19937_64 rng(23);
  const int m = 3, n = 2;
  BlockToeplitz b(m, n);
  const Matrix g = random_matrix(b.dim(), b.dim(), rng);
  b.mat = g * g.transpose() + 0.5 * Matrix::Identity(b.dim(), b.dim());
  const SchurResult r = block_schur(b);
  const int tail = m * n;
  const Matrix b11 = b.mat.bottomRightCorner(tail, tail);
  CHECK(std::abs(logdet_spd(r.w) - (logdet_spd(b.mat) - logdet_spd(b11))) <=
        1e-10);

  BlockToeplitz flat(2, 0);
  flat.mat << 3.0, 1.0, 1.0, 2.0;
  const SchurResult rf = block_schur(flat);
  CHECK(rf.w.isApprox(flat.mat, 1e-15));
  CHECK(rf.a.isApprox(Matrix::Identity(2, 2), 1e-15));
}

TEST_CASE("schur consistency of the recovered candidate") {
  std::mt19937_64 rng(29);
  const int m = 2, n = 2;
  BlockToeplitz b(m, n);
  const Matrix g = random_matrix(b.dim(), b.dim(), rng);
  b.mat = g * g.transpose() + Matrix::Identity(b.dim(), b.dim());
  const SchurResult r = block_schur(b);
  const Matrix x =
      r.a * r.w.llt().solve(r.a.transpose());
  CHECK((x.topLeftCorner(m, m) -
         r.w.llt().solve(Matrix::Identity(m, m)))
            .norm() <= 1e-8);
  Matrix blk = Matrix::Zero(b.dim(), b.dim());
  blk.topLeftCorner(m, m) = r.w;
  CHECK(((b.mat - blk) * x).norm() <= 1e-8 * b.mat.norm());
}

TEST_CASE("schur failure reports infeasibility") {
  BlockToeplitz bad(1, 1);
  bad.mat << 1.0, 2.0, 2.0, -3.0;  // trailing block negative definite
  CHECK_FALSE(try_block_schur(bad).has_value());
  CHECK_THROWS(block_schur(bad));
}

TEST_CASE("coefficient container shape checks") {
  std::vector<Matrix> blocks;
  blocks.push_back(Matrix::Identity(2, 2));
  blocks.push_back(Matrix::Zero(3, 3));  // mismatched block size
  CHECK_THROWS(MatrixPoly::from_blocks(blocks));
  CHECK_THROWS(MatrixPoly::from_blocks({}));
}

TEST_CASE("arithmetic and pairing") {
  std::mt19937_64 rng(31);
  const MatrixPoly a = random_poly(2, 1, rng);
  const MatrixPoly b = random_poly(2, 1, rng);
  MatrixPoly c = a;
  c += b;
  c -= a;
  for (int k = 0; k <= 1; ++k) {
    CHECK((c.block(k) - b.block(k)).norm() <= 1e-14);
  }
  const MatrixPoly scaled = 2.0 * a;
  CHECK(poly_dot(scaled, b) == doctest::Approx(2.0 * poly_dot(a, b)));
  CHECK(a.squared_norm() == doctest::Approx(poly_dot(a, a)));
}

}  // TEST_SUITE

}  // namespace
}  // namespace argraph
