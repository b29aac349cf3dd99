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

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace argraph {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

// Default angular grid resolution for spectral scans.
inline constexpr int kSpectralGrid = 512;

// Coefficients [Y_0, ..., Y_n] of the m x m trigonometric matrix polynomial
//   Y(theta) = Y_0 + (1/2) sum_{k>=1} (Y_k e^{-i k theta} + Y_k^T e^{i k theta}).
// Y_0 is symmetric by convention; higher coefficients are unconstrained.
struct MatrixPoly {
  int m = 0;
  int n = 0;
  std::vector<Matrix> blocks;  // blocks.size() == n + 1, each m x m

  MatrixPoly() = default;
  MatrixPoly(int m_, int n_)
      : m(m_), n(n_), blocks(static_cast<std::size_t>(n_) + 1,
                             Matrix::Zero(m_, m_)) {}

  // Validates shapes and symmetrizes Y_0 (warning on stderr above 1e-8
  // relative asymmetry; hard error is reserved for shape mismatches).
  static MatrixPoly from_blocks(std::vector<Matrix> blocks);

  Matrix& block(int k) { return blocks[static_cast<std::size_t>(k)]; }
  const Matrix& block(int k) const {
    return blocks[static_cast<std::size_t>(k)];
  }

  void set_zero() {
    for (auto& b : blocks) b.setZero();
  }

  double squared_norm() const {
    double accum = 0.0;
    for (const auto& b : blocks) accum += b.squaredNorm();
    return accum;
  }
  double norm() const;

  MatrixPoly& operator+=(const MatrixPoly& other);
  MatrixPoly& operator-=(const MatrixPoly& other);
  MatrixPoly& operator*=(double scale);
};

MatrixPoly operator+(MatrixPoly lhs, const MatrixPoly& rhs);
MatrixPoly operator-(MatrixPoly lhs, const MatrixPoly& rhs);
MatrixPoly operator*(double scale, MatrixPoly poly);

// Trace inner product sum_k tr(A_k B_k^T) on coefficient lists.
double poly_dot(const MatrixPoly& a, const MatrixPoly& b);

// Symmetric m(n+1) x m(n+1) matrix carved into (n+1) x (n+1) blocks of size
// m x m.  Holds Toeplitz operator images as well as general symmetric
// matrices living in the same block layout (solver variables X and H).
struct BlockToeplitz {
  int m = 0;
  int n = 0;
  Matrix mat;

  BlockToeplitz() = default;
  BlockToeplitz(int m_, int n_)
      : m(m_), n(n_), mat(Matrix::Zero(m_ * (n_ + 1), m_ * (n_ + 1))) {}

  int dim() const { return m * (n + 1); }

  Eigen::Block<Matrix> block(int h, int j) {
    return mat.block(h * m, j * m, m, m);
  }
  Eigen::Block<const Matrix> block(int h, int j) const {
    return mat.block(h * m, j * m, m, m);
  }
};

// Uniform-grid samples of a matrix polynomial on the unit circle.  The grid
// covers one full period and contains both 0 and -pi (the latter coincides
// with +pi on the circle), so symmetric scans hit the band edges exactly.
struct SpectrumSamples {
  std::vector<double> grid;
  std::vector<ComplexMatrix> values;  // Hermitian at every grid point
};

// theta_g = -pi + 2 pi g / gridsize, g = 0..gridsize-1.  gridsize must be
// even and >= 2 so that theta = 0 is on the grid.
std::vector<double> spectral_grid(int gridsize);

// Block Toeplitz lift: block (h, j) equals Y_{j-h} for j >= h and Y_{h-j}^T
// otherwise.  The result is symmetric because Y_0 is.
BlockToeplitz toeplitz(const MatrixPoly& y);

// Adjoint of the Toeplitz lift under the trace inner products:
//   <toeplitz(Y), X> = <Y, adjoint_D(X)>  for all Y, symmetric X.
// Component k of the result is sum_h X_{h,h} for k = 0 and
// 2 sum_h X_{h,h+k} for k >= 1.
MatrixPoly adjoint_D(const BlockToeplitz& x);

// Pointwise evaluation Y(theta).  Hermitian by construction: only the upper
// triangle is computed and the lower triangle mirrored, which halves work
// and keeps the result exactly Hermitian in floating point.
ComplexMatrix eval_poly(const MatrixPoly& s, double theta);

// Samples eval_poly on the default symmetric grid.
SpectrumSamples sample_spectrum(const MatrixPoly& s,
                                int gridsize = kSpectralGrid);

// Uniform bound max over coefficients of entry (j, h) and its transpose
// partner: max{|(S_0)_{jh}|, max_k |(S_k)_{jh}|, max_k |(S_k)_{hj}|} with
// 0 <= h <= j < m.  For j == h this is max_k |(S_k)_{jj}|.
double group_maxnorm(const MatrixPoly& s, int j, int h);

// min over the grid of the smallest eigenvalue of Y(theta).
double grid_min_eig(const MatrixPoly& s, int gridsize = kSpectralGrid);

// Schur complement of the trailing block of a symmetric positive definite
// matrix in BlockToeplitz layout:
//   W = B_00 - B_01 B_11^{-1} B_10,   a = [I; -B_11^{-1} B_10],
// so that B a = [W; 0].  For n = 0 this degenerates to W = B, a = I.
struct SchurResult {
  Matrix w;  // m x m, positive definite
  Matrix a;  // m(n+1) x m
};

// Returns nullopt when B_11 or W fails its Cholesky factorization (B not
// positive definite); the solvers use this as the line-search feasibility
// signal.
std::optional<SchurResult> try_block_schur(const BlockToeplitz& b);

// Throwing wrapper around try_block_schur.
SchurResult block_schur(const BlockToeplitz& b);

// log det of a symmetric positive definite matrix via Cholesky; throws when
// the factorization fails.
double logdet_spd(const Matrix& a);

}  // namespace argraph
