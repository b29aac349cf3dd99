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

#include "argraph/poly.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

namespace argraph {

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

MatrixPoly MatrixPoly::from_blocks(std::vector<Matrix> blocks) {
  if (blocks.empty()) throw std::invalid_argument("from_blocks: no blocks");
  const int m = static_cast<int>(blocks.front().rows());
  for (const auto& b : blocks) {
    if (b.rows() != m || b.cols() != m)
      throw std::invalid_argument("from_blocks: blocks must be square m x m");
  }
  MatrixPoly out;
  out.m = m;
  out.n = static_cast<int>(blocks.size()) - 1;
  out.blocks = std::move(blocks);
  Matrix& y0 = out.blocks.front();
  const double asym = (y0 - y0.transpose()).norm();
  if (asym > 1e-8 * std::max(1.0, y0.norm())) {
    std::fprintf(stderr,
                 "argraph: symmetrizing constant coefficient with relative "
                 "asymmetry %.3e\n",
                 asym / std::max(1.0, y0.norm()));
  }
  y0 = ((y0 + y0.transpose()) * 0.5).eval();
  return out;
}

double MatrixPoly::norm() const { return std::sqrt(squared_norm()); }

MatrixPoly& MatrixPoly::operator+=(const MatrixPoly& other) {
  if (m != other.m || n != other.n)
    throw std::invalid_argument("MatrixPoly: shape mismatch");
  for (std::size_t k = 0; k < blocks.size(); ++k) blocks[k] += other.blocks[k];
  return *this;
}

MatrixPoly& MatrixPoly::operator-=(const MatrixPoly& other) {
  if (m != other.m || n != other.n)
    throw std::invalid_argument("MatrixPoly: shape mismatch");
  for (std::size_t k = 0; k < blocks.size(); ++k) blocks[k] -= other.blocks[k];
  return *this;
}

MatrixPoly& MatrixPoly::operator*=(double scale) {
  for (auto& b : blocks) b *= scale;
  return *this;
}

MatrixPoly operator+(MatrixPoly lhs, const MatrixPoly& rhs) {
  lhs += rhs;
  return lhs;
}

MatrixPoly operator-(MatrixPoly lhs, const MatrixPoly& rhs) {
  lhs -= rhs;
  return lhs;
}

MatrixPoly operator*(double scale, MatrixPoly poly) {
  poly *= scale;
  return poly;
}

double poly_dot(const MatrixPoly& a, const MatrixPoly& b) {
  if (a.m != b.m || a.n != b.n)
    throw std::invalid_argument("poly_dot: shape mismatch");
  double accum = 0.0;
  for (std::size_t k = 0; k < a.blocks.size(); ++k)
    accum += a.blocks[k].cwiseProduct(b.blocks[k]).sum();
  return accum;
}

std::vector<double> spectral_grid(int gridsize) {
  if (gridsize < 2 || gridsize % 2 != 0)
    throw std::invalid_argument("spectral_grid: gridsize must be even, >= 2");
  std::vector<double> grid(static_cast<std::size_t>(gridsize));
  for (int g = 0; g < gridsize; ++g)
    grid[static_cast<std::size_t>(g)] = -kPi + 2.0 * kPi * g / gridsize;
  return grid;
}

BlockToeplitz toeplitz(const MatrixPoly& y) {
  BlockToeplitz out(y.m, y.n);
  for (int h = 0; h <= y.n; ++h) {
    for (int j = 0; j <= y.n; ++j) {
      if (j >= h)
        out.block(h, j) = y.block(j - h);
      else
        out.block(h, j) = y.block(h - j).transpose();
    }
  }
  return out;
}

MatrixPoly adjoint_D(const BlockToeplitz& x) {
  MatrixPoly out(x.m, x.n);
  for (int k = 0; k <= x.n; ++k) {
    Matrix accum = Matrix::Zero(x.m, x.m);
    for (int h = 0; h + k <= x.n; ++h) accum += x.block(h, h + k);
    out.block(k) = (k == 0) ? accum : (2.0 * accum).eval();
  }
  // The k = 0 component inherits symmetry from X; enforce it exactly.
  out.block(0) = ((out.block(0) + out.block(0).transpose()) * 0.5).eval();
  return out;
}

ComplexMatrix eval_poly(const MatrixPoly& s, double theta) {
  const int m = s.m;
  ComplexMatrix out(m, m);
  for (int row = 0; row < m; ++row) {
    // Real diagonal: (S_0)_{jj} + sum_k (S_k)_{jj} cos(k theta).
    double diag = s.block(0)(row, row);
    for (int k = 1; k <= s.n; ++k)
      diag += s.block(k)(row, row) * std::cos(k * theta);
    out(row, row) = diag;
    for (int col = row + 1; col < m; ++col) {
      std::complex<double> entry(s.block(0)(row, col), 0.0);
      for (int k = 1; k <= s.n; ++k) {
        const std::complex<double> phase(std::cos(k * theta),
                                         -std::sin(k * theta));
        entry += 0.5 * (s.block(k)(row, col) * phase +
                        s.block(k)(col, row) * std::conj(phase));
      }
      out(row, col) = entry;
      out(col, row) = std::conj(entry);
    }
  }
  return out;
}

SpectrumSamples sample_spectrum(const MatrixPoly& s, int gridsize) {
  SpectrumSamples out;
  out.grid = spectral_grid(gridsize);
  out.values.reserve(out.grid.size());
  for (double theta : out.grid) out.values.push_back(eval_poly(s, theta));
  return out;
}

double group_maxnorm(const MatrixPoly& s, int j, int h) {
  if (h < 0 || j < h || j >= s.m)
    throw std::out_of_range("group_maxnorm: need 0 <= h <= j < m");
  double best = std::abs(s.block(0)(j, h));
  for (int k = 1; k <= s.n; ++k) {
    best = std::max(best, std::abs(s.block(k)(j, h)));
    best = std::max(best, std::abs(s.block(k)(h, j)));
  }
  return best;
}

double grid_min_eig(const MatrixPoly& s, int gridsize) {
  if (gridsize < 2 * (s.n + 1))
    throw std::invalid_argument("grid_min_eig: gridsize too coarse");
  double lo = std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig;
  for (double theta : spectral_grid(gridsize)) {
    eig.compute(eval_poly(s, theta), Eigen::EigenvaluesOnly);
    lo = std::min(lo, eig.eigenvalues().minCoeff());
  }
  return lo;
}

std::optional<SchurResult> try_block_schur(const BlockToeplitz& b) {
  const int m = b.m;
  const int n = b.n;
  SchurResult out;
  if (n == 0) {
    out.w = ((b.mat + b.mat.transpose()) * 0.5).eval();
    out.a = Matrix::Identity(m, m);
  } else {
    const int tail = m * n;
    const Matrix b11 = b.mat.bottomRightCorner(tail, tail);
    const Matrix b10 = b.mat.bottomLeftCorner(tail, m);
    Eigen::LLT<Matrix> llt(b11);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Matrix e = llt.solve(b10);  // B_11^{-1} B_10
    Matrix w = b.mat.topLeftCorner(m, m) - b10.transpose() * e;
    w = ((w + w.transpose()) * 0.5).eval();
    out.w = std::move(w);
    out.a = Matrix(m * (n + 1), m);
    out.a.topRows(m) = Matrix::Identity(m, m);
    out.a.bottomRows(tail) = -e;
  }
  // W must be positive definite for the result to define a feasible point.
  Eigen::LLT<Matrix> llt_w(out.w);
  if (llt_w.info() != Eigen::Success) return std::nullopt;
  return out;
}

SchurResult block_schur(const BlockToeplitz& b) {
  auto result = try_block_schur(b);
  if (!result)
    throw std::runtime_error("block_schur: matrix is not positive definite");
  return *result;
}

double logdet_spd(const Matrix& a) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("logdet_spd: matrix is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace argraph
