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

#include <cstdint>
#include <random>

#include "argraph/armodel.hpp"
#include "argraph/poly.hpp"
#include "argraph/sparse_dual.hpp"
#include "argraph/tsdata.hpp"

namespace argraph::testutil {

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = normal(rng);
  }
  return a;
}

inline MatrixPoly random_poly(int m, int n, std::mt19937_64& rng) {
  MatrixPoly p(m, n);
  for (int k = 0; k <= n; ++k) p.block(k) = random_matrix(m, m, rng);
  Matrix sym = 0.5 * (p.block(0) + p.block(0).transpose());
  p.block(0) = sym;
  return p;
}

inline BlockToeplitz random_block_matrix(int m, int n, std::mt19937_64& rng) {
  BlockToeplitz x(m, n);
  const Matrix a = random_matrix(x.dim(), x.dim(), rng);
  x.mat = 0.5 * (a + a.transpose());
  return x;
}

// Sample lags of a short simulation from a random stable sparse model;
// T of the result is positive definite with overwhelming margin at these
// sizes, which every solver entry point requires.
inline MatrixPoly random_rhat(int m, int n, std::uint64_t seed,
                              int length = 400) {
  const GroundTruth truth =
      random_sparse_inverse(m, n, 0.3, 0.2, seed);
  const TimeSeries y = simulate(truth.ar, length, seed + 17);
  return covariance_lags(y, n);
}

inline WeightSet uniform_weights(int m, double gamma, double nn) {
  WeightSet w;
  w.gammas = Matrix::Constant(m, m, gamma);
  w.nn = nn;
  return w;
}

}  // namespace argraph::testutil
