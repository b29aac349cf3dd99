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
#include <optional>
#include <utility>
#include <vector>

#include "argraph/poly.hpp"
#include "argraph/tsdata.hpp"

namespace argraph {

// y(t) = -sum_k A_k y(t - k) + e(t), e ~ N(0, R).
struct ARModel {
  int m = 0;
  int n = 0;
  std::vector<Matrix> coeffs;  // A_1..A_n, each m x m
  Matrix noise_cov;            // R, m x m SPD
};

// Largest modulus among eigenvalues of the companion matrix of A_1..A_n;
// the recursion is stable iff this is < 1.  n = 0 returns 0.
double companion_spectral_radius(const ARModel& model);

// Synthetic model with known structure: S is the inverse-spectrum
// coefficient list, L the (optional) low-rank correction, H its positive
// semidefinite lift, support the generated off-diagonal pattern.
struct GroundTruth {
  MatrixPoly S;
  std::optional<MatrixPoly> L;
  std::optional<BlockToeplitz> H;  // L = adjoint_D(H), H = P M P^T psd
  std::vector<std::pair<int, int>> support;  // (j, h), 0-based, j > h
  int r = 0;                                 // rank of H
  ARModel ar;                                // exact AR form of (S - L)^{-1}
};

// Draws a sparse inverse spectrum: ceil(density * m(m-1)/2) unordered
// off-diagonal pairs active, entries uniform on [-0.3, 0.3], unit S_0
// diagonal, then diagonal loading grown geometrically until the spectrum
// clears `margin` on the evaluation grid.  Entries off the support are
// exactly zero in every coefficient.  Deterministic in seed.  with_ar=false
// skips the exact-lag AR derivation (cheaper when only the structure is
// needed); the draw itself is unaffected.
GroundTruth random_sparse_inverse(int m, int n, double density, double margin,
                                  std::uint64_t seed, bool with_ar = true);

// Sparse-plus-low-rank variant: H = beta F F^T with F standard normal of
// rank r, beta chosen by bisection as the largest value keeping
// grid_min_eig(S - L) >= margin.
GroundTruth random_latent_inverse(int m, int n, double density, int r,
                                  double margin, std::uint64_t seed,
                                  bool with_ar = true);

// Covariance lags of the process with inverse spectrum S - L: inverts the
// spectrum on a fine uniform grid (trapezoid rule, spectrally accurate for
// the smooth integrand) and reads off Fourier coefficients 0..count.
MatrixPoly exact_lags(const MatrixPoly& s_minus_l, int count,
                      int gridsize = 4096);

// Solves the normal equations on lags [R_0..R_n]: returns the AR
// coefficients and innovation covariance of the best linear predictor.
// Internally this is the trailing-block Schur complement of toeplitz(lags):
// W is the innovation covariance and the predictor solves stacked in `a`.
ARModel yule_walker(const MatrixPoly& lags);

// aR_e^{-1}a^T for the Yule-Walker solution of `lags`; the unregularized
// solver limit and the initializer for the reweighting loops.
BlockToeplitz yule_walker_concentration(const MatrixPoly& lags);

// Simulates N samples after a burn-in (default: 10 n ceil(1/(1-rho)) capped
// at 5000, rho the companion spectral radius).  Deterministic in seed.
// Throws when the model is unstable.
TimeSeries simulate(const ARModel& model, int length, std::uint64_t seed,
                    int burnin = -1);

}  // namespace argraph
