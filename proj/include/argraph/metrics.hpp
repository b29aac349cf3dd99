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

#include <optional>
#include <utility>
#include <vector>

#include "argraph/armodel.hpp"
#include "argraph/poly.hpp"

namespace argraph {

struct MetricOptions {
  double pc_threshold = 0.1;  // partial-coherence support cut
  double sv_threshold = 0.1;  // normalized singular-value rank cut
  int gridsize = kSpectralGrid;
};

struct MetricReport {
  double e = 0.0;
  std::optional<double> e_sl;
  double e_sp = 0.0;
  double c = 0.0;
  std::vector<std::pair<int, int>> support_hat;  // 0-based, j > h, sorted
  int rank_hat = 0;
  double pc_threshold = 0.0;
  double sv_threshold = 0.0;
};

// Relative squared errors.  Null pointers stand for an identically zero
// low-rank part; e_sl is reported whenever either side carries one.
//   e    = |(S_hat - L_hat) - (S - L)|^2_F / |S - L|^2_F
//   e_sl = (|S_hat - S|^2_F + |L_hat - L|^2_F) / |S - L|^2_F
// Throws on a zero-norm truth.
std::pair<double, std::optional<double>> rel_errors(const MatrixPoly& s_hat,
                                                    const MatrixPoly* l_hat,
                                                    const MatrixPoly& s_true,
                                                    const MatrixPoly* l_true);

// PC(j, h) = max over the grid of |G_jh| / sqrt(G_jj G_hh) where G(theta)
// evaluates s_hat - l_hat (the inverse spectrum of the estimate).  Diagonal
// pinned to 1.  Throws when some G_jj is not strictly positive on the grid.
Matrix partial_coherence(const MatrixPoly& s_hat, const MatrixPoly* l_hat,
                         int gridsize = kSpectralGrid);

// Thresholded support and the misplacement fraction
//   e_sp = (false positives + false negatives) / (m (m-1) / 2).
// true_support holds 0-based pairs with j > h; the returned support is
// sorted the same way.
std::pair<double, std::vector<std::pair<int, int>>> support_error(
    const Matrix& pc, const std::vector<std::pair<int, int>>& true_support,
    double threshold);

// Rank readout of a low-rank spectral part.  The i-th singular value curve
// of the grid samples of l_hat is flattened by its maximum over theta; the
// count of flattened values above threshold times the largest one is the
// rank.  An identically zero input gives 0.
int numerical_rank(const MatrixPoly& l_hat, double threshold,
                   int gridsize = kSpectralGrid);

// Parameter-count ratio of the estimated model against a full AR model:
//   C = ((s + m)/2 + s n + r m (n+1)) / (m (m+1)/2 + m^2 n),
// with s counting nonnull support entries of the full matrix, diagonal
// included (so s = 2 * pairs + m for an off-diagonal pair set).
double complexity_c(int s_count, int rank, int m, int n);

// Complexity of a generated model, using its exact support and rank.
double complexity_of_truth(const GroundTruth& truth);

// Full report for an estimate against the generating model.  l_hat may be
// null for sparse-only estimates (rank 0).
MetricReport evaluate_estimate(const MatrixPoly& s_hat,
                               const MatrixPoly* l_hat,
                               const GroundTruth& truth,
                               const MetricOptions& opts = {});

}  // namespace argraph
