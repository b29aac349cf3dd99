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

#include "argraph/ebayes.hpp"
#include "argraph/metrics.hpp"

namespace argraph {

// Regularization grid of the fixed-weight comparison estimator.  For the
// sparse form only gammas is used; the latent form pairs every gamma with a
// barrier weight gamma_l (Q = gamma_l I).
struct GridSpec {
  std::vector<double> gammas;
  std::vector<std::pair<double, double>> latent_pairs;
  double pc_threshold = 0.1;
  double sv_threshold = 0.1;

  bool latent() const { return !latent_pairs.empty(); }
  int size() const {
    return latent() ? static_cast<int>(latent_pairs.size())
                    : static_cast<int>(gammas.size());
  }
};

// One grid point of the score table.
struct BaselineScore {
  double gamma = 0.0;
  std::optional<double> gamma_l;
  double bic = 0.0;
  int support_size = 0;  // thresholded off-diagonal pairs
  int rank = 0;
  std::optional<double> e;  // filled by callers that know the truth
};

struct BaselineSelection {
  int best_index = -1;
  std::vector<BaselineScore> scores;
};

// Single fixed-weight solve: uniform off-diagonal weight gamma with the
// diagonal floored at 1e-8 gamma (the plain estimator leaves channels
// unpenalized), latent barrier Q = gamma_l I when gamma_l is given.
EstimateResult solve_fixed(const MatrixPoly& rhat, double nn, double gamma,
                           std::optional<double> gamma_l = {},
                           const SolverOptions& opts = {});

// Information criterion over fitted candidates:
//   bic = nn (-log det X_00 + <toeplitz(rhat), X>) + k log(nn),
// where k counts free parameters of the thresholded model, (s+m)/2 + s n
// + r m (n+1), with s and r read off the partial coherence and the
// singular-value cut of each candidate.  Returns the argmin and the table.
BaselineSelection rank_by_bic(const std::vector<EstimateResult>& fits,
                              const MatrixPoly& rhat, double nn,
                              const MetricOptions& thresholds = {});

// Smallest uniform gamma whose thresholded support is empty, bracketed by
// doubling and narrowed by bisection to 1% relative width.  Upper grid
// endpoint of the default grids.
double find_gamma_max(const MatrixPoly& rhat, double nn,
                      double pc_threshold = 0.1,
                      const SolverOptions& opts = {});

// points log-spaced values on [gamma_max 1e-3, gamma_max]; the latent grid
// uses round(sqrt(points))^2 points on the 2-D product of that range with
// itself (9 -> 3x3, 17 -> 4x4).
GridSpec make_grid(int points, const MatrixPoly& rhat, double nn, bool latent,
                   const MetricOptions& thresholds = {},
                   const SolverOptions& opts = {});

struct BaselineRun {
  GridSpec grid;
  std::vector<EstimateResult> fits;
  BaselineSelection selection;

  const EstimateResult& best() const {
    return fits[static_cast<std::size_t>(selection.best_index)];
  }
};

// Grid construction, per-point solves (parallel across workers when
// workers > 1) and BIC ranking in one call.
BaselineRun run_baseline(const MatrixPoly& rhat, double nn, int points,
                         bool latent, const MetricOptions& thresholds = {},
                         const SolverOptions& opts = {}, int workers = 1);

}  // namespace argraph
