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

#include "argraph/baseline.hpp"

#include <cmath>
#include <stdexcept>

#include "argraph/parallel.hpp"

namespace argraph {

namespace {

constexpr double kDiagonalFloor = 1e-8;

WeightSet uniform_weights(int m, double nn, double gamma,
                          const std::optional<double>& gamma_l) {
  WeightSet weights;
  weights.nn = nn;
  weights.gammas = Matrix::Constant(m, m, gamma);
  weights.gammas.diagonal().setConstant(kDiagonalFloor * gamma);
  if (gamma_l) weights.q = *gamma_l * Matrix::Identity(m, m);
  return weights;
}

int thresholded_support(const EstimateResult& fit, double pc_threshold,
                        int gridsize) {
  const MatrixPoly* l = fit.l ? &*fit.l : nullptr;
  const Matrix pc = partial_coherence(fit.s, l, gridsize);
  int count = 0;
  for (int j = 1; j < fit.m; ++j) {
    for (int h = 0; h < j; ++h) {
      if (pc(j, h) > pc_threshold) ++count;
    }
  }
  return count;
}

}  // namespace

EstimateResult solve_fixed(const MatrixPoly& rhat, double nn, double gamma,
                           std::optional<double> gamma_l,
                           const SolverOptions& opts) {
  if (gamma <= 0.0) {
    throw std::invalid_argument("solve_fixed: gamma must be positive");
  }
  if (gamma_l && *gamma_l <= 0.0) {
    throw std::invalid_argument("solve_fixed: gamma_l must be positive");
  }
  const WeightSet weights = uniform_weights(rhat.m, nn, gamma, gamma_l);

  EstimateResult out;
  out.m = rhat.m;
  out.n = rhat.n;
  out.nn = nn;
  out.outer_iterations = 1;
  out.final_weights = weights;
  if (gamma_l) {
    const LatentSolution sol = solve_latent_dual(rhat, weights, opts);
    out.mode = "latent";
    out.x = sol.x;
    out.h = sol.h;
    BlockToeplitz total = sol.x;
    total.mat += sol.h.mat;
    out.s = adjoint_D(total);
    out.l = adjoint_D(sol.h);
    out.z = sol.z;
    out.gap = sol.gap;
    out.dual_value = sol.dual_value;
    out.primal_value = sol.primal_value;
    out.inner_iterations = sol.inner_iterations;
    out.converged = sol.converged;
  } else {
    const SparseSolution sol = solve_sparse_dual(rhat, weights, opts);
    out.mode = "sparse";
    out.x = sol.x;
    out.s = adjoint_D(sol.x);
    out.z = sol.z;
    out.gap = sol.gap;
    out.dual_value = sol.dual_value;
    out.primal_value = sol.primal_value;
    out.inner_iterations = sol.iterations;
    out.converged = sol.converged;
  }
  return out;
}

BaselineSelection rank_by_bic(const std::vector<EstimateResult>& fits,
                              const MatrixPoly& rhat, double nn,
                              const MetricOptions& thresholds) {
  if (fits.empty()) {
    throw std::invalid_argument("rank_by_bic: no candidates");
  }
  const BlockToeplitz t_rhat = toeplitz(rhat);
  BaselineSelection selection;
  selection.scores.reserve(fits.size());
  double best = 0.0;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const EstimateResult& fit = fits[i];
    const int m = fit.m;
    const int n = fit.n;
    const Matrix x00 = fit.x.block(0, 0);
    const double likelihood =
        -logdet_spd(x00) + t_rhat.mat.cwiseProduct(fit.x.mat).sum();

    BaselineScore score;
    score.gamma = m > 1 ? fit.final_weights.gammas(1, 0)
                        : fit.final_weights.gammas(0, 0);
    if (fit.final_weights.q) score.gamma_l = (*fit.final_weights.q)(0, 0);
    score.support_size =
        thresholded_support(fit, thresholds.pc_threshold, thresholds.gridsize);
    score.rank = fit.l ? numerical_rank(*fit.l, thresholds.sv_threshold,
                                        thresholds.gridsize)
                       : 0;
    const int s_count = 2 * score.support_size + m;
    const double k_hat = 0.5 * (s_count + m) +
                         static_cast<double>(s_count) * n +
                         static_cast<double>(score.rank) * m * (n + 1);
    score.bic = nn * likelihood + k_hat * std::log(nn);
    if (selection.best_index < 0 || score.bic < best) {
      best = score.bic;
      selection.best_index = static_cast<int>(i);
    }
    selection.scores.push_back(score);
  }
  return selection;
}

double find_gamma_max(const MatrixPoly& rhat, double nn, double pc_threshold,
                      const SolverOptions& opts) {
  MetricOptions thresholds;
  thresholds.pc_threshold = pc_threshold;
  const auto support_empty = [&](double gamma) {
    const EstimateResult fit = solve_fixed(rhat, nn, gamma, {}, opts);
    return thresholded_support(fit, pc_threshold, thresholds.gridsize) == 0;
  };

  double hi = 1.0;
  int guard = 0;
  while (!support_empty(hi)) {
    hi *= 2.0;
    if (++guard > 60) return hi;  // degenerate data; give up gracefully
  }
  double lo = hi * 0.5;
  guard = 0;
  while (lo > 1e-8 && support_empty(lo)) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 60) break;
  }
  // invariant: support empty at hi, nonempty at lo (or lo hit the floor)
  while (hi / lo > 1.01) {
    const double mid = std::sqrt(lo * hi);
    if (support_empty(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

GridSpec make_grid(int points, const MatrixPoly& rhat, double nn, bool latent,
                   const MetricOptions& thresholds,
                   const SolverOptions& opts) {
  if (points < 1) {
    throw std::invalid_argument("make_grid: points must be >= 1");
  }
  const double gamma_max =
      find_gamma_max(rhat, nn, thresholds.pc_threshold, opts);
  const double gamma_min = gamma_max * 1e-3;

  GridSpec grid;
  grid.pc_threshold = thresholds.pc_threshold;
  grid.sv_threshold = thresholds.sv_threshold;
  const auto log_space = [&](int count) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
      values.push_back(gamma_max);
      return values;
    }
    const double ratio = std::log(gamma_max / gamma_min);
    for (int i = 0; i < count; ++i) {
      values.push_back(gamma_min * std::exp(ratio * i / (count - 1)));
    }
    return values;
  };

  if (!latent) {
    grid.gammas = log_space(points);
    return grid;
  }
  const int side = static_cast<int>(std::lround(std::sqrt(points)));
  const std::vector<double> axis = log_space(side < 1 ? 1 : side);
  for (const double gamma : axis) {
    for (const double gamma_l : axis) {
      grid.latent_pairs.emplace_back(gamma, gamma_l);
    }
  }
  return grid;
}

BaselineRun run_baseline(const MatrixPoly& rhat, double nn, int points,
                         bool latent, const MetricOptions& thresholds,
                         const SolverOptions& opts, int workers) {
  BaselineRun run;
  run.grid = make_grid(points, rhat, nn, latent, thresholds, opts);
  run.fits.resize(static_cast<std::size_t>(run.grid.size()));
  parallel_for(run.grid.size(), workers, [&](int i) {
    if (latent) {
      const auto& [gamma, gamma_l] =
          run.grid.latent_pairs[static_cast<std::size_t>(i)];
      run.fits[static_cast<std::size_t>(i)] =
          solve_fixed(rhat, nn, gamma, gamma_l, opts);
    } else {
      run.fits[static_cast<std::size_t>(i)] = solve_fixed(
          rhat, nn, run.grid.gammas[static_cast<std::size_t>(i)], {}, opts);
    }
  });
  run.selection = rank_by_bic(run.fits, rhat, nn, thresholds);
  return run;
}

}  // namespace argraph
