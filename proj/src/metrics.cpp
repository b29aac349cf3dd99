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

#include "argraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace argraph {

namespace {

double squared_diff(const MatrixPoly& a, const MatrixPoly* b) {
  double total = 0.0;
  for (int k = 0; k <= a.n; ++k) {
    total += b ? (a.block(k) - b->block(k)).squaredNorm()
               : a.block(k).squaredNorm();
  }
  return total;
}

MatrixPoly subtract_optional(const MatrixPoly& s, const MatrixPoly* l) {
  MatrixPoly out = s;
  if (l) out -= *l;
  return out;
}

}  // namespace

std::pair<double, std::optional<double>> rel_errors(const MatrixPoly& s_hat,
                                                    const MatrixPoly* l_hat,
                                                    const MatrixPoly& s_true,
                                                    const MatrixPoly* l_true) {
  if (s_hat.m != s_true.m || s_hat.n != s_true.n) {
    throw std::invalid_argument("rel_errors: estimate and truth shapes differ");
  }
  const MatrixPoly inv_hat = subtract_optional(s_hat, l_hat);
  const MatrixPoly inv_true = subtract_optional(s_true, l_true);
  const double denom = inv_true.squared_norm();
  if (denom <= 0.0) {
    throw std::invalid_argument("rel_errors: degenerate truth (zero norm)");
  }
  const double e = (inv_hat - inv_true).squared_norm() / denom;
  std::optional<double> e_sl;
  if (l_hat || l_true) {
    double parts = squared_diff(s_hat, &s_true);
    if (l_hat) {
      parts += squared_diff(*l_hat, l_true);
    } else {
      parts += l_true->squared_norm();
    }
    e_sl = parts / denom;
  }
  return {e, e_sl};
}

Matrix partial_coherence(const MatrixPoly& s_hat, const MatrixPoly* l_hat,
                         int gridsize) {
  const MatrixPoly inv = subtract_optional(s_hat, l_hat);
  const int m = inv.m;
  Matrix pc = Matrix::Zero(m, m);
  for (const double theta : spectral_grid(gridsize)) {
    const ComplexMatrix g = eval_poly(inv, theta);
    for (int j = 0; j < m; ++j) {
      if (g(j, j).real() <= 0.0) {
        throw std::runtime_error(
            "partial_coherence: inverse spectrum is not positive on the grid");
      }
    }
    for (int j = 1; j < m; ++j) {
      for (int h = 0; h < j; ++h) {
        const double value =
            std::abs(g(j, h)) / std::sqrt(g(j, j).real() * g(h, h).real());
        if (value > pc(j, h)) pc(j, h) = value;
      }
    }
  }
  for (int j = 0; j < m; ++j) pc(j, j) = 1.0;
  for (int j = 1; j < m; ++j) {
    for (int h = 0; h < j; ++h) pc(h, j) = pc(j, h);
  }
  return pc;
}

std::pair<double, std::vector<std::pair<int, int>>> support_error(
    const Matrix& pc, const std::vector<std::pair<int, int>>& true_support,
    double threshold) {
  const int m = static_cast<int>(pc.rows());
  std::vector<std::pair<int, int>> support_hat;
  for (int j = 1; j < m; ++j) {
    for (int h = 0; h < j; ++h) {
      if (pc(j, h) > threshold) support_hat.emplace_back(j, h);
    }
  }
  const std::set<std::pair<int, int>> truth(true_support.begin(),
                                            true_support.end());
  const std::set<std::pair<int, int>> hat(support_hat.begin(),
                                          support_hat.end());
  int misplaced = 0;
  for (const auto& p : hat) {
    if (truth.count(p) == 0) ++misplaced;  // false positive
  }
  for (const auto& p : truth) {
    if (hat.count(p) == 0) ++misplaced;  // false negative
  }
  const double pairs = 0.5 * m * (m - 1);
  return {pairs > 0.0 ? misplaced / pairs : 0.0, support_hat};
}

int numerical_rank(const MatrixPoly& l_hat, double threshold, int gridsize) {
  const int m = l_hat.m;
  Vector flattened = Vector::Zero(m);
  for (const double theta : spectral_grid(gridsize)) {
    const ComplexMatrix g = eval_poly(l_hat, theta);
    const Eigen::JacobiSVD<ComplexMatrix> svd(g);
    const Vector sv = svd.singularValues();
    for (int i = 0; i < m; ++i) {
      if (sv(i) > flattened(i)) flattened(i) = sv(i);
    }
  }
  const double top = flattened(0);
  if (top <= 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < m; ++i) {
    if (flattened(i) > threshold * top) ++rank;
  }
  return rank;
}

double complexity_c(int s_count, int rank, int m, int n) {
  const double numer =
      0.5 * (s_count + m) + static_cast<double>(s_count) * n +
      static_cast<double>(rank) * m * (n + 1);
  const double denom = 0.5 * m * (m + 1) + static_cast<double>(m) * m * n;
  return numer / denom;
}

double complexity_of_truth(const GroundTruth& truth) {
  const int s_count = 2 * static_cast<int>(truth.support.size()) + truth.S.m;
  return complexity_c(s_count, truth.r, truth.S.m, truth.S.n);
}

MetricReport evaluate_estimate(const MatrixPoly& s_hat,
                               const MatrixPoly* l_hat,
                               const GroundTruth& truth,
                               const MetricOptions& opts) {
  MetricReport report;
  report.pc_threshold = opts.pc_threshold;
  report.sv_threshold = opts.sv_threshold;

  const MatrixPoly* l_true = truth.L ? &*truth.L : nullptr;
  const auto [e, e_sl] = rel_errors(s_hat, l_hat, truth.S, l_true);
  report.e = e;
  report.e_sl = e_sl;

  const Matrix pc = partial_coherence(s_hat, l_hat, opts.gridsize);
  auto [e_sp, support_hat] =
      support_error(pc, truth.support, opts.pc_threshold);
  report.e_sp = e_sp;
  report.support_hat = std::move(support_hat);

  report.rank_hat =
      l_hat ? numerical_rank(*l_hat, opts.sv_threshold, opts.gridsize) : 0;
  const int s_count =
      2 * static_cast<int>(report.support_hat.size()) + truth.S.m;
  report.c = complexity_c(s_count, report.rank_hat, truth.S.m, truth.S.n);
  return report;
}

}  // namespace argraph
