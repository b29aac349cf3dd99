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

#include "argraph/armodel.hpp"

#include <algorithm>
#include <cmath>

#include "argraph/rng.hpp"

namespace argraph {

namespace {

// Stream ids for the generator sub-draws; fixed so results are reproducible
// independent of evaluation order.
constexpr std::uint64_t kSupportStream = 0x51;
constexpr std::uint64_t kEntryStream = 0x52;
constexpr std::uint64_t kFactorStream = 0x53;

constexpr double kEntryScale = 0.3;

// Cheap feasibility scan: min eigenvalue of S(theta) - margin I > 0 at every
// grid point, tested by Cholesky with early exit.  Used inside the loading
// and bisection loops where a full eigendecomposition would dominate.
bool grid_clears_margin(const MatrixPoly& s, double margin, int gridsize) {
  Eigen::LLT<ComplexMatrix> llt;
  const ComplexMatrix shift =
      margin * ComplexMatrix::Identity(s.m, s.m);
  for (double theta : spectral_grid(gridsize)) {
    llt.compute(eval_poly(s, theta) - shift);
    if (llt.info() != Eigen::Success) return false;
  }
  return true;
}

std::vector<std::pair<int, int>> draw_support(int m, double density,
                                              Rng& rng) {
  std::vector<std::pair<int, int>> pairs;
  for (int j = 1; j < m; ++j)
    for (int h = 0; h < j; ++h) pairs.emplace_back(j, h);
  const auto total = static_cast<double>(pairs.size());
  const auto want = static_cast<std::size_t>(
      std::min(total, std::ceil(density * total)));
  // Partial Fisher-Yates: the first `want` slots end up uniform without
  // replacement.
  for (std::size_t i = 0; i < want; ++i) {
    const std::size_t pick =
        i + static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(pairs.size() - 1 - i)));
    std::swap(pairs[i], pairs[pick]);
  }
  pairs.resize(want);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

// Shared sparse-part construction: draws the support and coefficients, then
// loads the diagonal until the spectrum clears the margin.
MatrixPoly draw_sparse_part(int m, int n, double density, double margin,
                            std::uint64_t seed,
                            std::vector<std::pair<int, int>>& support) {
  Rng support_rng(seed, kSupportStream);
  Rng entry_rng(seed, kEntryStream);
  support = draw_support(m, density, support_rng);

  MatrixPoly s(m, n);
  s.block(0).diagonal().setOnes();
  for (const auto& [j, h] : support) {
    const double v = entry_rng.uniform(-kEntryScale, kEntryScale);
    s.block(0)(j, h) = v;
    s.block(0)(h, j) = v;
  }
  for (int k = 1; k <= n; ++k) {
    for (int j = 0; j < m; ++j)
      s.block(k)(j, j) = entry_rng.uniform(-kEntryScale, kEntryScale);
    for (const auto& [j, h] : support) {
      s.block(k)(j, h) = entry_rng.uniform(-kEntryScale, kEntryScale);
      s.block(k)(h, j) = entry_rng.uniform(-kEntryScale, kEntryScale);
    }
  }

  if (!grid_clears_margin(s, margin, kSpectralGrid)) {
    double delta = 0.1;
    MatrixPoly loaded = s;
    loaded.block(0).diagonal().array() += delta;
    while (!grid_clears_margin(loaded, margin, kSpectralGrid)) {
      delta *= 1.5;
      loaded = s;
      loaded.block(0).diagonal().array() += delta;
    }
    s = loaded;
  }
  return s;
}

ARModel derive_ar(const MatrixPoly& inverse_spectrum) {
  return yule_walker(exact_lags(inverse_spectrum, inverse_spectrum.n));
}

}  // namespace

double companion_spectral_radius(const ARModel& model) {
  if (model.n == 0) return 0.0;
  const int dim = model.m * model.n;
  Matrix companion = Matrix::Zero(dim, dim);
  for (int k = 0; k < model.n; ++k)
    companion.block(0, k * model.m, model.m, model.m) =
        -model.coeffs[static_cast<std::size_t>(k)];
  if (model.n > 1)
    companion.block(model.m, 0, dim - model.m, dim - model.m)
        .setIdentity();
  return Eigen::EigenSolver<Matrix>(companion, /*computeEigenvectors=*/false)
      .eigenvalues()
      .cwiseAbs()
      .maxCoeff();
}

GroundTruth random_sparse_inverse(int m, int n, double density, double margin,
                                  std::uint64_t seed, bool with_ar) {
  if (m < 1 || n < 0 || density < 0.0 || density > 1.0 || margin <= 0.0)
    throw std::invalid_argument("random_sparse_inverse: bad arguments");
  GroundTruth truth;
  truth.S = draw_sparse_part(m, n, density, margin, seed, truth.support);
  truth.r = 0;
  if (with_ar) truth.ar = derive_ar(truth.S);
  return truth;
}

GroundTruth random_latent_inverse(int m, int n, double density, int r,
                                  double margin, std::uint64_t seed,
                                  bool with_ar) {
  if (r < 0) throw std::invalid_argument("random_latent_inverse: r < 0");
  GroundTruth truth;
  truth.S = draw_sparse_part(m, n, density, margin, seed, truth.support);
  truth.r = r;
  if (r == 0) {
    if (with_ar) truth.ar = derive_ar(truth.S);
    return truth;
  }

  Rng factor_rng(seed, kFactorStream);
  const int dim = m * (n + 1);
  Matrix f(dim, r);
  for (int row = 0; row < dim; ++row)
    for (int col = 0; col < r; ++col) f(row, col) = factor_rng.normal();
  BlockToeplitz h0(m, n);
  h0.mat = f * f.transpose();
  const MatrixPoly l0 = adjoint_D(h0);

  // Largest beta keeping S - beta L0 above the margin: the minimum grid
  // eigenvalue is concave in beta, so the feasible set is an interval
  // containing beta = 0 (guaranteed by the loading step above).
  double lo = 0.0;
  double hi = 1.0;
  auto feasible = [&](double beta) {
    return grid_clears_margin(truth.S - beta * l0, margin, kSpectralGrid);
  };
  while (feasible(hi) && hi < 1e12) {
    lo = hi;
    hi *= 2.0;
  }
  if (hi >= 1e12) {
    hi = lo;  // degenerate: correction never bites; keep the last good value
  } else {
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
  }
  const double beta = lo;

  BlockToeplitz h(m, n);
  h.mat = beta * h0.mat;
  truth.H = h;
  truth.L = beta * l0;
  if (with_ar) truth.ar = derive_ar(truth.S - *truth.L);
  return truth;
}

MatrixPoly exact_lags(const MatrixPoly& s_minus_l, int count, int gridsize) {
  if (count < 0) throw std::invalid_argument("exact_lags: count < 0");
  const int m = s_minus_l.m;
  MatrixPoly lags(m, count);
  std::vector<Matrix> sums(static_cast<std::size_t>(count) + 1,
                           Matrix::Zero(m, m));
  std::vector<Matrix> sums_im(static_cast<std::size_t>(count) + 1,
                              Matrix::Zero(m, m));
  Eigen::LLT<ComplexMatrix> llt;
  const ComplexMatrix eye = ComplexMatrix::Identity(m, m);
  for (double theta : spectral_grid(gridsize)) {
    llt.compute(eval_poly(s_minus_l, theta));
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("exact_lags: spectrum not positive definite");
    const ComplexMatrix phi = llt.solve(eye);
    for (int k = 0; k <= count; ++k) {
      const std::complex<double> phase(std::cos(k * theta),
                                       std::sin(k * theta));
      const ComplexMatrix term = phase * phi;
      sums[static_cast<std::size_t>(k)] += term.real();
      sums_im[static_cast<std::size_t>(k)] += term.imag();
    }
  }
  // Trapezoid rule on the periodic integrand: plain average over the grid.
  for (int k = 0; k <= count; ++k) {
    if (sums_im[static_cast<std::size_t>(k)].norm() >
        1e-8 * std::max(1.0, sums[static_cast<std::size_t>(k)].norm()))
      throw std::runtime_error("exact_lags: imaginary residue in lag");
    lags.block(k) = sums[static_cast<std::size_t>(k)] / gridsize;
  }
  lags.block(0) =
      ((lags.block(0) + lags.block(0).transpose()) * 0.5).eval();
  return lags;
}

ARModel yule_walker(const MatrixPoly& lags) {
  const int m = lags.m;
  const int n = lags.n;
  SchurResult schur;
  try {
    schur = block_schur(toeplitz(lags));
  } catch (const std::runtime_error&) {
    throw std::runtime_error(
        "yule_walker: Toeplitz matrix of the lags is singular");
  }
  ARModel model;
  model.m = m;
  model.n = n;
  model.noise_cov = schur.w;
  model.coeffs.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k)
    model.coeffs.push_back(schur.a.middleRows(k * m, m).transpose());
  return model;
}

BlockToeplitz yule_walker_concentration(const MatrixPoly& lags) {
  const SchurResult schur = block_schur(toeplitz(lags));
  Eigen::LLT<Matrix> llt(schur.w);
  BlockToeplitz x(lags.m, lags.n);
  x.mat = schur.a * llt.solve(schur.a.transpose());
  x.mat = ((x.mat + x.mat.transpose()) * 0.5).eval();
  return x;
}

TimeSeries simulate(const ARModel& model, int length, std::uint64_t seed,
                    int burnin) {
  if (length < 1) throw std::invalid_argument("simulate: length < 1");
  const double radius = companion_spectral_radius(model);
  if (radius >= 1.0)
    throw std::runtime_error("simulate: model is unstable (radius " +
                             std::to_string(radius) + ")");
  if (burnin < 0) {
    burnin = (model.n == 0)
                 ? 0
                 : std::min(5000.0, 10.0 * model.n *
                                        std::ceil(1.0 / (1.0 - radius)));
  }
  Eigen::LLT<Matrix> llt(model.noise_cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("simulate: noise covariance not positive definite");
  const Matrix chol = llt.matrixL();

  Rng rng(seed);
  const int m = model.m;
  Vector noise(m);
  std::vector<Vector> history(static_cast<std::size_t>(model.n),
                              Vector::Zero(m));
  TimeSeries out;
  out.samples.resize(length, m);
  for (int t = -burnin; t < length; ++t) {
    for (int i = 0; i < m; ++i) noise(i) = rng.normal();
    Vector y = chol * noise;
    for (int k = 1; k <= model.n; ++k)
      y.noalias() -=
          model.coeffs[static_cast<std::size_t>(k - 1)] *
          history[static_cast<std::size_t>(k - 1)];
    if (t >= 0) out.samples.row(t) = y.transpose();
    for (int k = model.n - 1; k > 0; --k)
      history[static_cast<std::size_t>(k)] =
          history[static_cast<std::size_t>(k - 1)];
    if (model.n > 0) history[0] = y;
  }
  return out;
}

}  // namespace argraph
