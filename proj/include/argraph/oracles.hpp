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

#include <functional>
#include <string>
#include <vector>

#include "argraph/poly.hpp"
#include "argraph/tsdata.hpp"

namespace argraph {

// Independent reference implementations.  Each cross-checks a production
// code path along a different route (generic quadrature, bisection,
// finite differences, direct summation); the self-test and the unit tests
// compare the two sides.  Deliberately simple over fast.

// Recursive Simpson quadrature with interval-halving error control.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 40);

// Golden-section argmin of a unimodal function; a coarse log-spaced scan
// finds the bracket first, so only positivity of [lo, hi] is required.
double minimize_log_scalar(const std::function<double(double)>& f, double lo,
                           double hi);

// Projection onto { z : sum w_i |z_i| <= radius } by bisection on the
// shrinkage threshold (no sorting involved).
Vector l1_projection_reference(const Vector& v, const Vector& w,
                               double radius);

// Central finite differences on the coefficient-list manifold: the constant
// block is perturbed symmetrically (it represents a symmetric matrix), the
// higher blocks entry by entry.
MatrixPoly fd_gradient(const std::function<double(const MatrixPoly&)>& f,
                       const MatrixPoly& z, double h);

// Direct double-loop evaluation of the windowed covariance lags.
MatrixPoly brute_covariance_lags(const TimeSeries& y, int n);

// Large-sample standard error of each entry of the lag-k sample covariance
// of the process with inverse spectrum s_minus_l, from the classical
// quadratic-moment sum truncated at `tail` lags.
Matrix sample_lag_se(const MatrixPoly& s_minus_l, int lag, int num_samples,
                     int tail = 200);

// Iterated quadrature of the orthant integral of exp(-gamma * max_i x_i)
// over the positive orthant of dimension n (n = 1 or 2).
double orthant_exponential_integral(int n, double gamma, double tol = 1e-10);

struct SelftestResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Quick cross-check suite used by the `selftest` CLI subcommand; the unit
// tests run the same comparisons at larger batch sizes.
std::vector<SelftestResult> run_selftest();

}  // namespace argraph
