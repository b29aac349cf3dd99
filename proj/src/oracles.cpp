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

#include "argraph/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <Eigen/Dense>

#include "argraph/armodel.hpp"
#include "argraph/ebayes.hpp"
#include "argraph/rng.hpp"
#include "argraph/sparse_dual.hpp"

namespace argraph {

namespace {

double simpson_rule(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double fa, double b, double fb, double m, double fm,
                       double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_rule(a, fa, m, fm, flm);
  const double right = simpson_rule(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                         depth - 1) +
         simpson_recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                         depth - 1);
}

std::string format_detail(const char* fmt, double a, double b = 0.0) {
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), fmt, a, b);
  return buffer;
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = simpson_rule(a, fa, b, fb, fm);
  return simpson_recurse(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double minimize_log_scalar(const std::function<double(double)>& f, double lo,
                           double hi) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("minimize_log_scalar: need 0 < lo < hi");
  }
  constexpr int kScan = 512;
  const double step = std::log(hi / lo) / (kScan - 1);
  int best = 0;
  double best_value = f(lo);
  for (int i = 1; i < kScan; ++i) {
    const double x = lo * std::exp(step * i);
    const double value = f(x);
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  double a = lo * std::exp(step * std::max(best - 1, 0));
  double b = lo * std::exp(step * std::min(best + 1, kScan - 1));
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 200 && (b - a) > 1e-14 * (std::abs(a) + 1.0); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

Vector l1_projection_reference(const Vector& v, const Vector& w,
                               double radius) {
  if (radius < 0.0) {
    throw std::invalid_argument("l1_projection_reference: negative radius");
  }
  const auto size = v.size();
  double weighted = 0.0;
  double lambda_hi = 0.0;
  for (Eigen::Index i = 0; i < size; ++i) {
    weighted += w(i) * std::abs(v(i));
    lambda_hi = std::max(lambda_hi, std::abs(v(i)) / w(i));
  }
  if (weighted <= radius) return v;

  const auto excess = [&](double lambda) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < size; ++i) {
      total += w(i) * std::max(std::abs(v(i)) - lambda * w(i), 0.0);
    }
    return total - radius;
  };
  double lo = 0.0;
  double hi = lambda_hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double lambda = 0.5 * (lo + hi);
  Vector z(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double mag = std::max(std::abs(v(i)) - lambda * w(i), 0.0);
    z(i) = v(i) < 0.0 ? -mag : mag;
  }
  return z;
}

MatrixPoly fd_gradient(const std::function<double(const MatrixPoly&)>& f,
                       const MatrixPoly& z, double h) {
  MatrixPoly grad(z.m, z.n);
  MatrixPoly probe = z;
  for (int k = 0; k <= z.n; ++k) {
    for (int i = 0; i < z.m; ++i) {
      for (int j = 0; j < z.m; ++j) {
        if (k == 0 && j < i) continue;  // symmetric block, mirror below
        const bool paired = k == 0 && i != j;
        const double half = paired ? 0.5 * h : h;
        probe.block(k)(i, j) += half;
        if (paired) probe.block(k)(j, i) += half;
        const double up = f(probe);
        probe.block(k)(i, j) -= 2.0 * half;
        if (paired) probe.block(k)(j, i) -= 2.0 * half;
        const double down = f(probe);
        probe.block(k)(i, j) += half;
        if (paired) probe.block(k)(j, i) += half;
        const double slope = (up - down) / (2.0 * h);
        grad.block(k)(i, j) = slope;
        if (paired) grad.block(k)(j, i) = slope;
      }
    }
  }
  return grad;
}

MatrixPoly brute_covariance_lags(const TimeSeries& y, int n) {
  const int length = y.length();
  const int m = y.dim();
  if (length <= n) {
    throw std::invalid_argument("brute_covariance_lags: series too short");
  }
  MatrixPoly lags(m, n);
  for (int k = 0; k <= n; ++k) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int t = 0; t + k < length; ++t) {
          acc += y.samples(t + k, i) * y.samples(t, j);
        }
        lags.block(k)(i, j) = acc / (length - n);
      }
    }
  }
  return lags;
}

Matrix sample_lag_se(const MatrixPoly& s_minus_l, int lag, int num_samples,
                     int tail) {
  const int m = s_minus_l.m;
  const MatrixPoly lags = exact_lags(s_minus_l, tail + lag);
  const auto c = [&](int u, int a, int b) {
    return u >= 0 ? lags.block(u)(a, b) : lags.block(-u)(b, a);
  };
  Matrix se(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double var = 0.0;
      for (int u = -tail; u <= tail; ++u) {
        var += c(u, i, i) * c(u, j, j) + c(u + lag, i, j) * c(u - lag, j, i);
      }
      se(i, j) = std::sqrt(std::max(var, 0.0) / num_samples);
    }
  }
  return se;
}

double orthant_exponential_integral(int n, double gamma, double tol) {
  if (gamma <= 0.0) {
    throw std::invalid_argument("orthant integral: gamma must be positive");
  }
  const double cutoff = 60.0 / gamma;
  if (n == 1) {
    return adaptive_simpson([&](double x) { return std::exp(-gamma * x); },
                            0.0, cutoff, tol);
  }
  if (n == 2) {
    const auto inner = [&](double x) {
      return adaptive_simpson(
          [&](double y) { return std::exp(-gamma * std::max(x, y)); }, 0.0,
          cutoff, tol * 1e-2);
    };
    return adaptive_simpson(inner, 0.0, cutoff, tol);
  }
  throw std::invalid_argument("orthant integral: only n = 1, 2 supported");
}

std::vector<SelftestResult> run_selftest() {
  std::vector<SelftestResult> results;
  const auto push = [&](const char* name, bool pass, std::string detail) {
    results.push_back({name, pass, std::move(detail)});
  };

  {
    // closed-form optimum of the smallest instance: budget fully spent on
    // the single coefficient, x = 1 / (1 + budget)
    MatrixPoly rhat(1, 0);
    rhat.block(0)(0, 0) = 1.0;
    WeightSet weights;
    weights.gammas = Matrix::Constant(1, 1, 1.0);
    weights.nn = 100.0;
    const SparseSolution sol = solve_sparse_dual(rhat, weights);
    const double err = std::abs(sol.x.mat(0, 0) - 1.0 / 1.02);
    push("scalar-optimum", err <= 1e-6 && sol.gap <= 1e-8 && sol.converged,
         format_detail("|x - 1/1.02| = %.2e, gap = %.2e", err, sol.gap));
  }

  {
    Rng rng(2026, 11);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
      const int size = rng.uniform_int(1, 5);
      Vector v(size);
      Vector w(size);
      for (int i = 0; i < size; ++i) {
        v(i) = rng.uniform(-3.0, 3.0);
        w(i) = rng.uniform(0.2, 3.0);
      }
      const double radius = rng.uniform(0.0, 3.0);
      const Vector a = weighted_l1_projection(v, w, radius);
      const Vector b = l1_projection_reference(v, w, radius);
      worst = std::max(worst, (a - b).norm());
    }
    push("projection-reference", worst <= 1e-8,
         format_detail("worst deviation = %.2e", worst));
  }

  {
    const GroundTruth truth = random_sparse_inverse(2, 1, 0.5, 0.3, 99);
    const MatrixPoly rhat = exact_lags(truth.S, 1);
    MatrixPoly z(2, 1);
    Rng rng(7, 3);
    for (int k = 0; k <= 1; ++k) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) z.block(k)(i, j) = rng.uniform(-1.0, 1.0);
      }
    }
    z.block(0) = (0.5 * (z.block(0) + z.block(0).transpose())).eval();
    z *= 1e-3;
    const auto eval = dual_objective_grad(z, rhat);
    double rel = 1.0;
    if (eval) {
      const MatrixPoly fd = fd_gradient(
          [&](const MatrixPoly& p) {
            const auto e = dual_objective_grad(p, rhat);
            if (!e) throw std::runtime_error("infeasible probe");
            return e->value;
          },
          z, 1e-5);
      rel = (fd - eval->grad).norm() / eval->grad.norm();
    }
    push("dual-gradient-fd", rel <= 1e-5,
         format_detail("relative error = %.2e", rel));
  }

  {
    Rng rng(13, 5);
    MatrixPoly s(3, 1);
    for (int k = 0; k <= 1; ++k) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) s.block(k)(i, j) = rng.uniform(-2.0, 2.0);
      }
    }
    s.block(0) = (0.5 * (s.block(0) + s.block(0).transpose())).eval();
    const double eps = 1e-3;
    const Matrix gammas = update_gamma(s, eps);
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) {
      for (int h = 0; h <= j; ++h) {
        const double q = group_maxnorm(s, j, h);
        const double count = j == h ? 2.0 : 3.0;
        const double numeric = minimize_log_scalar(
            [&](double g) { return g * (q + eps) - count * std::log(g); },
            1e-6, 1e9);
        worst = std::max(worst, std::abs(numeric - gammas(j, h)) /
                                    (1.0 + gammas(j, h)));
      }
    }
    push("weight-update-numeric", worst <= 1e-6,
         format_detail("worst relative gap = %.2e", worst));
  }

  {
    bool pass = true;
    double worst_low = 1.0;
    for (const int n : {1, 2}) {
      for (const double gamma : {0.5, 1.0, 2.0}) {
        const double value = orthant_exponential_integral(n, gamma);
        const double lo = std::pow(gamma, -n);
        const double hi = std::pow(n, n) * std::pow(gamma, -n);
        // 1e-7 relative slack absorbs quadrature truncation; the n = 1
        // integral sits exactly on both bounds
        if (value < lo * (1.0 - 1e-7) || value > hi * (1.0 + 1e-7)) {
          pass = false;
        }
        worst_low = std::min(worst_low, value / lo);
      }
    }
    push("orthant-integral-bounds", pass,
         format_detail("min value/lower = %.9f", worst_low));
  }

  {
    const GroundTruth truth = random_sparse_inverse(3, 1, 0.4, 0.2, 5);
    const TimeSeries y = simulate(truth.ar, 400, 17);
    const MatrixPoly fast = covariance_lags(y, 1);
    const MatrixPoly slow = brute_covariance_lags(y, 1);
    const double rel = (fast - slow).norm() / slow.norm();
    push("covariance-direct-sum", rel <= 1e-12,
         format_detail("relative deviation = %.2e", rel));
  }

  return results;
}

}  // namespace argraph
