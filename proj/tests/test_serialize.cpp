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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"

#include "argraph/serialize.hpp"
#include "test_util.hpp"

namespace argraph {
namespace {

using testutil::random_poly;
using testutil::random_rhat;

bool bitwise_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j) ||
          std::signbit(a(i, j)) != std::signbit(b(i, j))) {
        return false;
      }
    }
  }
  return true;
}

bool bitwise_equal(const MatrixPoly& a, const MatrixPoly& b) {
  if (a.m != b.m || a.n != b.n) return false;
  for (int k = 0; k <= a.n; ++k) {
    if (!bitwise_equal(a.block(k), b.block(k))) return false;
  }
  return true;
}

// Dump to text and parse back, the path every file on disk takes.
Json through_text(const Json& j) { return Json::parse(j.dump()); }

TEST_SUITE("serialize") {

TEST_CASE("matrices survive the text round trip bit for bit") {
  Matrix a(2, 3);
  a << 1.0 / 3.0, -2.5e300, 1e-17,
       0.1, -0.0, 123456789.123456789;
  const Matrix back = matrix_from_json(through_text(matrix_to_json(a)));
  CHECK(bitwise_equal(a, back));

  Json j = matrix_to_json(a);
  j["data"].push_back(1.0);
  CHECK_THROWS_AS(matrix_from_json(j), std::invalid_argument);
}

TEST_CASE("coefficient lists survive the text round trip bit for bit") {
  std::mt19937_64 rng(424242);
  const MatrixPoly p = random_poly(3, 2, rng);
  const MatrixPoly back = poly_from_json(through_text(poly_to_json(p)));
  CHECK(bitwise_equal(p, back));

  Json j = poly_to_json(p);
  j["blocks"].erase(2);
  CHECK_THROWS_AS(poly_from_json(j), std::invalid_argument);
  Json j2 = poly_to_json(p);
  j2["blocks"][0].erase(0);
  CHECK_THROWS_AS(poly_from_json(j2), std::invalid_argument);
}

TEST_CASE("sparse models round trip") {
  const GroundTruth truth = random_sparse_inverse(3, 1, 0.4, 0.2, 901);
  const GroundTruth back = model_from_json(through_text(model_to_json(truth)));
  CHECK(bitwise_equal(truth.S, back.S));
  CHECK(back.support == truth.support);
  CHECK(back.r == 0);
  CHECK_FALSE(back.L.has_value());
  CHECK_FALSE(back.H.has_value());
  REQUIRE(back.ar.m == truth.ar.m);
  REQUIRE(back.ar.n == truth.ar.n);
  for (int k = 0; k < truth.ar.n; ++k) {
    CHECK(bitwise_equal(truth.ar.coeffs[static_cast<std::size_t>(k)],
                        back.ar.coeffs[static_cast<std::size_t>(k)]));
  }
  CHECK(bitwise_equal(truth.ar.noise_cov, back.ar.noise_cov));
}

TEST_CASE("latent models round trip") {
  const GroundTruth truth = random_latent_inverse(4, 1, 0.3, 2, 0.1, 902);
  const GroundTruth back = model_from_json(through_text(model_to_json(truth)));
  CHECK(bitwise_equal(truth.S, back.S));
  REQUIRE(back.L.has_value());
  CHECK(bitwise_equal(*truth.L, *back.L));
  REQUIRE(back.H.has_value());
  CHECK(bitwise_equal(truth.H->mat, back.H->mat));
  CHECK(back.r == truth.r);
  CHECK(back.support == truth.support);
}

TEST_CASE("a structure-only model keeps its empty AR form") {
  const GroundTruth truth =
      random_sparse_inverse(3, 1, 0.4, 0.2, 903, /*with_ar=*/false);
  REQUIRE(truth.ar.m == 0);
  const GroundTruth back = model_from_json(through_text(model_to_json(truth)));
  CHECK(back.ar.m == 0);
  CHECK(back.ar.coeffs.empty());
}

TEST_CASE("sparse estimates round trip") {
  const MatrixPoly rhat = random_rhat(3, 1, 910);
  const EstimateResult fit = solve_fixed(rhat, 399.0, 1.0);
  const EstimateResult back =
      estimate_from_json(through_text(estimate_to_json(fit)));
  CHECK(back.mode == "sparse");
  CHECK(back.m == fit.m);
  CHECK(back.n == fit.n);
  CHECK(back.nn == fit.nn);
  CHECK(bitwise_equal(fit.x.mat, back.x.mat));
  CHECK(bitwise_equal(fit.s, back.s));
  CHECK(bitwise_equal(fit.z, back.z));
  CHECK_FALSE(back.h.has_value());
  CHECK_FALSE(back.l.has_value());
  CHECK(back.gap == fit.gap);
  CHECK(back.dual_value == fit.dual_value);
  CHECK(back.primal_value == fit.primal_value);
  CHECK(back.outer_iterations == fit.outer_iterations);
  CHECK(back.inner_iterations == fit.inner_iterations);
  CHECK(back.converged == fit.converged);
  CHECK(bitwise_equal(fit.final_weights.gammas, back.final_weights.gammas));
  CHECK(back.final_weights.nn == fit.final_weights.nn);
  CHECK_FALSE(back.final_weights.q.has_value());
}

TEST_CASE("latent estimates round trip") {
  const MatrixPoly rhat = random_rhat(2, 1, 911);
  const EstimateResult fit = solve_fixed(rhat, 399.0, 1.0, 2.0);
  const EstimateResult back =
      estimate_from_json(through_text(estimate_to_json(fit)));
  CHECK(back.mode == "latent");
  REQUIRE(back.h.has_value());
  CHECK(bitwise_equal(fit.h->mat, back.h->mat));
  REQUIRE(back.l.has_value());
  CHECK(bitwise_equal(*fit.l, *back.l));
  REQUIRE(back.final_weights.q.has_value());
  CHECK(bitwise_equal(*fit.final_weights.q, *back.final_weights.q));
}

TEST_CASE("metric reports serialize with an explicit null for e_sl") {
  const GroundTruth truth = random_sparse_inverse(3, 1, 0.4, 0.2, 912);
  const MetricReport report = evaluate_estimate(truth.S, nullptr, truth);
  const Json j = through_text(metrics_to_json(report));
  CHECK(j.at("e").get<double>() == report.e);
  CHECK(j.at("e_sp").get<double>() == report.e_sp);
  CHECK(j.at("c").get<double>() == report.c);
  CHECK(j.at("rank_hat").get<int>() == report.rank_hat);
  CHECK(j.at("e_sl").is_null());
  CHECK(j.at("pc_threshold").get<double>() == report.pc_threshold);
  CHECK(j.at("sv_threshold").get<double>() == report.sv_threshold);
  CHECK(j.at("support_hat").size() == report.support_hat.size());
}

TEST_CASE("solver options round trip and tolerate partial files") {
  SolverOptions opts;
  opts.tol_pg = 3e-7;
  opts.max_iter = 123;
  opts.backtrack = 0.25;
  opts.verbose = true;
  opts.tol_gap = 2e-5;
  opts.rho = 3.5;
  opts.tol_admm = 7e-4;
  opts.max_admm = 77;
  opts.inner_max_iter = 42;
  opts.tol_null = 5e-5;
  opts.tol_active = 6e-7;
  const SolverOptions back =
      solver_options_from_json(through_text(solver_options_to_json(opts)));
  CHECK(back.tol_pg == opts.tol_pg);
  CHECK(back.max_iter == opts.max_iter);
  CHECK(back.backtrack == opts.backtrack);
  CHECK(back.verbose == opts.verbose);
  CHECK(back.tol_gap == opts.tol_gap);
  CHECK(back.rho == opts.rho);
  CHECK(back.tol_admm == opts.tol_admm);
  CHECK(back.max_admm == opts.max_admm);
  CHECK(back.inner_max_iter == opts.inner_max_iter);
  CHECK(back.tol_null == opts.tol_null);
  CHECK(back.tol_active == opts.tol_active);

  const SolverOptions defaults = solver_options_from_json(Json::object());
  CHECK(defaults.tol_pg == SolverOptions{}.tol_pg);
  CHECK(defaults.max_iter == SolverOptions{}.max_iter);

  const SolverOptions partial =
      solver_options_from_json(Json{{"tol_pg", 1e-3}});
  CHECK(partial.tol_pg == 1e-3);
  CHECK(partial.max_iter == SolverOptions{}.max_iter);
}

TEST_CASE("estimator configuration rounds trip including the inner solver") {
  EBConfig cfg;
  cfg.eps_s = 0.02;
  cfg.eps_l = 0.03;
  cfg.eps_stop = 1e-6;
  cfg.l_max = 7;
  cfg.alpha = 0.4;
  cfg.gml_weights = false;
  cfg.relative_step = true;
  cfg.warm_start = false;
  cfg.collect_trace = false;
  cfg.solver.max_iter = 999;
  const EBConfig back = eb_config_from_json(through_text(eb_config_to_json(cfg)));
  CHECK(back.eps_s == cfg.eps_s);
  CHECK(back.eps_l == cfg.eps_l);
  CHECK(back.eps_stop == cfg.eps_stop);
  CHECK(back.l_max == cfg.l_max);
  CHECK(back.alpha == cfg.alpha);
  CHECK(back.gml_weights == cfg.gml_weights);
  CHECK(back.relative_step == cfg.relative_step);
  CHECK(back.warm_start == cfg.warm_start);
  CHECK(back.collect_trace == cfg.collect_trace);
  CHECK(back.solver.max_iter == 999);

  const EBConfig defaults = eb_config_from_json(Json::object());
  CHECK(defaults.l_max == EBConfig{}.l_max);
  CHECK(defaults.solver.tol_pg == EBConfig{}.solver.tol_pg);
}

TEST_CASE("metric options round trip") {
  MetricOptions opts;
  opts.pc_threshold = 0.23;
  opts.sv_threshold = 0.07;
  opts.gridsize = 333;
  const MetricOptions back =
      metric_options_from_json(through_text(metric_options_to_json(opts)));
  CHECK(back.pc_threshold == opts.pc_threshold);
  CHECK(back.sv_threshold == opts.sv_threshold);
  CHECK(back.gridsize == opts.gridsize);
}

TEST_CASE("outer traces stream one parseable object per iteration") {
  const MatrixPoly rhat = random_rhat(3, 1, 915);
  EBConfig cfg;
  cfg.l_max = 4;
  const EstimateResult est = run_sparse_eb(rhat, 399.0, cfg);
  REQUIRE_FALSE(est.trace.empty());

  std::ostringstream out;
  write_trace_jsonl(est.trace, out);
  std::istringstream in(out.str());
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    const Json j = Json::parse(line);
    CHECK(j.at("iteration").get<int>() ==
          est.trace[count].iteration);
    CHECK(j.at("mm_value").get<double>() == est.trace[count].mm_value);
    if (count == 0) {
      CHECK(j.at("step_change").is_null());
    } else {
      CHECK(j.at("step_change").get<double>() ==
            est.trace[count].step_change);
    }
    ++count;
  }
  CHECK(count == est.trace.size());
}

TEST_CASE("score tables print the fixed header and blank optionals") {
  BaselineScore plain;
  plain.gamma = 0.5;
  plain.bic = 12.25;
  plain.support_size = 3;
  plain.rank = 0;
  BaselineScore full;
  full.gamma = 1.5;
  full.gamma_l = 2.0;
  full.bic = -4.5;
  full.support_size = 1;
  full.rank = 2;
  full.e = 0.125;
  BaselineSelection sel;
  sel.best_index = 1;
  sel.scores = {plain, full};

  std::ostringstream out;
  write_scores_csv(sel, out);
  const std::string expected =
      "gamma,gamma_l,bic,support_size,rank,e\n" + format_double(0.5) +
      ",," + format_double(12.25) + ",3,0,\n" + format_double(1.5) + "," +
      format_double(2.0) + "," + format_double(-4.5) + ",1,2," +
      format_double(0.125) + "\n";
  CHECK(out.str() == expected);
}

TEST_CASE("formatted doubles parse back to the same bits") {
  const auto parse = [](const std::string& text) {
    double value = 0.0;
    const auto result =
        std::from_chars(text.data(), text.data() + text.size(), value);
    REQUIRE(result.ec == std::errc{});
    return value;
  };
  for (const double v :
       {0.1, 1.0 / 3.0, 1e-300, 5e-324, 1.7976931348623157e308, -0.0,
        123456789.123456789, 6.02214076e23, -7.25, 0.0, 2.0}) {
    const double back = parse(format_double(v));
    CHECK(back == v);
    CHECK(std::signbit(back) == std::signbit(v));
  }
  std::mt19937_64 rng(999);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 200; ++i) {
    const double v = std::ldexp(unif(rng), expo(rng));
    CHECK(parse(format_double(v)) == v);
  }
}

TEST_CASE("json files save and load") {
  const Json j{{"alpha", 0.25}, {"name", "run"}, {"tags", Json::array({1, 2})}};
  const std::string path =
      (std::filesystem::temp_directory_path() / "argraph_serialize_io.json")
          .string();
  save_json_file(j, path);
  const Json back = load_json_file(path);
  CHECK(back == j);
  std::remove(path.c_str());
  CHECK_THROWS(load_json_file(path));
}

}  // TEST_SUITE

}  // namespace
}  // namespace argraph
