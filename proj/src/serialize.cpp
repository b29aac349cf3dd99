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

#include "argraph/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace argraph {

namespace {

std::vector<double> row_major(const Matrix& a) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(a.size()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) data.push_back(a(i, j));
  }
  return data;
}

Json blocktoeplitz_to_json(const BlockToeplitz& b) {
  return Json{{"m", b.m}, {"n", b.n}, {"mat", matrix_to_json(b.mat)}};
}

BlockToeplitz blocktoeplitz_from_json(const Json& j) {
  BlockToeplitz b(j.at("m").get<int>(), j.at("n").get<int>());
  b.mat = matrix_from_json(j.at("mat"));
  if (b.mat.rows() != b.dim() || b.mat.cols() != b.dim()) {
    throw std::invalid_argument("block matrix size does not match (m, n)");
  }
  return b;
}

Json armodel_to_json(const ARModel& model) {
  Json coeffs = Json::array();
  for (const auto& a : model.coeffs) coeffs.push_back(matrix_to_json(a));
  return Json{{"m", model.m},
              {"n", model.n},
              {"coeffs", std::move(coeffs)},
              {"noise_cov", matrix_to_json(model.noise_cov)}};
}

ARModel armodel_from_json(const Json& j) {
  ARModel model;
  model.m = j.at("m").get<int>();
  model.n = j.at("n").get<int>();
  for (const auto& a : j.at("coeffs")) {
    model.coeffs.push_back(matrix_from_json(a));
  }
  model.noise_cov = matrix_from_json(j.at("noise_cov"));
  if (static_cast<int>(model.coeffs.size()) != model.n) {
    throw std::invalid_argument("AR coefficient count does not match order");
  }
  return model;
}

Json weights_to_json(const WeightSet& weights) {
  Json j{{"gammas", matrix_to_json(weights.gammas)}, {"nn", weights.nn}};
  j["q"] = weights.q ? matrix_to_json(*weights.q) : Json(nullptr);
  return j;
}

WeightSet weights_from_json(const Json& j) {
  WeightSet weights;
  weights.gammas = matrix_from_json(j.at("gammas"));
  weights.nn = j.at("nn").get<double>();
  if (j.contains("q") && !j.at("q").is_null()) {
    weights.q = matrix_from_json(j.at("q"));
  }
  return weights;
}

}  // namespace

Json matrix_to_json(const Matrix& a) {
  return Json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", row_major(a)}};
}

Matrix matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 ||
      static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw std::invalid_argument("matrix data length does not match its shape");
  }
  Matrix a(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j2 = 0; j2 < cols; ++j2) a(i, j2) = data[k++];
  }
  return a;
}

Json poly_to_json(const MatrixPoly& p) {
  Json blocks = Json::array();
  for (const auto& b : p.blocks) blocks.push_back(row_major(b));
  return Json{{"m", p.m}, {"n", p.n}, {"blocks", std::move(blocks)}};
}

MatrixPoly poly_from_json(const Json& j) {
  const int m = j.at("m").get<int>();
  const int n = j.at("n").get<int>();
  const auto& blocks = j.at("blocks");
  if (static_cast<int>(blocks.size()) != n + 1) {
    throw std::invalid_argument("coefficient list length does not match n");
  }
  std::vector<Matrix> parsed;
  parsed.reserve(blocks.size());
  for (const auto& flat : blocks) {
    const auto data = flat.get<std::vector<double>>();
    if (static_cast<int>(data.size()) != m * m) {
      throw std::invalid_argument("coefficient block is not m x m");
    }
    Matrix b(m, m);
    std::size_t k = 0;
    for (int i = 0; i < m; ++i) {
      for (int j2 = 0; j2 < m; ++j2) b(i, j2) = data[k++];
    }
    parsed.push_back(std::move(b));
  }
  return MatrixPoly::from_blocks(std::move(parsed));
}

Json model_to_json(const GroundTruth& truth) {
  Json support = Json::array();
  for (const auto& [j, h] : truth.support) {
    support.push_back(Json::array({j, h}));
  }
  Json out{{"m", truth.S.m},
           {"n", truth.S.n},
           {"S", poly_to_json(truth.S)},
           {"support", std::move(support)},
           {"r", truth.r}};
  out["L"] = truth.L ? poly_to_json(*truth.L) : Json(nullptr);
  out["H"] = truth.H ? blocktoeplitz_to_json(*truth.H) : Json(nullptr);
  out["ar"] = truth.ar.m > 0 ? armodel_to_json(truth.ar) : Json(nullptr);
  return out;
}

GroundTruth model_from_json(const Json& j) {
  GroundTruth truth;
  truth.S = poly_from_json(j.at("S"));
  if (j.contains("L") && !j.at("L").is_null()) {
    truth.L = poly_from_json(j.at("L"));
  }
  if (j.contains("H") && !j.at("H").is_null()) {
    truth.H = blocktoeplitz_from_json(j.at("H"));
  }
  for (const auto& pair : j.at("support")) {
    truth.support.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
  }
  truth.r = j.at("r").get<int>();
  if (j.contains("ar") && !j.at("ar").is_null()) {
    truth.ar = armodel_from_json(j.at("ar"));
  }
  return truth;
}

Json estimate_to_json(const EstimateResult& result) {
  Json out{{"mode", result.mode},
           {"m", result.m},
           {"n", result.n},
           {"nn", result.nn},
           {"x", blocktoeplitz_to_json(result.x)},
           {"s", poly_to_json(result.s)},
           {"z", poly_to_json(result.z)},
           {"gap", result.gap},
           {"dual_value", result.dual_value},
           {"primal_value", result.primal_value},
           {"outer_iterations", result.outer_iterations},
           {"inner_iterations", result.inner_iterations},
           {"converged", result.converged},
           {"weights", weights_to_json(result.final_weights)}};
  out["h"] = result.h ? blocktoeplitz_to_json(*result.h) : Json(nullptr);
  out["l"] = result.l ? poly_to_json(*result.l) : Json(nullptr);
  return out;
}

EstimateResult estimate_from_json(const Json& j) {
  EstimateResult result;
  result.mode = j.at("mode").get<std::string>();
  result.m = j.at("m").get<int>();
  result.n = j.at("n").get<int>();
  result.nn = j.at("nn").get<double>();
  result.x = blocktoeplitz_from_json(j.at("x"));
  result.s = poly_from_json(j.at("s"));
  result.z = poly_from_json(j.at("z"));
  if (j.contains("h") && !j.at("h").is_null()) {
    result.h = blocktoeplitz_from_json(j.at("h"));
  }
  if (j.contains("l") && !j.at("l").is_null()) {
    result.l = poly_from_json(j.at("l"));
  }
  result.gap = j.at("gap").get<double>();
  result.dual_value = j.at("dual_value").get<double>();
  result.primal_value = j.at("primal_value").get<double>();
  result.outer_iterations = j.at("outer_iterations").get<int>();
  result.inner_iterations = j.at("inner_iterations").get<int>();
  result.converged = j.at("converged").get<bool>();
  result.final_weights = weights_from_json(j.at("weights"));
  return result;
}

Json metrics_to_json(const MetricReport& report) {
  Json support = Json::array();
  for (const auto& [j, h] : report.support_hat) {
    support.push_back(Json::array({j, h}));
  }
  Json out{{"e", report.e},
           {"e_sp", report.e_sp},
           {"c", report.c},
           {"rank_hat", report.rank_hat},
           {"support_hat", std::move(support)},
           {"pc_threshold", report.pc_threshold},
           {"sv_threshold", report.sv_threshold}};
  out["e_sl"] = report.e_sl ? Json(*report.e_sl) : Json(nullptr);
  return out;
}

SolverOptions solver_options_from_json(const Json& j) {
  SolverOptions opts;
  opts.tol_pg = j.value("tol_pg", opts.tol_pg);
  opts.max_iter = j.value("max_iter", opts.max_iter);
  opts.backtrack = j.value("backtrack", opts.backtrack);
  opts.verbose = j.value("verbose", opts.verbose);
  opts.tol_gap = j.value("tol_gap", opts.tol_gap);
  opts.rho = j.value("rho", opts.rho);
  opts.tol_admm = j.value("tol_admm", opts.tol_admm);
  opts.max_admm = j.value("max_admm", opts.max_admm);
  opts.inner_max_iter = j.value("inner_max_iter", opts.inner_max_iter);
  opts.tol_null = j.value("tol_null", opts.tol_null);
  opts.tol_active = j.value("tol_active", opts.tol_active);
  return opts;
}

Json solver_options_to_json(const SolverOptions& opts) {
  return Json{{"tol_pg", opts.tol_pg},
              {"max_iter", opts.max_iter},
              {"backtrack", opts.backtrack},
              {"verbose", opts.verbose},
              {"tol_gap", opts.tol_gap},
              {"rho", opts.rho},
              {"tol_admm", opts.tol_admm},
              {"max_admm", opts.max_admm},
              {"inner_max_iter", opts.inner_max_iter},
              {"tol_null", opts.tol_null},
              {"tol_active", opts.tol_active}};
}

EBConfig eb_config_from_json(const Json& j) {
  EBConfig cfg;
  cfg.eps_s = j.value("eps_s", cfg.eps_s);
  cfg.eps_l = j.value("eps_l", cfg.eps_l);
  cfg.eps_stop = j.value("eps_stop", cfg.eps_stop);
  cfg.l_max = j.value("l_max", cfg.l_max);
  cfg.alpha = j.value("alpha", cfg.alpha);
  cfg.gml_weights = j.value("gml_weights", cfg.gml_weights);
  cfg.relative_step = j.value("relative_step", cfg.relative_step);
  cfg.warm_start = j.value("warm_start", cfg.warm_start);
  cfg.collect_trace = j.value("collect_trace", cfg.collect_trace);
  if (j.contains("solver")) {
    cfg.solver = solver_options_from_json(j.at("solver"));
  }
  return cfg;
}

Json eb_config_to_json(const EBConfig& cfg) {
  return Json{{"eps_s", cfg.eps_s},
              {"eps_l", cfg.eps_l},
              {"eps_stop", cfg.eps_stop},
              {"l_max", cfg.l_max},
              {"alpha", cfg.alpha},
              {"gml_weights", cfg.gml_weights},
              {"relative_step", cfg.relative_step},
              {"warm_start", cfg.warm_start},
              {"collect_trace", cfg.collect_trace},
              {"solver", solver_options_to_json(cfg.solver)}};
}

MetricOptions metric_options_from_json(const Json& j) {
  MetricOptions opts;
  opts.pc_threshold = j.value("pc_threshold", opts.pc_threshold);
  opts.sv_threshold = j.value("sv_threshold", opts.sv_threshold);
  opts.gridsize = j.value("gridsize", opts.gridsize);
  return opts;
}

Json metric_options_to_json(const MetricOptions& opts) {
  return Json{{"pc_threshold", opts.pc_threshold},
              {"sv_threshold", opts.sv_threshold},
              {"gridsize", opts.gridsize}};
}

void write_trace_jsonl(const std::vector<EBTracePoint>& trace,
                       std::ostream& out) {
  for (const auto& point : trace) {
    Json j{{"iteration", point.iteration},
           {"mm_value", point.mm_value},
           {"gap", point.gap},
           {"dual_value", point.dual_value},
           {"inner_iterations", point.inner_iterations}};
    // the first record has no predecessor; its change is +inf, not a number
    j["step_change"] = std::isfinite(point.step_change)
                           ? Json(point.step_change)
                           : Json(nullptr);
    out << j.dump() << '\n';
  }
}

void write_scores_csv(const BaselineSelection& selection, std::ostream& out) {
  out << "gamma,gamma_l,bic,support_size,rank,e\n";
  for (const auto& score : selection.scores) {
    out << format_double(score.gamma) << ',';
    if (score.gamma_l) out << format_double(*score.gamma_l);
    out << ',' << format_double(score.bic) << ',' << score.support_size << ','
        << score.rank << ',';
    if (score.e) out << format_double(*score.e);
    out << '\n';
  }
}

std::string format_double(double value) {
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (result.ec != std::errc{}) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buffer, result.ptr);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  Json j;
  in >> j;
  return j;
}

void save_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << j.dump(2) << '\n';
}

}  // namespace argraph
