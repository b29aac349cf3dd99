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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "argraph/armodel.hpp"
#include "argraph/ebayes.hpp"
#include "argraph/metrics.hpp"
#include "argraph/montecarlo.hpp"
#include "argraph/oracles.hpp"
#include "argraph/parallel.hpp"
#include "argraph/tsdata.hpp"
#include "argraph/version.hpp"

namespace {

using namespace argraph;

void write_text_file(const std::string& path,
                     const std::function<void(std::ostream&)>& emit) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  emit(out);
  if (!out) throw std::runtime_error("short write to " + path);
}

struct GenModelArgs {
  int m = 10;
  int n = 1;
  double density = 0.1;
  int r = 0;  // 0: sparse inverse spectrum, > 0: sparse plus low rank
  double margin = 0.1;
  std::uint64_t seed = 1;
  std::string out = "model.json";
};

int run_gen_model(const GenModelArgs& args) {
  const GroundTruth truth =
      args.r > 0 ? random_latent_inverse(args.m, args.n, args.density, args.r,
                                         args.margin, args.seed)
                 : random_sparse_inverse(args.m, args.n, args.density,
                                         args.margin, args.seed);
  save_json_file(model_to_json(truth), args.out);
  std::cout << "wrote " << args.out << " (support "
            << truth.support.size() << " pairs, r = " << truth.r << ")\n";
  return 0;
}

struct SimulateArgs {
  std::string model;
  int length = 500;
  std::uint64_t seed = 1;
  int burnin = -1;
  std::string out = "y.csv";
};

int run_simulate(const SimulateArgs& args) {
  const GroundTruth truth = model_from_json(load_json_file(args.model));
  if (truth.ar.m == 0) {
    throw std::runtime_error("model file has no AR form to simulate");
  }
  const TimeSeries y = simulate(truth.ar, args.length, args.seed, args.burnin);
  write_timeseries_file(args.out, y);
  std::cout << "wrote " << args.out << " (" << y.length() << " x " << y.dim()
            << ")\n";
  return 0;
}

struct EstimateArgs {
  std::string mode = "sparse";
  std::string input;
  int order = 1;
  std::string config;
  std::string out = "estimate.json";
  std::string trace_out;
  bool do_demean = false;
};

int run_estimate(const EstimateArgs& args) {
  const TimeSeries raw = load_timeseries_file(args.input);
  const TimeSeries y = args.do_demean ? demean(raw) : raw;
  if (y.length() <= args.order) {
    throw std::runtime_error("series shorter than the requested order");
  }
  EBConfig cfg;
  if (!args.config.empty()) {
    cfg = eb_config_from_json(load_json_file(args.config));
  }
  const MatrixPoly rhat = covariance_lags(y, args.order);
  const double nn = y.length() - args.order;
  EstimateResult result;
  if (args.mode == "sparse") {
    result = run_sparse_eb(rhat, nn, cfg);
  } else if (args.mode == "latent") {
    result = run_latent_eb(rhat, nn, cfg);
  } else {
    throw std::runtime_error("unknown mode: " + args.mode);
  }
  save_json_file(estimate_to_json(result), args.out);
  if (!args.trace_out.empty()) {
    write_text_file(args.trace_out, [&](std::ostream& out) {
      write_trace_jsonl(result.trace, out);
    });
  }
  std::cout << "wrote " << args.out << " (outer " << result.outer_iterations
            << ", gap " << result.gap << ", converged "
            << (result.converged ? "yes" : "no") << ")\n";
  return 0;
}

struct MetricsArgs {
  std::string estimate;
  std::string truth;
  std::string out = "metrics.json";
  MetricOptions opts;
};

int run_metrics(const MetricsArgs& args) {
  const EstimateResult est = estimate_from_json(load_json_file(args.estimate));
  const GroundTruth truth = model_from_json(load_json_file(args.truth));
  const MetricReport report = evaluate_estimate(
      est.s, est.l ? &*est.l : nullptr, truth, args.opts);
  save_json_file(metrics_to_json(report), args.out);
  std::cout << "wrote " << args.out << " (e = " << report.e
            << ", e_sp = " << report.e_sp << ", C = " << report.c << ")\n";
  return 0;
}

struct BaselineArgs {
  std::string input;
  int order = 1;
  int points = 9;
  std::string mode = "sparse";
  std::string out = "scores.csv";
  std::string select_out;
  int workers = 0;
  bool do_demean = false;
};

int run_baseline_cmd(const BaselineArgs& args) {
  const TimeSeries raw = load_timeseries_file(args.input);
  const TimeSeries y = args.do_demean ? demean(raw) : raw;
  if (y.length() <= args.order) {
    throw std::runtime_error("series shorter than the requested order");
  }
  if (args.mode != "sparse" && args.mode != "latent") {
    throw std::runtime_error("unknown mode: " + args.mode);
  }
  const MatrixPoly rhat = covariance_lags(y, args.order);
  const double nn = y.length() - args.order;
  const BaselineRun run =
      run_baseline(rhat, nn, args.points, args.mode == "latent", {}, {},
                   resolve_workers(args.workers));
  write_text_file(args.out, [&](std::ostream& out) {
    write_scores_csv(run.selection, out);
  });
  if (!args.select_out.empty()) {
    save_json_file(estimate_to_json(run.best()), args.select_out);
  }
  std::cout << "wrote " << args.out << " (best index "
            << run.selection.best_index << " of " << run.grid.size() << ")\n";
  return 0;
}

struct MontecarloArgs {
  std::string preset;
  std::string config;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir;
  bool quiet = false;
};

int run_montecarlo_cmd(const MontecarloArgs& args) {
  ExperimentConfig cfg;
  if (!args.preset.empty()) cfg = preset_config(args.preset);
  if (!args.config.empty()) {
    Json base = experiment_config_to_json(cfg);
    base.merge_patch(load_json_file(args.config));
    cfg = experiment_config_from_json(base);
  }
  if (args.trials) cfg.trials = *args.trials;
  if (args.seed) cfg.seed = *args.seed;
  if (args.workers) cfg.workers = *args.workers;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  cfg.verbose = !args.quiet;

  std::filesystem::create_directories(cfg.out_dir);
  const MonteCarloResult result = run_montecarlo(cfg);
  const auto trials_path =
      (std::filesystem::path(cfg.out_dir) / "trials.csv").string();
  const auto summary_path =
      (std::filesystem::path(cfg.out_dir) / "summary.json").string();
  write_text_file(trials_path, [&](std::ostream& out) {
    write_trials_csv(result, out);
  });
  save_json_file(summary_to_json(result), summary_path);
  std::cout << "wrote " << trials_path << " and " << summary_path << " ("
            << result.failures << " failures)\n";
  return 0;
}

int run_selftest_cmd() {
  const auto results = run_selftest();
  bool all_pass = true;
  for (const auto& result : results) {
    std::cout << (result.pass ? "PASS" : "FAIL") << "  " << result.name
              << "  (" << result.detail << ")\n";
    all_pass = all_pass && result.pass;
  }
  std::cout << (all_pass ? "selftest passed" : "selftest FAILED") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "argraph: sparse and latent-variable AR graphical model estimation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenModelArgs gen_args;
  auto* gen = app.add_subcommand("gen-model",
                                 "Draw a synthetic model with known support");
  gen->add_option("--m", gen_args.m, "Process dimension")->required();
  gen->add_option("--n", gen_args.n, "AR order")->required();
  gen->add_option("--density", gen_args.density,
                  "Fraction of active off-diagonal pairs");
  gen->add_option("--r", gen_args.r, "Low-rank part rank (0 = none)");
  gen->add_option("--margin", gen_args.margin,
                  "Positivity margin of the inverse spectrum");
  gen->add_option("--seed", gen_args.seed, "Generator seed");
  gen->add_option("--out", gen_args.out, "Output model JSON path");

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate",
                                 "Sample a time series from a model file");
  sim->add_option("--model", sim_args.model, "Model JSON path")->required();
  sim->add_option("--length", sim_args.length, "Samples to keep")->required();
  sim->add_option("--seed", sim_args.seed, "Noise seed");
  sim->add_option("--burnin", sim_args.burnin,
                  "Warm-up samples to discard (-1 = automatic)");
  sim->add_option("--out", sim_args.out, "Output CSV path");

  EstimateArgs est_args;
  auto* est = app.add_subcommand(
      "estimate", "Reweighted estimate of the inverse spectrum from a CSV");
  est->add_option("--mode", est_args.mode, "sparse or latent")
      ->check(CLI::IsMember({"sparse", "latent"}));
  est->add_option("--input", est_args.input, "Time series CSV")->required();
  est->add_option("--order", est_args.order, "AR order n")->required();
  est->add_option("--config", est_args.config, "Config JSON (optional)");
  est->add_option("--out", est_args.out, "Output estimate JSON");
  est->add_option("--trace-out", est_args.trace_out,
                  "Outer-iteration trace (JSON lines, optional)");
  est->add_flag("--demean", est_args.do_demean,
                "Subtract per-channel sample means first");

  MetricsArgs met_args;
  auto* met = app.add_subcommand(
      "metrics", "Score an estimate file against a model file");
  met->add_option("--estimate", met_args.estimate, "Estimate JSON")
      ->required();
  met->add_option("--truth", met_args.truth, "Model JSON")->required();
  met->add_option("--out", met_args.out, "Output report JSON");
  met->add_option("--pc-threshold", met_args.opts.pc_threshold,
                  "Partial-coherence support threshold");
  met->add_option("--sv-threshold", met_args.opts.sv_threshold,
                  "Singular-value rank threshold");
  met->add_option("--grid", met_args.opts.gridsize, "Frequency grid size");

  BaselineArgs base_args;
  auto* base = app.add_subcommand(
      "baseline", "Fixed-weight grid ranked by the information criterion");
  base->add_option("--input", base_args.input, "Time series CSV")->required();
  base->add_option("--order", base_args.order, "AR order n")->required();
  base->add_option("--points", base_args.points, "Grid size (9 or 17)");
  base->add_option("--mode", base_args.mode, "sparse or latent")
      ->check(CLI::IsMember({"sparse", "latent"}));
  base->add_option("--out", base_args.out, "Score table CSV");
  base->add_option("--select-out", base_args.select_out,
                   "Selected estimate JSON (optional)");
  base->add_option("--workers", base_args.workers,
                   "Grid worker threads (0 = automatic)");
  base->add_flag("--demean", base_args.do_demean,
                 "Subtract per-channel sample means first");

  MontecarloArgs mc_args;
  auto* mc = app.add_subcommand("montecarlo",
                                "Run a seeded multi-trial experiment");
  mc->add_option("--preset", mc_args.preset,
                 "desk-sparse, desk-latent, paper-sparse-n1, paper-sparse-n2, "
                 "paper-latent-r2, paper-latent-r5");
  mc->add_option("--config", mc_args.config,
                 "Config JSON overlaying the preset");
  mc->add_option("--trials", mc_args.trials, "Override trial count");
  mc->add_option("--seed", mc_args.seed, "Override master seed");
  mc->add_option("--workers", mc_args.workers,
                 "Override worker count (ARGRAPH_WORKERS also applies)");
  mc->add_option("--out-dir", mc_args.out_dir, "Output directory");
  mc->add_flag("--quiet", mc_args.quiet, "Suppress per-trial progress");

  auto* self = app.add_subcommand(
      "selftest", "Cross-check solvers against reference implementations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_gen_model(gen_args);
    if (sim->parsed()) return run_simulate(sim_args);
    if (est->parsed()) return run_estimate(est_args);
    if (met->parsed()) return run_metrics(met_args);
    if (base->parsed()) return run_baseline_cmd(base_args);
    if (mc->parsed()) return run_montecarlo_cmd(mc_args);
    if (self->parsed()) return run_selftest_cmd();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
