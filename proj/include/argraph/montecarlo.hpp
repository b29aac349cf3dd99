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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "argraph/baseline.hpp"
#include "argraph/serialize.hpp"

namespace argraph {

inline constexpr int kTrialsCsvVersion = 1;

// Full description of one Monte Carlo experiment.  Estimator names: "RW"
// (reweighted empirical-Bayes loop), "TD9"/"TD17" (fixed-weight grids of 9
// and 17 points ranked by the information criterion), "fixed" (single solve
// at fixed_gamma / fixed_gamma_l).
struct ExperimentConfig {
  std::string mode = "sparse";  // "sparse" | "latent"
  int m = 10;
  int n = 1;
  int num_samples = 500;  // N; estimators see nn = N - n
  int trials = 20;
  double density = 0.1;
  int r = 2;           // latent rank (latent mode only)
  double margin = 0.1;  // generator positivity margin on the grid
  std::vector<std::string> estimators = {"RW", "TD9", "TD17"};
  EBConfig eb;
  MetricOptions metrics;
  double fixed_gamma = 1.0;
  double fixed_gamma_l = 1.0;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int workers = 0;  // 0: ARGRAPH_WORKERS env, else hardware concurrency
  bool verbose = false;
  std::string preset;  // echo of the preset that built this config, if any

  bool latent() const { return mode == "latent"; }
};

// Named configurations: desk-sparse, desk-latent (CI scale) and
// paper-sparse-n1, paper-sparse-n2, paper-latent-r2, paper-latent-r5
// (full scale: m = 30, 200 trials).  Throws on unknown names.
ExperimentConfig preset_config(const std::string& name);

struct TrialRecord {
  int trial = 0;
  std::string estimator;
  bool failed = false;
  std::string reason;
  MetricReport report;
  int iterations = 0;  // gradient steps over all solves of the estimator
  double gap = 0.0;
  double wall_ms = 0.0;
};

// Tukey boxplot numbers: quartiles by linear interpolation, whiskers the
// extreme values within 1.5 IQR of the box.  Empty input yields NaNs and
// count 0.
struct BoxStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  double mean = 0.0;
  int count = 0;
};
BoxStats box_stats(std::vector<double> values);

struct EstimatorSummary {
  std::string name;
  BoxStats e;
  BoxStats e_sp;
  std::optional<BoxStats> e_sl;
  double mean_c = 0.0;
  double mean_rank = 0.0;
  int failures = 0;
};

struct MonteCarloResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;  // trial-major, estimator order fixed
  std::vector<EstimatorSummary> summaries;
  double true_mean_c = 0.0;  // mean complexity of the generated models
  int failures = 0;
};

// Runs cfg.trials independent trials (parallel across workers): generate a
// model from (seed, trial), simulate N samples, estimate with every
// configured estimator, score against the truth.  A failing estimator run
// is recorded with its reason and does not abort the experiment.
MonteCarloResult run_montecarlo(const ExperimentConfig& cfg);

// Header: trial,estimator,e,e_sp,e_sl,c,rank_hat,iterations,gap,wall_ms,
// failed,reason.  Deterministic except for the wall_ms column.
void write_trials_csv(const MonteCarloResult& result, std::ostream& out);

Json experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const Json& j);

// Summary with config echo, version, per-estimator boxplot statistics and
// mean complexities; recomputable from the trials CSV.
Json summary_to_json(const MonteCarloResult& result);

}  // namespace argraph
