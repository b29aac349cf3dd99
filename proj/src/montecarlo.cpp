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

#include "argraph/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "argraph/parallel.hpp"
#include "argraph/rng.hpp"
#include "argraph/version.hpp"

namespace argraph {

namespace {

constexpr std::uint64_t kSimulateSalt = 0x53494d;  // distinct child stream

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.mode != "sparse" && cfg.mode != "latent") {
    throw std::invalid_argument("unknown mode: " + cfg.mode);
  }
  if (cfg.trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  if (cfg.m < 1 || cfg.n < 0 || cfg.num_samples <= cfg.n) {
    throw std::invalid_argument("need m >= 1, n >= 0, N > n");
  }
  if (cfg.latent() && cfg.r < 1) {
    throw std::invalid_argument("latent mode needs r >= 1");
  }
  for (const auto& name : cfg.estimators) {
    if (name != "RW" && name != "TD9" && name != "TD17" && name != "fixed") {
      throw std::invalid_argument("unknown estimator: " + name);
    }
  }
  if (cfg.estimators.empty()) {
    throw std::invalid_argument("no estimators configured");
  }
}

EstimateResult dispatch_estimator(const std::string& name,
                                  const ExperimentConfig& cfg,
                                  const MatrixPoly& rhat, double nn) {
  if (name == "RW") {
    return cfg.latent() ? run_latent_eb(rhat, nn, cfg.eb)
                        : run_sparse_eb(rhat, nn, cfg.eb);
  }
  if (name == "TD9" || name == "TD17") {
    const int points = name == "TD9" ? 9 : 17;
    const SolverOptions opts;  // grid fits do not need EB-tight tolerances
    return run_baseline(rhat, nn, points, cfg.latent(), cfg.metrics, opts, 1)
        .best();
  }
  if (name == "fixed") {
    std::optional<double> gamma_l;
    if (cfg.latent()) gamma_l = cfg.fixed_gamma_l;
    return solve_fixed(rhat, nn, cfg.fixed_gamma, gamma_l);
  }
  throw std::invalid_argument("unknown estimator: " + name);
}

double mean_of(const std::vector<double>& values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Linear-interpolation quantile on sorted data.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t count = sorted.size();
  if (count == 1) return sorted[0];
  const double pos = q * static_cast<double>(count - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= count) return sorted[count - 1];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

Json box_to_json(const BoxStats& box) {
  const auto cell = [](double v) {
    return std::isfinite(v) ? Json(v) : Json(nullptr);
  };
  return Json{{"median", cell(box.median)},
              {"q1", cell(box.q1)},
              {"q3", cell(box.q3)},
              {"whisker_lo", cell(box.whisker_lo)},
              {"whisker_hi", cell(box.whisker_hi)},
              {"mean", cell(box.mean)},
              {"count", box.count}};
}

std::string csv_quote(const std::string& text) {
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig cfg;
  cfg.preset = name;
  if (name == "desk-sparse") {
    cfg.mode = "sparse";
    cfg.m = 10;
    cfg.n = 1;
    cfg.num_samples = 500;
    cfg.trials = 20;
    cfg.estimators = {"RW", "TD9", "TD17"};
  } else if (name == "desk-latent") {
    cfg.mode = "latent";
    cfg.m = 10;
    cfg.n = 1;
    cfg.num_samples = 1000;
    cfg.trials = 10;
    cfg.r = 2;
    cfg.estimators = {"RW", "TD9"};
  } else if (name == "paper-sparse-n1" || name == "paper-sparse-n2") {
    cfg.mode = "sparse";
    cfg.m = 30;
    cfg.n = name == "paper-sparse-n1" ? 1 : 2;
    cfg.num_samples = 500;
    cfg.trials = 200;
    cfg.estimators = {"RW", "TD9", "TD17"};
  } else if (name == "paper-latent-r2" || name == "paper-latent-r5") {
    cfg.mode = "latent";
    cfg.m = 30;
    cfg.n = 2;
    cfg.num_samples = 1000;
    cfg.trials = 200;
    cfg.r = name == "paper-latent-r2" ? 2 : 5;
    cfg.estimators = {"RW", "TD9", "TD17"};
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return cfg;
}

BoxStats box_stats(std::vector<double> values) {
  BoxStats box;
  box.count = static_cast<int>(values.size());
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    box.median = box.q1 = box.q3 = nan;
    box.whisker_lo = box.whisker_hi = box.mean = nan;
    return box;
  }
  box.mean = mean_of(values);
  std::sort(values.begin(), values.end());
  box.median = quantile_sorted(values, 0.5);
  box.q1 = quantile_sorted(values, 0.25);
  box.q3 = quantile_sorted(values, 0.75);
  const double reach = 1.5 * (box.q3 - box.q1);
  box.whisker_lo = values.back();
  box.whisker_hi = values.front();
  for (const double v : values) {
    if (v >= box.q1 - reach && v < box.whisker_lo) box.whisker_lo = v;
    if (v <= box.q3 + reach && v > box.whisker_hi) box.whisker_hi = v;
  }
  return box;
}

MonteCarloResult run_montecarlo(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const int estimator_count = static_cast<int>(cfg.estimators.size());
  MonteCarloResult result;
  result.config = cfg;
  result.records.resize(
      static_cast<std::size_t>(cfg.trials * estimator_count));
  std::vector<double> true_c(static_cast<std::size_t>(cfg.trials), 0.0);

  std::mutex progress_mutex;
  const auto run_trial = [&](int trial) {
    const std::uint64_t trial_seed = derive_seed(cfg.seed, trial);
    const double nn = cfg.num_samples - cfg.n;

    GroundTruth truth =
        cfg.latent()
            ? random_latent_inverse(cfg.m, cfg.n, cfg.density, cfg.r,
                                    cfg.margin, trial_seed)
            : random_sparse_inverse(cfg.m, cfg.n, cfg.density, cfg.margin,
                                    trial_seed);
    true_c[static_cast<std::size_t>(trial)] = complexity_of_truth(truth);
    const TimeSeries y = simulate(truth.ar, cfg.num_samples,
                                  derive_seed(trial_seed, kSimulateSalt));
    const MatrixPoly rhat = covariance_lags(y, cfg.n);

    for (int e = 0; e < estimator_count; ++e) {
      TrialRecord record;
      record.trial = trial;
      record.estimator = cfg.estimators[static_cast<std::size_t>(e)];
      const auto start = std::chrono::steady_clock::now();
      try {
        const EstimateResult est =
            dispatch_estimator(record.estimator, cfg, rhat, nn);
        record.report = evaluate_estimate(
            est.s, est.l ? &*est.l : nullptr, truth, cfg.metrics);
        record.iterations = est.inner_iterations;
        record.gap = est.gap;
      } catch (const std::exception& err) {
        record.failed = true;
        record.reason = err.what();
      }
      record.wall_ms =
          std::chrono::duration<double, std::milli>(
              std::chrono::steady_clock::now() - start)
              .count();
      result.records[static_cast<std::size_t>(trial * estimator_count + e)] =
          std::move(record);
    }
    if (cfg.verbose) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      std::cerr << "trial " << trial + 1 << "/" << cfg.trials << " done\n";
    }
  };
  parallel_for(cfg.trials, resolve_workers(cfg.workers), run_trial);

  result.true_mean_c = mean_of(true_c);
  for (int e = 0; e < estimator_count; ++e) {
    EstimatorSummary summary;
    summary.name = cfg.estimators[static_cast<std::size_t>(e)];
    std::vector<double> es;
    std::vector<double> esps;
    std::vector<double> esls;
    std::vector<double> cs;
    std::vector<double> ranks;
    for (int trial = 0; trial < cfg.trials; ++trial) {
      const TrialRecord& record =
          result.records[static_cast<std::size_t>(trial * estimator_count +
                                                  e)];
      if (record.failed) {
        ++summary.failures;
        continue;
      }
      es.push_back(record.report.e);
      esps.push_back(record.report.e_sp);
      if (record.report.e_sl) esls.push_back(*record.report.e_sl);
      cs.push_back(record.report.c);
      ranks.push_back(record.report.rank_hat);
    }
    summary.e = box_stats(std::move(es));
    summary.e_sp = box_stats(std::move(esps));
    if (!esls.empty()) summary.e_sl = box_stats(std::move(esls));
    summary.mean_c = mean_of(cs);
    summary.mean_rank = mean_of(ranks);
    result.failures += summary.failures;
    result.summaries.push_back(std::move(summary));
  }
  return result;
}

void write_trials_csv(const MonteCarloResult& result, std::ostream& out) {
  out << "trial,estimator,e,e_sp,e_sl,c,rank_hat,iterations,gap,wall_ms,"
         "failed,reason\n";
  for (const auto& record : result.records) {
    out << record.trial << ',' << record.estimator << ',';
    if (!record.failed) {
      out << format_double(record.report.e) << ','
          << format_double(record.report.e_sp) << ',';
      if (record.report.e_sl) out << format_double(*record.report.e_sl);
      out << ',' << format_double(record.report.c) << ','
          << record.report.rank_hat << ',' << record.iterations << ','
          << format_double(record.gap) << ',';
    } else {
      out << ",,,,," << record.iterations << ",,";
    }
    out << format_double(record.wall_ms) << ',' << (record.failed ? 1 : 0)
        << ',' << csv_quote(record.reason) << '\n';
  }
}

Json experiment_config_to_json(const ExperimentConfig& cfg) {
  return Json{{"mode", cfg.mode},
              {"m", cfg.m},
              {"n", cfg.n},
              {"N", cfg.num_samples},
              {"trials", cfg.trials},
              {"density", cfg.density},
              {"r", cfg.r},
              {"margin", cfg.margin},
              {"estimators", cfg.estimators},
              {"eb", eb_config_to_json(cfg.eb)},
              {"metrics", metric_options_to_json(cfg.metrics)},
              {"fixed_gamma", cfg.fixed_gamma},
              {"fixed_gamma_l", cfg.fixed_gamma_l},
              {"seed", cfg.seed},
              {"out_dir", cfg.out_dir},
              {"workers", cfg.workers},
              {"verbose", cfg.verbose},
              {"preset", cfg.preset}};
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  ExperimentConfig cfg;
  cfg.mode = j.value("mode", cfg.mode);
  cfg.m = j.value("m", cfg.m);
  cfg.n = j.value("n", cfg.n);
  cfg.num_samples = j.value("N", cfg.num_samples);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.density = j.value("density", cfg.density);
  cfg.r = j.value("r", cfg.r);
  cfg.margin = j.value("margin", cfg.margin);
  cfg.estimators = j.value("estimators", cfg.estimators);
  if (j.contains("eb")) cfg.eb = eb_config_from_json(j.at("eb"));
  if (j.contains("metrics")) {
    cfg.metrics = metric_options_from_json(j.at("metrics"));
  }
  cfg.fixed_gamma = j.value("fixed_gamma", cfg.fixed_gamma);
  cfg.fixed_gamma_l = j.value("fixed_gamma_l", cfg.fixed_gamma_l);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  cfg.workers = j.value("workers", cfg.workers);
  cfg.verbose = j.value("verbose", cfg.verbose);
  cfg.preset = j.value("preset", cfg.preset);
  return cfg;
}

Json summary_to_json(const MonteCarloResult& result) {
  Json estimators = Json::array();
  for (const auto& summary : result.summaries) {
    Json entry{{"name", summary.name},
               {"e", box_to_json(summary.e)},
               {"e_sp", box_to_json(summary.e_sp)},
               {"mean_c", std::isfinite(summary.mean_c)
                              ? Json(summary.mean_c)
                              : Json(nullptr)},
               {"mean_rank", std::isfinite(summary.mean_rank)
                                 ? Json(summary.mean_rank)
                                 : Json(nullptr)},
               {"failures", summary.failures}};
    entry["e_sl"] = summary.e_sl ? box_to_json(*summary.e_sl) : Json(nullptr);
    estimators.push_back(std::move(entry));
  }
  return Json{{"version", kVersion},
              {"csv_version", kTrialsCsvVersion},
              {"config", experiment_config_to_json(result.config)},
              {"true_mean_c", result.true_mean_c},
              {"failures", result.failures},
              {"estimators", std::move(estimators)}};
}

}  // namespace argraph
