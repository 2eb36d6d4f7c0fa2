// Copyright 2026 The vqopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vqopt/costmodel.hpp"
#include "vqopt/objective.hpp"
#include "vqopt/optimizers.hpp"
#include "vqopt/problems.hpp"

namespace vqopt {

/// Earliest trace time after which every candidate scores within
/// `precision` of `optimum_score`; nullopt if there is none, or if it lies
/// beyond `time_limit`.
std::optional<double> convergence_time(const OptimizerTrace& trace, double optimum_score, double precision,
                                       double time_limit = std::numeric_limits<double>::infinity());

inline constexpr double kQaoaTimeLimit = 1500.0;
inline constexpr double kHubbardTimeLimit = 86400.0;

/// One experiment: a problem, an optimizer and a noise/cost setting run
/// over a list of seeds.
struct RunConfig {
  ProblemSpec problem;
  OptimizerKind optimizer = OptimizerKind::SPSA;
  /// nullopt selects the shipped tuned values for (problem, p, optimizer).
  std::optional<Hyperparameters> hyperparameters;
  Estimator estimator = Estimator::SampledDiagonal;  // Gaussian for Hubbard
  double rotation_error = 0.0;
  Scenario scenario = Scenario::LatencyWithBatching;
  /// s, r and l; the scenario field above overrides cost.scenario.
  CostModelParams cost;
  std::vector<std::uint64_t> seeds;  // 0..49 by default
  double time_limit = kQaoaTimeLimit;
  std::optional<std::uint64_t> max_evals;
  std::vector<double> precisions = {1e-3};

  /// Throws std::invalid_argument on an empty seed list, a negative time
  /// limit, negative rotation error or nonpositive precisions.
  void validate() const;
  Hyperparameters resolved_hyperparameters() const;
  bool operator==(const RunConfig&) const = default;
};

/// Defaults for a problem: seeds 0..49, the problem's time limit and its
/// default estimator.
RunConfig default_run_config(const ProblemSpec& problem, OptimizerKind optimizer);

/// JSON with "schema": 1. Missing fields take the defaults above; the
/// "hyperparameters" field is an object or the string "defaults".
RunConfig parse_run_config(std::string_view json);
std::string run_config_to_json(const RunConfig& config);
/// Throws IoError when the file cannot be read.
RunConfig load_run_config(const std::filesystem::path& path);

struct SeedRun {
  std::uint64_t seed = 0;
  OptimizerTrace trace;
};

struct PrecisionStats {
  double precision = 0.0;
  std::size_t successes = 0;
  double success_prob = 0.0;
  double success_std = 0.0;  // sqrt(p (1 - p) / n)
  /// Over converged runs; set only when success_prob >= 0.75.
  std::optional<double> mean_time;
  std::optional<double> time_std;
  std::vector<std::optional<double>> times;  // per seed, config order

  bool operator==(const PrecisionStats&) const = default;
};

/// Share of converged seeds needed before times are reported.
inline constexpr double kReportThreshold = 0.75;

struct RunSummary {
  RunConfig config;
  double optimum_score = 0.0;
  std::vector<SeedRun> runs;  // config seed order
  std::vector<PrecisionStats> stats;  // config precision order
};

/// Computes per-precision statistics from the runs.
std::vector<PrecisionStats> summarize(const RunConfig& config, double optimum_score,
                                      const std::vector<SeedRun>& runs);

/// Runs every seed (in parallel over `workers` threads) and summarizes.
/// Configuration errors are raised before any run starts; SGD with
/// rotation error is rejected with UnsupportedError.
RunSummary run_suite(const RunConfig& config, unsigned workers = 1);

/// Default gate-error levels.
const std::vector<double>& default_error_grid();

/// run_suite at each rotation error level with the hyperparameters of
/// `config` unchanged and a single precision target.
std::vector<RunSummary> gate_error_sweep(const RunConfig& config, const std::vector<double>& errors,
                                         double precision = 5e-3, unsigned workers = 1);

// Reports. traces.jsonl holds, per summary, one "run" record followed by
// one "candidate" record per trace entry:
//   {"type":"candidate","seed","wall_time_s","params","exact_score",
//    "cumulative_shots","cumulative_circuits"}
// summary.csv has one row per (summary, precision) with columns
//   problem,p,optimizer,scenario,epsilon,precision,seeds,successes,
//   success_prob,success_std,mean_time_s,time_std_s
// (empty time cells when not reported). SVG charts are written alongside.

void write_traces_jsonl(const std::vector<RunSummary>& summaries, const std::filesystem::path& path);
/// Rebuilds summaries (statistics recomputed from the candidates).
std::vector<RunSummary> read_traces_jsonl(const std::filesystem::path& path);
std::string summary_csv(const std::vector<RunSummary>& summaries);

/// Writes traces.jsonl, summary.csv and the charts into `dir`, creating it
/// if needed. Throws std::invalid_argument for no summaries and IoError when
/// the directory or a file cannot be written.
void emit_reports(const std::vector<RunSummary>& summaries, const std::filesystem::path& dir);
/// summary.csv and the charts only, from existing summaries.
void emit_summary_files(const std::vector<RunSummary>& summaries, const std::filesystem::path& dir);

/// Names of the chart files emit_reports writes.
const std::vector<std::string>& chart_files();

}  // namespace vqopt
