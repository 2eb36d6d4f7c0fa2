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
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vqopt/costmodel.hpp"
#include "vqopt/objective.hpp"
#include "vqopt/quadratic.hpp"
#include "vqopt/rng.hpp"
#include "vqopt/simd/kernels.hpp"

namespace vqopt {

enum class OptimizerKind { NelderMead, SPSA, SGD, MGD, MPG };

/// "nelder_mead", "spsa", "sgd", "mgd", "mpg".
std::string to_string(OptimizerKind kind);
/// Throws std::invalid_argument on unknown names.
OptimizerKind parse_optimizer_kind(const std::string& name);
const std::vector<OptimizerKind>& all_optimizer_kinds();

/// Flat key-value hyperparameters, validated per optimizer.
using Hyperparameters = std::map<std::string, double>;

/// Accepted keys, including the common "max_evals".
const std::vector<std::string>& hyperparameter_keys(OptimizerKind kind);

struct StopConditions {
  std::uint64_t max_evals = std::numeric_limits<std::uint64_t>::max();
  double time_limit = std::numeric_limits<double>::infinity();
};

struct TraceEntry {
  double time = 0.0;  // simulated seconds after the iteration's queries
  std::vector<double> candidate;
  double exact_score = 0.0;
  QueryRecord cumulative;
  std::uint64_t evals = 0;
};

struct OptimizerTrace {
  std::vector<TraceEntry> entries;
  QueryRecord totals;
  double total_time = 0.0;
  std::string stop_reason;
};

/// Budget-checked access to an objective plus the time ledger and trace of
/// one run. Every circuit counts as one objective evaluation.
class RunContext {
 public:
  RunContext(Objective& objective, CostModelParams cost, StopConditions stop);

  Objective& objective() { return objective_; }
  const TimeLedger& ledger() const { return ledger_; }
  std::uint64_t evals() const { return evals_; }
  bool stopped() const { return !stop_reason_.empty(); }
  void stop(std::string reason);

  /// Whether a query of this size fits the evaluation and time budgets.
  bool can_afford(const QueryRecord& query) const;

  /// Issues one batch; nullopt (and the run stops) when it does not fit.
  std::optional<std::vector<double>> evaluate(const std::vector<Point>& points, std::uint64_t shots);
  std::optional<std::vector<double>> gradient(std::span<const double> point, std::uint64_t shots);

  /// Appends a trace entry scored with the objective's exact score.
  void record(std::span<const double> candidate);

  OptimizerTrace finish();

 private:
  Objective& objective_;
  CostModelParams cost_;
  StopConditions limits_;
  TimeLedger ledger_;
  std::uint64_t evals_ = 0;
  std::string stop_reason_;
  OptimizerTrace trace_;
};

struct NelderMeadParams {
  std::uint64_t shots = 25000;
  double simplex_scale = 0.1;  // delta
  static NelderMeadParams from_map(const Hyperparameters& hp);
};

struct SpsaParams {
  std::uint64_t shots = 25000;
  double rate = 0.01;                // a
  double perturbation = 0.02;        // c
  double rate_decay = 0.602;         // alpha
  double stability = 0.0;            // A
  double perturbation_decay = 0.101; // gamma
  static SpsaParams from_map(const Hyperparameters& hp);
};

struct SgdParams {
  std::uint64_t shots = 1000;
  double rate = 0.01;   // gamma
  double decay = 0.0;   // beta
  static SgdParams from_map(const Hyperparameters& hp);
};

struct MgdParams {
  std::uint64_t shots = 1000;
  double rate = 0.1;            // gamma
  double sample_radius = 0.05;  // delta
  double sample_ratio = 1.0;    // eta, k = floor(eta (d+1)(d+2)/2)
  std::uint64_t sample_number = 0;  // k; overrides eta when nonzero
  double rate_decay = 0.0;      // alpha
  double stability = 0.0;      // A
  double radius_decay = 0.0;    // xi
  double tolerance = 0.0;       // epsilon; 0 disables the stopping test
  std::size_t samples_for(std::size_t d) const;
  static MgdParams from_map(const Hyperparameters& hp);
};

struct MpgParams {
  std::uint64_t shots = 5000;
  double rate = 0.01;           // gamma
  double rate_decay = 0.96;     // alpha, applied as alpha^(i / decay_steps)
  double log_sigma0 = -4.0;     // log of the initial standard deviation
  std::uint64_t sample_number = 10;  // k
  double radius_ratio = 2.0;    // delta_r
  std::uint64_t warmup = 5;     // t_warm
  double decay_steps = 5.0;     // t_decay
  std::uint64_t model_samples = 65536;  // M
  static MpgParams from_map(const Hyperparameters& hp);
};

/// Nelder-Mead with reflection 1, expansion 2, contraction 1/2 and shrink
/// 1/2. Vertex i of the initial simplex scales coordinate i by (1 + delta),
/// or adds delta when that coordinate is zero. One circuit per batch.
OptimizerTrace nelder_mead_minimize(RunContext& ctx, std::span<const double> x0,
                                    const NelderMeadParams& hp);

/// c_j = c / j^gamma, a_j = a / (j + A)^alpha, j = 1, 2, ...
OptimizerTrace spsa_minimize(RunContext& ctx, std::span<const double> x0, const SpsaParams& hp, Rng& rng);

/// theta_{j+1} = theta_j - gamma exp(-beta j) g_j, j = 0, 1, ... with
/// parameter-shift gradients.
OptimizerTrace sgd_minimize(RunContext& ctx, std::span<const double> x0, const SgdParams& hp);

/// Model gradient descent: sample the delta'-ball around the incumbent, fit
/// a quadratic to history inside it and step along its gradient.
OptimizerTrace mgd_minimize(RunContext& ctx, std::span<const double> x0, const MgdParams& hp, Rng& rng);

/// Model policy gradient over a diagonal Gaussian policy (mu, log sigma)
/// updated with Adam.
OptimizerTrace mpg_minimize(RunContext& ctx, std::span<const double> x0, const MpgParams& hp, Rng& rng);

/// Throws std::invalid_argument for unknown keys or out-of-range values.
void validate_hyperparameters(OptimizerKind kind, const Hyperparameters& hp);

/// Dispatches on kind after validating hyperparameters; "max_evals" in `hp`
/// tightens stop.max_evals. Optimizer randomness comes from its own
/// substream of `seed`.
OptimizerTrace run_optimizer(OptimizerKind kind, Objective& objective, std::span<const double> x0,
                             const Hyperparameters& hp, const CostModelParams& cost,
                             StopConditions stop, std::uint64_t seed);

// Building blocks, exposed for testing.

/// g_k = (f_plus - f_minus) / (2 c) * delta_k (delta_k = +-1).
std::vector<double> spsa_gradient_estimate(double f_plus, double f_minus, double c,
                                           std::span<const double> delta);

/// Uniform sample from the open ball of the given radius around center.
std::vector<double> sample_ball(std::span<const double> center, double radius, Rng& rng);

/// d log N(x; mu, sigma) / d mu = (x - mu) / sigma^2.
std::vector<double> policy_score_mean(std::span<const double> x, std::span<const double> mu,
                                      std::span<const double> sigma);
/// d log N(x; mu, sigma) / d log sigma = (x - mu)^2 / sigma^2 - 1.
std::vector<double> policy_score_log_sigma(std::span<const double> x, std::span<const double> mu,
                                           std::span<const double> sigma);

struct PolicyGradient {
  std::vector<double> mean;
  std::vector<double> log_sigma;
};

/// Score-function gradient of E[f] over samples x_i = mu + sigma z_i with
/// the sample-mean baseline. A constant f gives exactly zero.
PolicyGradient sample_policy_gradient(const std::vector<std::vector<double>>& z,
                                      std::span<const double> values, std::span<const double> sigma);

/// The same estimator over M model samples drawn from `stream` and evaluated
/// on the surrogate, with the baseline taken over those samples.
PolicyGradient model_policy_gradient(const QuadraticSurrogate& model, std::span<const double> mu,
                                     std::span<const double> sigma, std::uint64_t samples,
                                     simd::NormalStream& stream);

}  // namespace vqopt
