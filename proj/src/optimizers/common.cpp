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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vqopt/optimizers.hpp"

namespace vqopt {
namespace {

void reject_unknown(OptimizerKind kind, const Hyperparameters& hp) {
  const auto& keys = hyperparameter_keys(kind);
  for (const auto& [key, value] : hp) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw std::invalid_argument("unknown hyperparameter '" + key + "' for " + to_string(kind));
    }
    if (!std::isfinite(value)) throw std::invalid_argument("hyperparameter '" + key + "' is not finite");
  }
}

double get(const Hyperparameters& hp, const std::string& key, double fallback) {
  auto it = hp.find(key);
  return it == hp.end() ? fallback : it->second;
}

std::uint64_t get_count(const Hyperparameters& hp, const std::string& key, std::uint64_t fallback) {
  auto it = hp.find(key);
  if (it == hp.end()) return fallback;
  if (it->second < 0.0 || it->second != std::floor(it->second)) {
    throw std::invalid_argument("hyperparameter '" + key + "' must be a nonnegative integer");
  }
  return static_cast<std::uint64_t>(it->second);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

std::string to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::NelderMead: return "nelder_mead";
    case OptimizerKind::SPSA: return "spsa";
    case OptimizerKind::SGD: return "sgd";
    case OptimizerKind::MGD: return "mgd";
    case OptimizerKind::MPG: return "mpg";
  }
  return "unknown";
}

OptimizerKind parse_optimizer_kind(const std::string& name) {
  for (auto kind : all_optimizer_kinds()) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown optimizer '" + name + "'");
}

const std::vector<OptimizerKind>& all_optimizer_kinds() {
  static const std::vector<OptimizerKind> kinds = {OptimizerKind::NelderMead, OptimizerKind::SPSA,
                                                   OptimizerKind::SGD, OptimizerKind::MGD,
                                                   OptimizerKind::MPG};
  return kinds;
}

const std::vector<std::string>& hyperparameter_keys(OptimizerKind kind) {
  static const std::vector<std::string> nm = {"shots", "simplex_scale", "max_evals"};
  static const std::vector<std::string> spsa = {"shots",     "rate",               "perturbation",
                                                "rate_decay", "stability",         "perturbation_decay",
                                                "max_evals"};
  static const std::vector<std::string> sgd = {"shots", "rate", "decay", "max_evals"};
  static const std::vector<std::string> mgd = {"shots",      "rate",      "sample_radius",
                                               "sample_ratio", "sample_number", "rate_decay",
                                               "stability",  "radius_decay", "tolerance",
                                               "max_evals"};
  static const std::vector<std::string> mpg = {"shots",       "rate",         "rate_decay",
                                               "log_sigma0",  "sample_number", "radius_ratio",
                                               "warmup",      "decay_steps",  "model_samples",
                                               "max_evals"};
  switch (kind) {
    case OptimizerKind::NelderMead: return nm;
    case OptimizerKind::SPSA: return spsa;
    case OptimizerKind::SGD: return sgd;
    case OptimizerKind::MGD: return mgd;
    case OptimizerKind::MPG: return mpg;
  }
  return nm;
}

NelderMeadParams NelderMeadParams::from_map(const Hyperparameters& hp) {
  reject_unknown(OptimizerKind::NelderMead, hp);
  NelderMeadParams p;
  p.shots = get_count(hp, "shots", p.shots);
  p.simplex_scale = get(hp, "simplex_scale", p.simplex_scale);
  require(p.shots >= 1, "shots must be >= 1");
  require(p.simplex_scale != 0.0, "simplex_scale must be nonzero");
  return p;
}

SpsaParams SpsaParams::from_map(const Hyperparameters& hp) {
  reject_unknown(OptimizerKind::SPSA, hp);
  SpsaParams p;
  p.shots = get_count(hp, "shots", p.shots);
  p.rate = get(hp, "rate", p.rate);
  p.perturbation = get(hp, "perturbation", p.perturbation);
  p.rate_decay = get(hp, "rate_decay", p.rate_decay);
  p.stability = get(hp, "stability", p.stability);
  p.perturbation_decay = get(hp, "perturbation_decay", p.perturbation_decay);
  require(p.shots >= 1, "shots must be >= 1");
  require(p.rate >= 0.0, "rate must be >= 0");
  require(p.perturbation > 0.0, "perturbation must be positive");
  require(p.stability >= 0.0, "stability must be >= 0");
  return p;
}

SgdParams SgdParams::from_map(const Hyperparameters& hp) {
  reject_unknown(OptimizerKind::SGD, hp);
  SgdParams p;
  p.shots = get_count(hp, "shots", p.shots);
  p.rate = get(hp, "rate", p.rate);
  p.decay = get(hp, "decay", p.decay);
  require(p.shots >= 1, "shots must be >= 1");
  require(p.rate >= 0.0, "rate must be >= 0");
  return p;
}

std::size_t MgdParams::samples_for(std::size_t d) const {
  if (sample_number > 0) return sample_number;
  const auto k = static_cast<std::size_t>(std::floor(sample_ratio * static_cast<double>(quadratic_feature_count(d))));
  return std::max<std::size_t>(k, 1);
}

MgdParams MgdParams::from_map(const Hyperparameters& hp) {
  reject_unknown(OptimizerKind::MGD, hp);
  MgdParams p;
  p.shots = get_count(hp, "shots", p.shots);
  p.rate = get(hp, "rate", p.rate);
  p.sample_radius = get(hp, "sample_radius", p.sample_radius);
  p.sample_ratio = get(hp, "sample_ratio", p.sample_ratio);
  p.sample_number = get_count(hp, "sample_number", p.sample_number);
  p.rate_decay = get(hp, "rate_decay", p.rate_decay);
  p.stability = get(hp, "stability", p.stability);
  p.radius_decay = get(hp, "radius_decay", p.radius_decay);
  p.tolerance = get(hp, "tolerance", p.tolerance);
  require(p.shots >= 1, "shots must be >= 1");
  require(p.rate >= 0.0, "rate must be >= 0");
  require(p.sample_radius > 0.0, "sample_radius must be positive");
  require(p.sample_ratio > 0.0, "sample_ratio must be positive");
  require(p.stability >= 0.0, "stability must be >= 0");
  require(p.tolerance >= 0.0, "tolerance must be >= 0");
  return p;
}

MpgParams MpgParams::from_map(const Hyperparameters& hp) {
  reject_unknown(OptimizerKind::MPG, hp);
  MpgParams p;
  p.shots = get_count(hp, "shots", p.shots);
  p.rate = get(hp, "rate", p.rate);
  p.rate_decay = get(hp, "rate_decay", p.rate_decay);
  p.log_sigma0 = get(hp, "log_sigma0", p.log_sigma0);
  p.sample_number = get_count(hp, "sample_number", p.sample_number);
  p.radius_ratio = get(hp, "radius_ratio", p.radius_ratio);
  p.warmup = get_count(hp, "warmup", p.warmup);
  p.decay_steps = get(hp, "decay_steps", p.decay_steps);
  p.model_samples = get_count(hp, "model_samples", p.model_samples);
  require(p.shots >= 1, "shots must be >= 1");
  require(p.rate >= 0.0, "rate must be >= 0");
  require(p.sample_number >= 2, "sample_number must be >= 2");
  require(p.radius_ratio > 0.0, "radius_ratio must be positive");
  require(p.decay_steps > 0.0, "decay_steps must be positive");
  require(p.rate_decay > 0.0, "rate_decay must be positive");
  require(p.model_samples >= 1, "model_samples must be >= 1");
  return p;
}

RunContext::RunContext(Objective& objective, CostModelParams cost, StopConditions stop)
    : objective_(objective), cost_(cost), limits_(stop) {
  cost_.validate();
}

void RunContext::stop(std::string reason) {
  if (stop_reason_.empty()) stop_reason_ = std::move(reason);
}

bool RunContext::can_afford(const QueryRecord& query) const {
  if (stopped()) return false;
  if (query.circuits > limits_.max_evals || evals_ > limits_.max_evals - query.circuits) return false;
  return ledger_.total_seconds() + query_time(query, cost_) <= limits_.time_limit;
}

std::optional<std::vector<double>> RunContext::evaluate(const std::vector<Point>& points,
                                                        std::uint64_t shots) {
  const QueryRecord planned{shots * points.size(), points.size(), 1};
  if (!can_afford(planned)) {
    stop("budget");
    return std::nullopt;
  }
  BatchResult r = objective_.evaluate(points, shots);
  ledger_.accumulate(r.record, cost_);
  evals_ += r.record.circuits;
  return std::move(r.values);
}

std::optional<std::vector<double>> RunContext::gradient(std::span<const double> point, std::uint64_t shots) {
  const std::uint64_t circuits = objective_.gradient_circuits();
  const QueryRecord planned{shots * circuits, circuits, 1};
  if (circuits == 0) {
    // Let the objective report why gradients are unavailable.
    objective_.gradient(point, shots);
  }
  if (!can_afford(planned)) {
    stop("budget");
    return std::nullopt;
  }
  GradientResult r = objective_.gradient(point, shots);
  ledger_.accumulate(r.record, cost_);
  evals_ += r.record.circuits;
  return std::move(r.gradient);
}

void RunContext::record(std::span<const double> candidate) {
  TraceEntry e;
  e.time = ledger_.total_seconds();
  e.candidate.assign(candidate.begin(), candidate.end());
  e.exact_score = objective_.exact_score(candidate);
  e.cumulative = ledger_.totals();
  e.evals = evals_;
  trace_.entries.push_back(std::move(e));
}

OptimizerTrace RunContext::finish() {
  trace_.totals = ledger_.totals();
  trace_.total_time = ledger_.total_seconds();
  trace_.stop_reason = stop_reason_.empty() ? "completed" : stop_reason_;
  return std::move(trace_);
}

void validate_hyperparameters(OptimizerKind kind, const Hyperparameters& hp) {
  reject_unknown(kind, hp);
  if (hp.count("max_evals")) get_count(hp, "max_evals", 0);
  switch (kind) {
    case OptimizerKind::NelderMead: NelderMeadParams::from_map(hp); break;
    case OptimizerKind::SPSA: SpsaParams::from_map(hp); break;
    case OptimizerKind::SGD: SgdParams::from_map(hp); break;
    case OptimizerKind::MGD: MgdParams::from_map(hp); break;
    case OptimizerKind::MPG: MpgParams::from_map(hp); break;
  }
}

OptimizerTrace run_optimizer(OptimizerKind kind, Objective& objective, std::span<const double> x0,
                             const Hyperparameters& hp, const CostModelParams& cost,
                             StopConditions stop, std::uint64_t seed) {
  if (x0.size() != objective.dimension()) throw std::invalid_argument("x0 dimension mismatch");
  reject_unknown(kind, hp);
  if (hp.count("max_evals")) {
    stop.max_evals = std::min<std::uint64_t>(stop.max_evals, get_count(hp, "max_evals", 0));
  }
  Rng rng = make_rng(seed, Stream::Optimizer);
  RunContext ctx(objective, cost, stop);
  switch (kind) {
    case OptimizerKind::NelderMead: return nelder_mead_minimize(ctx, x0, NelderMeadParams::from_map(hp));
    case OptimizerKind::SPSA: return spsa_minimize(ctx, x0, SpsaParams::from_map(hp), rng);
    case OptimizerKind::SGD: return sgd_minimize(ctx, x0, SgdParams::from_map(hp));
    case OptimizerKind::MGD: return mgd_minimize(ctx, x0, MgdParams::from_map(hp), rng);
    case OptimizerKind::MPG: return mpg_minimize(ctx, x0, MpgParams::from_map(hp), rng);
  }
  throw std::invalid_argument("unknown optimizer kind");
}

}  // namespace vqopt
