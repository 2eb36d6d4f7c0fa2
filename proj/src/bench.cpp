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

#include "vqopt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "vqopt/errors.hpp"
#include "vqopt/hypertune.hpp"

namespace vqopt {

using nlohmann::json;

std::optional<double> convergence_time(const OptimizerTrace& trace, double optimum_score, double precision,
                                       double time_limit) {
  const auto& entries = trace.entries;
  std::size_t first_good = entries.size();
  for (std::size_t i = entries.size(); i-- > 0;) {
    if (!(std::abs(entries[i].exact_score - optimum_score) <= precision)) break;
    first_good = i;
  }
  if (first_good == entries.size()) return std::nullopt;
  const double t = entries[first_good].time;
  if (t > time_limit) return std::nullopt;
  return t;
}

void RunConfig::validate() const {
  if (seeds.empty()) throw std::invalid_argument("run config: seed list is empty");
  if (!(time_limit >= 0.0)) throw std::invalid_argument("run config: time limit must be >= 0");
  if (!(rotation_error >= 0.0) || !std::isfinite(rotation_error)) {
    throw std::invalid_argument("run config: rotation error must be >= 0");
  }
  if (precisions.empty()) throw std::invalid_argument("run config: no precision targets");
  for (double p : precisions) {
    if (!(p > 0.0)) throw std::invalid_argument("run config: precisions must be positive");
  }
  if (problem.p == 0) throw std::invalid_argument("run config: p must be >= 1");
  cost.validate();
}

Hyperparameters RunConfig::resolved_hyperparameters() const {
  Hyperparameters hp = hyperparameters ? *hyperparameters
                                       : default_hyperparameters(problem.kind, problem.p, optimizer);
  if (max_evals) hp["max_evals"] = static_cast<double>(*max_evals);
  return hp;
}

RunConfig default_run_config(const ProblemSpec& problem, OptimizerKind optimizer) {
  RunConfig c;
  c.problem = problem;
  c.optimizer = optimizer;
  c.time_limit = problem.kind == ProblemKind::Hubbard ? kHubbardTimeLimit : kQaoaTimeLimit;
  c.estimator = problem.kind == ProblemKind::Hubbard ? Estimator::GaussianModel : Estimator::SampledDiagonal;
  for (std::uint64_t s = 0; s < 50; ++s) c.seeds.push_back(s);
  return c;
}

namespace {

std::vector<std::uint64_t> parse_seeds(const json& j) {
  if (j.is_array()) return j.get<std::vector<std::uint64_t>>();
  if (j.is_object()) {
    const auto from = j.at("from").get<std::uint64_t>();
    const auto to = j.at("to").get<std::uint64_t>();
    if (to < from) throw std::invalid_argument("run config: empty seed range");
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = from; s <= to; ++s) out.push_back(s);
    return out;
  }
  throw std::invalid_argument("run config: seeds must be a list or {from, to}");
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw std::invalid_argument("run config: expected an object");
    if (doc.value("schema", 0) != 1) throw std::invalid_argument("run config: \"schema\" must be 1");
    static const std::vector<std::string> known = {"schema",    "problem",   "optimizer",  "hyperparameters",
                                                   "estimator", "rotation_error", "scenario", "cost", "seeds",
                                                   "time_limit", "max_evals", "precisions"};
    for (const auto& [key, value] : doc.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw std::invalid_argument("run config: unknown field '" + key + "'");
      }
    }
    const json& pj = doc.at("problem");
    ProblemSpec spec;
    spec.kind = parse_problem_kind(pj.at("kind").get<std::string>());
    spec.p = pj.value("p", 1u);
    spec.n = pj.value("n", 8u);
    spec.instance_seed = pj.value("instance_seed", std::uint64_t{0});

    RunConfig c = default_run_config(spec, parse_optimizer_kind(doc.at("optimizer").get<std::string>()));
    if (doc.contains("hyperparameters")) {
      const json& h = doc.at("hyperparameters");
      if (h.is_string()) {
        if (h.get<std::string>() != "defaults") {
          throw std::invalid_argument("run config: hyperparameters must be an object or \"defaults\"");
        }
      } else {
        c.hyperparameters = h.get<Hyperparameters>();
      }
    }
    if (doc.contains("estimator")) c.estimator = parse_estimator(doc.at("estimator").get<std::string>());
    c.rotation_error = doc.value("rotation_error", 0.0);
    if (doc.contains("scenario")) c.scenario = parse_scenario(doc.at("scenario").get<std::string>());
    if (doc.contains("cost")) {
      const json& cj = doc.at("cost");
      for (const auto& [key, value] : cj.items()) {
        if (key != "sampling_rate" && key != "switch_overhead" && key != "latency") {
          throw std::invalid_argument("run config: unknown cost field '" + key + "'");
        }
      }
      c.cost.sampling_rate = cj.value("sampling_rate", c.cost.sampling_rate);
      c.cost.switch_overhead = cj.value("switch_overhead", c.cost.switch_overhead);
      c.cost.latency = cj.value("latency", c.cost.latency);
    }
    if (doc.contains("seeds")) c.seeds = parse_seeds(doc.at("seeds"));
    c.time_limit = doc.value("time_limit", c.time_limit);
    if (doc.contains("max_evals")) c.max_evals = doc.at("max_evals").get<std::uint64_t>();
    if (doc.contains("precisions")) c.precisions = doc.at("precisions").get<std::vector<double>>();
    c.validate();
    if (c.hyperparameters) {
      // Key validation happens here so bad files fail before any run.
      validate_hyperparameters(c.optimizer, *c.hyperparameters);
    }
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("run config: ") + e.what());
  }
}

std::string run_config_to_json(const RunConfig& c) {
  json doc;
  doc["schema"] = 1;
  doc["problem"] = {{"kind", to_string(c.problem.kind)},
                    {"p", c.problem.p},
                    {"n", c.problem.n},
                    {"instance_seed", c.problem.instance_seed}};
  doc["optimizer"] = to_string(c.optimizer);
  doc["hyperparameters"] = c.hyperparameters ? json(*c.hyperparameters) : json("defaults");
  doc["estimator"] = to_string(c.estimator);
  doc["rotation_error"] = c.rotation_error;
  doc["scenario"] = to_string(c.scenario);
  doc["cost"] = {{"sampling_rate", c.cost.sampling_rate},
                 {"switch_overhead", c.cost.switch_overhead},
                 {"latency", c.cost.latency}};
  doc["seeds"] = c.seeds;
  doc["time_limit"] = c.time_limit;
  if (c.max_evals) doc["max_evals"] = *c.max_evals;
  doc["precisions"] = c.precisions;
  return doc.dump(2) + "\n";
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::vector<PrecisionStats> summarize(const RunConfig& config, double optimum_score,
                                      const std::vector<SeedRun>& runs) {
  std::vector<PrecisionStats> out;
  const double n = static_cast<double>(runs.size());
  for (double precision : config.precisions) {
    PrecisionStats s;
    s.precision = precision;
    std::vector<double> converged;
    for (const auto& r : runs) {
      auto t = convergence_time(r.trace, optimum_score, precision, config.time_limit);
      s.times.push_back(t);
      if (t) converged.push_back(*t);
    }
    s.successes = converged.size();
    s.success_prob = n > 0 ? static_cast<double>(s.successes) / n : 0.0;
    s.success_std = n > 0 ? std::sqrt(s.success_prob * (1.0 - s.success_prob) / n) : 0.0;
    if (!converged.empty() && s.success_prob >= kReportThreshold) {
      double mean = 0.0;
      for (double t : converged) mean += t;
      mean /= static_cast<double>(converged.size());
      double var = 0.0;
      for (double t : converged) var += (t - mean) * (t - mean);
      var = converged.size() > 1 ? var / static_cast<double>(converged.size() - 1) : 0.0;
      s.mean_time = mean;
      s.time_std = std::sqrt(var);
    }
    out.push_back(std::move(s));
  }
  return out;
}

RunSummary run_suite(const RunConfig& config, unsigned workers) {
  config.validate();
  const Hyperparameters hp = config.resolved_hyperparameters();
  validate_hyperparameters(config.optimizer, hp);
  if (config.optimizer == OptimizerKind::SGD && config.rotation_error > 0.0) {
    throw UnsupportedError("sgd does not support rotation error");
  }
  auto setup = make_problem(config.problem);
  CostModelParams cost = config.cost;
  cost.scenario = config.scenario;
  StopConditions stop;
  stop.time_limit = config.time_limit;

  RunSummary summary;
  summary.config = config;
  summary.optimum_score = setup->optimum.score;
  summary.runs.resize(config.seeds.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < summary.runs.size(); i = next++) {
      try {
        const std::uint64_t seed = config.seeds[i];
        ObjectiveEngine engine(setup, config.estimator, NoiseConfig{config.rotation_error}, seed);
        const Point x0 = initial_guess(*setup, seed);
        summary.runs[i] = {seed, run_optimizer(config.optimizer, engine, x0, hp, cost, stop, seed)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = summary.runs.size();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(config.seeds.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  summary.stats = summarize(config, summary.optimum_score, summary.runs);
  return summary;
}

const std::vector<double>& default_error_grid() {
  static const std::vector<double> grid = {0.001, 0.002, 0.005, 0.01, 0.02, 0.05};
  return grid;
}

std::vector<RunSummary> gate_error_sweep(const RunConfig& config, const std::vector<double>& errors,
                                         double precision, unsigned workers) {
  if (config.optimizer == OptimizerKind::SGD) {
    throw UnsupportedError("gate error sweeps are not supported for sgd");
  }
  if (errors.empty()) throw std::invalid_argument("gate_error_sweep: no error levels");
  std::vector<RunSummary> out;
  for (double eps : errors) {
    RunConfig c = config;
    c.rotation_error = eps;
    c.precisions = {precision};
    c.validate();
    out.push_back(run_suite(c, workers));
  }
  return out;
}

}  // namespace vqopt
