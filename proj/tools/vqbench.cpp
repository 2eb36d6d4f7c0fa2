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

// vqbench: command-line runner for optimizer benchmarks.
//
// Exit codes: 0 success, 2 invalid configuration or arguments, 3 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vqopt/bench.hpp"
#include "vqopt/errors.hpp"
#include "vqopt/hypertune.hpp"

namespace {

using namespace vqopt;

constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) return {std::stoull(text)};
    const auto a = std::stoull(text.substr(0, dots));
    const auto b = std::stoull(text.substr(dots + 2));
    if (b < a) throw std::invalid_argument("empty seed range " + text);
    std::vector<std::uint64_t> out;
    for (auto s = a; s <= b; ++s) out.push_back(s);
    return out;
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad seed range '" + text + "', expected a..b");
  }
}

struct Overrides {
  std::string seeds;
  std::string scenario;
  std::optional<double> time_limit;
  unsigned parallel = 1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--seeds", seeds, "seed range a..b (inclusive)");
    cmd->add_option("--scenario", scenario, "cost scenario")->check(CLI::IsMember({"zero", "batch", "nobatch"}));
    cmd->add_option("--time-limit", time_limit, "simulated time limit in seconds");
    cmd->add_option("--parallel", parallel, "worker threads")->check(CLI::PositiveNumber);
  }

  void apply(RunConfig& c) const {
    if (!seeds.empty()) c.seeds = parse_seed_range(seeds);
    if (!scenario.empty()) c.scenario = parse_scenario(scenario);
    if (time_limit) c.time_limit = *time_limit;
    c.validate();
  }
};

void write_problem(const ProblemSpec& spec, const std::string& out) {
  const std::string path = out + "/problem.json";
  std::ofstream f(path);
  if (!f || !(f << problem_to_json(*make_problem(spec)))) throw IoError("cannot write " + path);
}

int cmd_run(const std::string& config_path, const std::string& out, const Overrides& o) {
  RunConfig c = load_run_config(config_path);
  o.apply(c);
  const auto summary = run_suite(c, o.parallel);
  emit_reports({summary}, out);
  write_problem(c.problem, out);
  std::cout << summary_csv({summary});
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out, const Overrides& o, const std::string& kind,
              std::vector<double> errors, const std::vector<double>& precisions,
              const std::vector<std::string>& scenarios) {
  RunConfig base = load_run_config(config_path);
  o.apply(base);
  std::vector<RunSummary> summaries;
  if (kind == "error") {
    if (errors.empty()) errors = default_error_grid();
    const double precision = precisions.empty() ? 5e-3 : precisions.front();
    summaries = gate_error_sweep(base, errors, precision, o.parallel);
  } else if (kind == "precision") {
    if (!precisions.empty()) base.precisions = precisions;
    summaries.push_back(run_suite(base, o.parallel));
  } else {
    for (const auto& name : scenarios.empty() ? std::vector<std::string>{"zero", "batch", "nobatch"} : scenarios) {
      RunConfig c = base;
      c.scenario = parse_scenario(name);
      if (!precisions.empty()) c.precisions = precisions;
      summaries.push_back(run_suite(c, o.parallel));
    }
  }
  emit_reports(summaries, out);
  write_problem(base.problem, out);
  std::cout << summary_csv(summaries);
  return 0;
}

int cmd_tune(const std::string& problem, unsigned p, const std::string& optimizer, double precision,
             const std::string& mode, std::size_t budget, std::optional<double> limit, unsigned parallel,
             const std::string& out) {
  ProblemSpec spec;
  spec.kind = parse_problem_kind(problem);
  spec.p = p;
  const auto kind = parse_optimizer_kind(optimizer);
  const auto& space = search_space(kind, space_family(spec.kind));
  const double time_limit =
      limit.value_or(spec.kind == ProblemKind::Hubbard ? kHubbardTimeLimit : kQaoaTimeLimit);
  TuneOptions options;
  options.mode = mode == "grid" ? SearchMode::Grid
                 : mode == "random" ? SearchMode::Random
                                    : default_search_mode(space);
  options.budget = budget;
  options.precision = precision;
  options.threads = parallel;
  const auto result = search(space, kind, make_tune_case(spec, time_limit), options);

  nlohmann::json doc;
  doc["problem"] = to_string(spec.kind);
  doc["p"] = p;
  doc["optimizer"] = optimizer;
  doc["precision"] = precision;
  doc["best"] = result.best;
  doc["score_s"] = std::isfinite(result.score) ? nlohmann::json(result.score) : nlohmann::json(nullptr);
  doc["log"] = nlohmann::json::array();
  for (const auto& e : result.log) {
    doc["log"].push_back({{"hyperparameters", e.hyperparameters},
                          {"score_s", std::isfinite(e.score) ? nlohmann::json(e.score) : nlohmann::json(nullptr)}});
  }
  const std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f || !(f << text)) throw IoError("cannot write " + out);
  }
  return 0;
}

int cmd_defaults(const std::string& problem, unsigned p, const std::string& optimizer) {
  if (problem.empty() && optimizer.empty()) {
    std::cout << default_table_to_json(default_table());
    return 0;
  }
  if (problem.empty() || optimizer.empty()) throw std::invalid_argument("--problem and --optimizer go together");
  const auto hp = default_hyperparameters(parse_problem_kind(problem), p, parse_optimizer_kind(optimizer));
  std::cout << nlohmann::json(hp).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmarks of variational-algorithm optimizers on simulated objectives"};
  app.require_subcommand(1);

  std::string config, out = "out";
  Overrides overrides;

  auto* run = app.add_subcommand("run", "execute a run configuration");
  run->add_option("--config", config, "JSON run configuration")->required();
  run->add_option("--out", out, "output directory");
  overrides.add_to(run);

  auto* sweep = app.add_subcommand("sweep", "precision, gate-error or scenario sweep");
  std::string sweep_kind = "precision";
  std::vector<double> errors, precisions;
  std::vector<std::string> scenarios;
  sweep->add_option("--config", config, "JSON run configuration")->required();
  sweep->add_option("--out", out, "output directory");
  sweep->add_option("--kind", sweep_kind, "sweep kind")->check(CLI::IsMember({"precision", "error", "scenario"}));
  sweep->add_option("--errors", errors, "rotation error levels");
  sweep->add_option("--precisions", precisions, "precision targets");
  sweep->add_option("--scenarios", scenarios, "scenarios for a scenario sweep");
  overrides.add_to(sweep);

  auto* tune = app.add_subcommand("tune", "hyperparameter search");
  std::string problem = "sk", optimizer = "spsa", mode = "auto", tune_out;
  unsigned p = 1;
  double precision = 1e-3;
  std::size_t budget = 1000;
  tune->add_option("--problem", problem, "maxcut3reg, sk or hubbard");
  tune->add_option("--p", p, "ansatz depth");
  tune->add_option("--optimizer", optimizer, "optimizer name");
  tune->add_option("--precision", precision, "precision target");
  tune->add_option("--mode", mode, "search mode")->check(CLI::IsMember({"auto", "grid", "random"}));
  tune->add_option("--budget", budget, "random-mode sample count");
  tune->add_option("--time-limit", overrides.time_limit, "simulated time limit in seconds");
  tune->add_option("--parallel", overrides.parallel, "worker threads")->check(CLI::PositiveNumber);
  tune->add_option("--out", tune_out, "output JSON file (stdout when omitted)");

  auto* report = app.add_subcommand("report", "regenerate CSV and charts from traces.jsonl");
  std::string traces;
  report->add_option("--in", traces, "traces.jsonl")->required();
  report->add_option("--out", out, "output directory");

  auto* defaults = app.add_subcommand("defaults", "print shipped tuned hyperparameters");
  std::string def_problem, def_optimizer;
  unsigned def_p = 1;
  defaults->add_option("--problem", def_problem, "problem name");
  defaults->add_option("--p", def_p, "ansatz depth");
  defaults->add_option("--optimizer", def_optimizer, "optimizer name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*run) return cmd_run(config, out, overrides);
    if (*sweep) return cmd_sweep(config, out, overrides, sweep_kind, errors, precisions, scenarios);
    if (*tune) {
      return cmd_tune(problem, p, optimizer, precision, mode, budget, overrides.time_limit, overrides.parallel,
                      tune_out);
    }
    if (*report) {
      const auto summaries = read_traces_jsonl(traces);
      emit_summary_files(summaries, out);
      std::cout << summary_csv(summaries);
      return 0;
    }
    if (*defaults) return cmd_defaults(def_problem, def_p, def_optimizer);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return 0;
}
