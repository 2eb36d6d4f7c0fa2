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

#include "vqopt/hypertune.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "vqopt/bench.hpp"
#include "vqopt/errors.hpp"
#include "vqopt/embedded_data.hpp"
#include "vqopt/rng.hpp"

namespace vqopt {

using nlohmann::json;

SearchSpace::SearchSpace(std::vector<std::pair<std::string, std::vector<double>>> values)
    : values_(std::move(values)) {
  for (const auto& [key, list] : values_) {
    if (list.empty()) throw std::invalid_argument("search space: empty value list for '" + key + "'");
  }
}

std::size_t SearchSpace::size() const {
  if (values_.empty()) return 0;
  std::size_t n = 1;
  for (const auto& [key, list] : values_) n *= list.size();
  return n;
}

Hyperparameters SearchSpace::combination(std::size_t index) const {
  if (index >= size()) throw std::out_of_range("search space index out of range");
  Hyperparameters hp;
  for (auto it = values_.rbegin(); it != values_.rend(); ++it) {
    const auto& list = it->second;
    hp[it->first] = list[index % list.size()];
    index /= list.size();
  }
  return hp;
}

SearchMode default_search_mode(const SearchSpace& space) {
  return space.size() <= 1000 ? SearchMode::Grid : SearchMode::Random;
}

TuneCase make_tune_case(const ProblemSpec& spec, double time_limit) {
  auto setup = make_problem(spec);
  TuneCase c;
  c.make_objective = [setup](std::uint64_t seed) -> std::unique_ptr<Objective> {
    return std::make_unique<ObjectiveEngine>(setup, NoiseConfig{}, seed);
  };
  c.initial_point = [setup](std::uint64_t seed) { return initial_guess(*setup, seed); };
  c.stop.time_limit = time_limit;
  return c;
}

TuneResult search(const SearchSpace& space, OptimizerKind optimizer, const TuneCase& tune_case,
                  const TuneOptions& options) {
  const std::size_t total = space.size();
  if (total == 0) throw std::invalid_argument("search: empty search space");
  if (!tune_case.make_objective || !tune_case.initial_point) {
    throw std::invalid_argument("search: incomplete tune case");
  }

  std::vector<std::size_t> order;
  if (options.mode == SearchMode::Grid || options.budget >= total) {
    order.resize(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
  } else {
    if (options.budget == 0) throw std::invalid_argument("search: random budget must be >= 1");
    Rng rng = make_rng(options.seed, Stream::Optimizer);
    // Floyd's algorithm: distinct indices, then enumeration order.
    std::vector<std::size_t> picked;
    for (std::size_t j = total - options.budget; j < total; ++j) {
      const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
      picked.push_back(std::find(picked.begin(), picked.end(), t) == picked.end() ? t : j);
    }
    std::sort(picked.begin(), picked.end());
    order = std::move(picked);
  }

  TuneResult result;
  result.log.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    Hyperparameters hp = space.combination(order[i]);
    for (const auto& [k, v] : options.fixed) hp[k] = v;
    result.log[i].hyperparameters = std::move(hp);
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < result.log.size(); i = next++) {
      try {
        auto objective = tune_case.make_objective(options.seed);
        const Point x0 = tune_case.initial_point(options.seed);
        auto& entry = result.log[i];
        const auto trace = run_optimizer(optimizer, *objective, x0, entry.hyperparameters, tune_case.cost,
                                         tune_case.stop, options.seed);
        const auto t = convergence_time(trace, objective->optimum_score(), options.precision,
                                        tune_case.stop.time_limit);
        if (t) entry.score = *t;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = result.log.size();
      }
    }
  };
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.log.size(); ++i) {
    if (result.log[i].score < result.log[best].score) best = i;
  }
  result.best = result.log[best].hyperparameters;
  result.score = result.log[best].score;
  return result;
}

SpaceFamily space_family(ProblemKind kind) {
  return kind == ProblemKind::Hubbard ? SpaceFamily::Hubbard : SpaceFamily::Qaoa;
}

namespace {

struct SpaceKey {
  OptimizerKind optimizer;
  SpaceFamily family;
  SearchSpace space;
};

std::vector<SpaceKey> load_spaces() {
  const json doc = json::parse(embedded::kSearchSpaces);
  std::vector<SpaceKey> out;
  for (const auto& s : doc.at("spaces")) {
    std::vector<std::pair<std::string, std::vector<double>>> values;
    for (const auto& [key, list] : s.at("values").items()) {
      values.emplace_back(key, list.get<std::vector<double>>());
    }
    const auto family = s.at("family").get<std::string>() == "hubbard" ? SpaceFamily::Hubbard : SpaceFamily::Qaoa;
    out.push_back({parse_optimizer_kind(s.at("optimizer").get<std::string>()), family,
                   SearchSpace(std::move(values))});
  }
  return out;
}

}  // namespace

const SearchSpace& search_space(OptimizerKind optimizer, SpaceFamily family) {
  static const std::vector<SpaceKey> spaces = load_spaces();
  for (const auto& s : spaces) {
    if (s.optimizer == optimizer && s.family == family) return s.space;
  }
  throw NotFoundError("no search space for " + to_string(optimizer));
}

const DefaultTable& default_table() {
  static const DefaultTable table = parse_default_table(embedded::kDefaultHyperparameters);
  return table;
}

Hyperparameters default_hyperparameters(ProblemKind problem, unsigned p, OptimizerKind optimizer) {
  for (const auto& e : default_table().entries) {
    if (e.problem == problem && e.p == p && e.optimizer == optimizer) return e.hyperparameters;
  }
  throw NotFoundError("no tuned hyperparameters for " + to_string(optimizer) + " on " + to_string(problem) +
                      " p=" + std::to_string(p));
}

std::string default_table_to_json(const DefaultTable& table) {
  json doc;
  doc["schema"] = table.schema;
  doc["notes"] = table.notes;
  doc["defaults"] = json::array();
  for (const auto& e : table.entries) {
    doc["defaults"].push_back({{"problem", to_string(e.problem)},
                               {"p", e.p},
                               {"optimizer", to_string(e.optimizer)},
                               {"hyperparameters", e.hyperparameters}});
  }
  return doc.dump(2) + "\n";
}

DefaultTable parse_default_table(std::string_view text) {
  try {
    const json doc = json::parse(text);
    DefaultTable table;
    table.schema = doc.at("schema").get<int>();
    if (table.schema != 1) throw std::invalid_argument("unsupported schema " + std::to_string(table.schema));
    if (doc.contains("notes")) table.notes = doc.at("notes").get<std::vector<std::string>>();
    for (const auto& e : doc.at("defaults")) {
      DefaultEntry entry;
      entry.problem = parse_problem_kind(e.at("problem").get<std::string>());
      entry.p = e.at("p").get<unsigned>();
      entry.optimizer = parse_optimizer_kind(e.at("optimizer").get<std::string>());
      entry.hyperparameters = e.at("hyperparameters").get<Hyperparameters>();
      table.entries.push_back(std::move(entry));
    }
    return table;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("default table: ") + e.what());
  }
}

}  // namespace vqopt
