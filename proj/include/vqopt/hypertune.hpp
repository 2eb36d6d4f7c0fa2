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
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vqopt/costmodel.hpp"
#include "vqopt/objective.hpp"
#include "vqopt/optimizers.hpp"
#include "vqopt/problems.hpp"

namespace vqopt {

/// Seed used for every tuning run; distinct from the benchmark seeds 0..49.
inline constexpr std::uint64_t kTuningSeed = 1000;

/// Allowed values per hyperparameter, in declaration order. Combinations are
/// enumerated with the last key varying fastest.
class SearchSpace {
 public:
  SearchSpace() = default;
  explicit SearchSpace(std::vector<std::pair<std::string, std::vector<double>>> values);

  const std::vector<std::pair<std::string, std::vector<double>>>& values() const { return values_; }
  /// Product of the list sizes; 0 for an empty space.
  std::size_t size() const;
  Hyperparameters combination(std::size_t index) const;

 private:
  std::vector<std::pair<std::string, std::vector<double>>> values_;
};

enum class SearchMode { Grid, Random };

/// Grid up to 1000 combinations, random otherwise.
SearchMode default_search_mode(const SearchSpace& space);

/// What a single tuning run needs: a fresh objective per run seed and the
/// starting point for that seed.
struct TuneCase {
  std::function<std::unique_ptr<Objective>(std::uint64_t seed)> make_objective;
  std::function<Point(std::uint64_t seed)> initial_point;
  CostModelParams cost{};  // latency with batching
  StopConditions stop{};
};

/// Default-estimator objective on `spec` with the problem's perturbed
/// initial guess, limited to `time_limit` simulated seconds.
TuneCase make_tune_case(const ProblemSpec& spec, double time_limit);

struct TuneOptions {
  SearchMode mode = SearchMode::Grid;
  std::size_t budget = 1000;  // random mode only
  double precision = 1e-3;
  std::uint64_t seed = kTuningSeed;
  unsigned threads = 1;
  /// Merged into every combination (e.g. max_evals).
  Hyperparameters fixed;
};

struct TuneEvaluation {
  Hyperparameters hyperparameters;
  double score = std::numeric_limits<double>::infinity();  // seconds to convergence
};

struct TuneResult {
  Hyperparameters best;
  double score = std::numeric_limits<double>::infinity();
  std::vector<TuneEvaluation> log;  // enumeration order
};

/// Scores each candidate by one run and keeps the fastest to converge; ties
/// go to the earlier candidate. Throws std::invalid_argument for an empty
/// space or a zero random budget.
TuneResult search(const SearchSpace& space, OptimizerKind optimizer, const TuneCase& tune_case,
                  const TuneOptions& options);

enum class SpaceFamily { Qaoa, Hubbard };
SpaceFamily space_family(ProblemKind kind);

/// Shipped search grids. Throws NotFoundError for a missing entry.
const SearchSpace& search_space(OptimizerKind optimizer, SpaceFamily family);

struct DefaultEntry {
  ProblemKind problem = ProblemKind::SK;
  unsigned p = 1;
  OptimizerKind optimizer = OptimizerKind::SPSA;
  Hyperparameters hyperparameters;

  bool operator==(const DefaultEntry&) const = default;
};

struct DefaultTable {
  int schema = 1;
  std::vector<std::string> notes;
  std::vector<DefaultEntry> entries;

  bool operator==(const DefaultTable&) const = default;
};

/// Shipped tuned hyperparameters.
const DefaultTable& default_table();

/// Throws NotFoundError when the combination is not tabulated.
Hyperparameters default_hyperparameters(ProblemKind problem, unsigned p, OptimizerKind optimizer);

std::string default_table_to_json(const DefaultTable& table);
/// Throws std::invalid_argument on malformed input.
DefaultTable parse_default_table(std::string_view json);

}  // namespace vqopt
