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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vqopt/costmodel.hpp"
#include "vqopt/problems.hpp"
#include "vqopt/rng.hpp"
#include "vqopt/statevec.hpp"

namespace vqopt {

using Point = std::vector<double>;

struct BatchResult {
  std::vector<double> values;
  QueryRecord record;
};

struct GradientResult {
  std::vector<double> gradient;
  QueryRecord record;
};

/// What an optimizer sees: a noisy function to minimize, plus a noiseless
/// score used only to judge convergence.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dimension() const = 0;

  /// One estimate per point, all issued as a single batch.
  virtual BatchResult evaluate(const std::vector<Point>& points, std::uint64_t shots) = 0;

  /// Circuits a gradient query issues; 0 when gradients are unsupported.
  virtual std::uint64_t gradient_circuits() const { return 0; }

  /// Throws UnsupportedError unless overridden.
  virtual GradientResult gradient(std::span<const double> point, std::uint64_t shots);

  /// Noiseless score of the point, higher is better.
  virtual double exact_score(std::span<const double> point) const = 0;

  /// Score of the reference optimum.
  virtual double optimum_score() const = 0;
};

enum class Estimator { SampledDiagonal, GaussianModel };

std::string to_string(Estimator estimator);
Estimator parse_estimator(const std::string& name);

struct NoiseConfig {
  double rotation_sigma = 0.0;  // per-component standard deviation, radians
};

/// sum of |alpha_j| over non-identity terms.
double lambda_bound(const PauliSum& h);

/// Shot-noise and rotation-error model over a problem setup. Shot noise and
/// rotation errors come from independent substreams of `seed`.
class ObjectiveEngine final : public Objective {
 public:
  /// Throws std::invalid_argument for SampledDiagonal on a non-diagonal
  /// Hamiltonian or a negative rotation sigma.
  ObjectiveEngine(std::shared_ptr<const ProblemSetup> setup, Estimator estimator, NoiseConfig noise,
                  std::uint64_t seed);
  /// Default estimator: sampled for diagonal problems, Gaussian otherwise.
  ObjectiveEngine(std::shared_ptr<const ProblemSetup> setup, NoiseConfig noise, std::uint64_t seed);

  const ProblemSetup& setup() const { return *setup_; }
  Estimator estimator() const { return estimator_; }
  double lambda() const { return lambda_; }

  /// Raw energy estimate at one point. Throws std::invalid_argument for M = 0.
  double query_energy(std::span<const double> point, std::uint64_t shots, QueryRecord& record);
  /// Raw energy estimates, one batch. Throws std::invalid_argument when empty.
  BatchResult query_batch(const std::vector<Point>& points, std::uint64_t shots);
  /// Parameter-shift gradient of the raw energy with M shots per circuit.
  /// Throws UnsupportedError when rotation error is enabled.
  GradientResult parameter_shift_gradient(std::span<const double> point, std::uint64_t shots);

  // Objective: minimizes sign * energy.
  std::size_t dimension() const override { return setup_->dim; }
  BatchResult evaluate(const std::vector<Point>& points, std::uint64_t shots) override;
  std::uint64_t gradient_circuits() const override { return 2 * setup_->ansatz.generators().size(); }
  GradientResult gradient(std::span<const double> point, std::uint64_t shots) override;
  double exact_score(std::span<const double> point) const override;
  double optimum_score() const override { return setup_->optimum.score; }

 private:
  double estimate(const StateVector& state, std::uint64_t shots);
  Point perturb(std::span<const double> point);

  std::shared_ptr<const ProblemSetup> setup_;
  Estimator estimator_;
  NoiseConfig noise_;
  double lambda_;
  std::unique_ptr<DiagonalObservable> observable_;
  Rng shot_rng_;
  Rng rotation_rng_;
};

/// Classical test function with additive Gaussian noise of standard deviation
/// sqrt(noise_sd^2 + noise_per_shot^2 / M). Scores are -f.
class FunctionObjective final : public Objective {
 public:
  using Function = std::function<double(std::span<const double>)>;
  using GradientFunction = std::function<std::vector<double>(std::span<const double>)>;

  struct Options {
    double noise_sd = 0.0;
    double noise_per_shot = 0.0;
    double minimum = 0.0;  // f at the optimum, for optimum_score
    GradientFunction gradient;
    std::uint64_t gradient_circuits = 0;
  };

  FunctionObjective(std::size_t dim, Function f, Options options, std::uint64_t seed);

  std::size_t dimension() const override { return dim_; }
  BatchResult evaluate(const std::vector<Point>& points, std::uint64_t shots) override;
  std::uint64_t gradient_circuits() const override;
  GradientResult gradient(std::span<const double> point, std::uint64_t shots) override;
  double exact_score(std::span<const double> point) const override { return -f_(point); }
  double optimum_score() const override { return -options_.minimum; }

 private:
  double noise_sd(std::uint64_t shots) const;

  std::size_t dim_;
  Function f_;
  Options options_;
  Rng rng_;
};

}  // namespace vqopt
