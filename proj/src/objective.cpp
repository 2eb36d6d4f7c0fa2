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

#include "vqopt/objective.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vqopt/errors.hpp"

namespace vqopt {

GradientResult Objective::gradient(std::span<const double>, std::uint64_t) {
  throw UnsupportedError("this objective does not provide gradient queries");
}

std::string to_string(Estimator estimator) {
  return estimator == Estimator::SampledDiagonal ? "sampled" : "gaussian";
}

Estimator parse_estimator(const std::string& name) {
  if (name == "sampled") return Estimator::SampledDiagonal;
  if (name == "gaussian") return Estimator::GaussianModel;
  throw std::invalid_argument("unknown estimator '" + name + "' (expected sampled or gaussian)");
}

double lambda_bound(const PauliSum& h) {
  double total = 0.0;
  for (const auto& t : h.terms()) {
    if (!t.is_identity()) total += std::fabs(t.coefficient);
  }
  return total;
}

ObjectiveEngine::ObjectiveEngine(std::shared_ptr<const ProblemSetup> setup, Estimator estimator,
                                 NoiseConfig noise, std::uint64_t seed)
    : setup_(std::move(setup)),
      estimator_(estimator),
      noise_(noise),
      lambda_(lambda_bound(setup_->hamiltonian)),
      shot_rng_(make_rng(seed, Stream::Shots)),
      rotation_rng_(make_rng(seed, Stream::Rotation)) {
  if (!(noise_.rotation_sigma >= 0.0)) throw std::invalid_argument("rotation sigma must be >= 0");
  if (estimator_ == Estimator::SampledDiagonal) {
    if (setup_->diagonal.empty()) {
      throw std::invalid_argument("sampled estimator requires a diagonal Hamiltonian");
    }
    observable_ = std::make_unique<DiagonalObservable>(setup_->diagonal);
  }
}

ObjectiveEngine::ObjectiveEngine(std::shared_ptr<const ProblemSetup> setup, NoiseConfig noise,
                                 std::uint64_t seed)
    : ObjectiveEngine(setup, setup->diagonal.empty() ? Estimator::GaussianModel : Estimator::SampledDiagonal,
                      noise, seed) {}

Point ObjectiveEngine::perturb(std::span<const double> point) {
  Point p(point.begin(), point.end());
  if (noise_.rotation_sigma > 0.0) {
    std::normal_distribution<double> normal(0.0, noise_.rotation_sigma);
    for (auto& v : p) v += normal(rotation_rng_);
  }
  return p;
}

double ObjectiveEngine::estimate(const StateVector& state, std::uint64_t shots) {
  if (estimator_ == Estimator::SampledDiagonal) {
    return sample_diagonal_estimate(state, *observable_, shots, shot_rng_);
  }
  const double exact = setup_->diagonal.empty() ? expectation(state, setup_->hamiltonian)
                                                : expectation_diagonal(state, setup_->diagonal);
  std::normal_distribution<double> normal(0.0, lambda_ / std::sqrt(static_cast<double>(shots)));
  return exact + normal(shot_rng_);
}

double ObjectiveEngine::query_energy(std::span<const double> point, std::uint64_t shots,
                                     QueryRecord& record) {
  if (shots == 0) throw std::invalid_argument("shot count must be >= 1");
  const Point p = perturb(point);
  const double value = estimate(setup_->ansatz.prepare(p), shots);
  record = {shots, 1, 1};
  return value;
}

BatchResult ObjectiveEngine::query_batch(const std::vector<Point>& points, std::uint64_t shots) {
  if (points.empty()) throw std::invalid_argument("empty query batch");
  if (shots == 0) throw std::invalid_argument("shot count must be >= 1");
  BatchResult out;
  out.values.reserve(points.size());
  for (const auto& point : points) {
    const Point p = perturb(point);
    out.values.push_back(estimate(setup_->ansatz.prepare(p), shots));
  }
  out.record = {shots * points.size(), points.size(), 1};
  return out;
}

GradientResult ObjectiveEngine::parameter_shift_gradient(std::span<const double> point,
                                                         std::uint64_t shots) {
  if (noise_.rotation_sigma > 0.0) {
    throw UnsupportedError("parameter-shift gradients are not defined under rotation error");
  }
  if (shots == 0) throw std::invalid_argument("shot count must be >= 1");
  const auto& gens = setup_->ansatz.generators();
  if (gens.empty()) throw UnsupportedError("ansatz exposes no generator metadata");
  constexpr double kShift = std::numbers::pi / 4.0;
  GradientResult out;
  out.gradient.assign(setup_->dim, 0.0);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const Shift plus{g, kShift}, minus{g, -kShift};
    const double fp = estimate(setup_->ansatz.prepare(point, &plus), shots);
    const double fm = estimate(setup_->ansatz.prepare(point, &minus), shots);
    out.gradient[gens[g].param] += gens[g].weight * (fp - fm);
  }
  const std::uint64_t circuits = 2 * gens.size();
  out.record = {shots * circuits, circuits, 1};
  return out;
}

BatchResult ObjectiveEngine::evaluate(const std::vector<Point>& points, std::uint64_t shots) {
  BatchResult r = query_batch(points, shots);
  for (auto& v : r.values) v *= setup_->sign;
  return r;
}

GradientResult ObjectiveEngine::gradient(std::span<const double> point, std::uint64_t shots) {
  GradientResult r = parameter_shift_gradient(point, shots);
  for (auto& v : r.gradient) v *= setup_->sign;
  return r;
}

double ObjectiveEngine::exact_score(std::span<const double> point) const {
  return normalized_score(*setup_, exact_energy(*setup_, point));
}

FunctionObjective::FunctionObjective(std::size_t dim, Function f, Options options, std::uint64_t seed)
    : dim_(dim), f_(std::move(f)), options_(std::move(options)), rng_(make_rng(seed, Stream::Shots)) {}

double FunctionObjective::noise_sd(std::uint64_t shots) const {
  const double per_shot = options_.noise_per_shot * options_.noise_per_shot /
                          static_cast<double>(std::max<std::uint64_t>(shots, 1));
  return std::sqrt(options_.noise_sd * options_.noise_sd + per_shot);
}

BatchResult FunctionObjective::evaluate(const std::vector<Point>& points, std::uint64_t shots) {
  if (points.empty()) throw std::invalid_argument("empty query batch");
  BatchResult out;
  const double sd = noise_sd(shots);
  std::normal_distribution<double> normal;
  for (const auto& p : points) {
    double v = f_(p);
    if (sd > 0.0) v += sd * normal(rng_);
    out.values.push_back(v);
  }
  out.record = {shots * points.size(), points.size(), 1};
  return out;
}

std::uint64_t FunctionObjective::gradient_circuits() const {
  return options_.gradient ? std::max<std::uint64_t>(options_.gradient_circuits, 1) : 0;
}

GradientResult FunctionObjective::gradient(std::span<const double> point, std::uint64_t shots) {
  if (!options_.gradient) return Objective::gradient(point, shots);
  GradientResult out;
  out.gradient = options_.gradient(point);
  const double sd = noise_sd(shots);
  if (sd > 0.0) {
    std::normal_distribution<double> normal;
    for (auto& g : out.gradient) g += sd * normal(rng_);
  }
  const std::uint64_t c = gradient_circuits();
  out.record = {shots * c, c, 1};
  return out;
}

}  // namespace vqopt
