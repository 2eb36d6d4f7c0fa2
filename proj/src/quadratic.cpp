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

#include "vqopt/quadratic.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace vqopt {

QuadraticSurrogate::QuadraticSurrogate(std::vector<double> center, double constant,
                                       std::vector<double> linear, std::vector<double> quadratic)
    : center_(std::move(center)),
      constant_(constant),
      linear_(std::move(linear)),
      quadratic_(std::move(quadratic)) {
  const std::size_t d = center_.size();
  if (linear_.size() != d || quadratic_.size() != d * d) {
    throw std::invalid_argument("surrogate coefficient sizes do not match dimension");
  }
}

double QuadraticSurrogate::value(std::span<const double> x) const {
  const std::size_t d = dimension();
  if (x.size() != d) throw std::invalid_argument("point dimension mismatch");
  double v = constant_;
  for (std::size_t j = 0; j < d; ++j) {
    const double uj = x[j] - center_[j];
    double row = linear_[j];
    for (std::size_t k = 0; k < d; ++k) row += quadratic_[j * d + k] * (x[k] - center_[k]);
    v += uj * row;  // b_j u_j + u_j (Q u)_j
  }
  return v;
}

std::vector<double> QuadraticSurrogate::gradient(std::span<const double> x) const {
  const std::size_t d = dimension();
  if (x.size() != d) throw std::invalid_argument("point dimension mismatch");
  std::vector<double> g(linear_);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) g[j] += 2.0 * quadratic_[j * d + k] * (x[k] - center_[k]);
  }
  return g;
}

std::size_t quadratic_feature_count(std::size_t d) { return (d + 1) * (d + 2) / 2; }

QuadraticSurrogate fit_quadratic(std::span<const Sample> samples, std::span<const double> center) {
  if (samples.empty()) throw std::invalid_argument("fit_quadratic needs at least one sample");
  const std::size_t d = samples.front().x.size();
  std::vector<double> c(d, 0.0);
  if (!center.empty()) {
    if (center.size() != d) throw std::invalid_argument("center dimension mismatch");
    c.assign(center.begin(), center.end());
  }
  const std::size_t m = quadratic_feature_count(d);
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(n, static_cast<Eigen::Index>(m));
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Sample& s = samples[static_cast<std::size_t>(i)];
    if (s.x.size() != d) throw std::invalid_argument("sample dimension mismatch");
    Eigen::Index col = 0;
    design(i, col++) = 1.0;
    for (std::size_t j = 0; j < d; ++j) design(i, col++) = s.x[j] - c[j];
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = j; k < d; ++k) design(i, col++) = (s.x[j] - c[j]) * (s.x[k] - c[k]);
    }
    rhs(i) = s.y;
  }
  const Eigen::VectorXd coef = design.completeOrthogonalDecomposition().solve(rhs);

  Eigen::Index col = 0;
  const double constant = coef(col++);
  std::vector<double> linear(d), quadratic(d * d, 0.0);
  for (std::size_t j = 0; j < d; ++j) linear[j] = coef(col++);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j; k < d; ++k) {
      const double a = coef(col++);
      if (j == k) {
        quadratic[j * d + j] = a;
      } else {
        quadratic[j * d + k] = quadratic[k * d + j] = 0.5 * a;
      }
    }
  }
  return QuadraticSurrogate(std::move(c), constant, std::move(linear), std::move(quadratic));
}

}  // namespace vqopt
