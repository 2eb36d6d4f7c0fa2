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

#include <span>
#include <vector>

namespace vqopt {

struct Sample {
  std::vector<double> x;
  double y = 0.0;
};

/// q(x) = c + b.u + u^T Q u with u = x - center and Q symmetric.
///
/// The fit uses the degree-2 monomials of u, {1, u_j, u_j u_k (j <= k)}; the
/// cross coefficient of u_j u_k (j < k) is stored as Q_jk = Q_kj = coef / 2,
/// so grad q(x) = b + 2 Q u.
class QuadraticSurrogate {
 public:
  QuadraticSurrogate() = default;
  QuadraticSurrogate(std::vector<double> center, double constant, std::vector<double> linear,
                     std::vector<double> quadratic);

  std::size_t dimension() const { return center_.size(); }
  const std::vector<double>& center() const { return center_; }
  double constant() const { return constant_; }
  const std::vector<double>& linear() const { return linear_; }
  /// Row-major d x d.
  const std::vector<double>& quadratic() const { return quadratic_; }

  double value(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;

 private:
  std::vector<double> center_;
  double constant_ = 0.0;
  std::vector<double> linear_;
  std::vector<double> quadratic_;
};

/// Number of monomials of degree <= 2 in d variables, (d + 1)(d + 2) / 2.
std::size_t quadratic_feature_count(std::size_t d);

/// Least-squares fit over the monomial basis around `center` (the origin
/// when empty). Underdetermined or rank-deficient designs give the
/// minimum-norm coefficient vector. Throws std::invalid_argument when there
/// are no samples or dimensions disagree.
QuadraticSurrogate fit_quadratic(std::span<const Sample> samples, std::span<const double> center = {});

inline std::vector<double> surrogate_gradient(const QuadraticSurrogate& model, std::span<const double> x) {
  return model.gradient(x);
}

}  // namespace vqopt
