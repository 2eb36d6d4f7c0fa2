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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "vqopt/quadratic.hpp"

namespace {

using namespace vqopt;

// Centred monomial row {1, u_j, u_j u_k (j <= k)} built independently.
Eigen::RowVectorXd features(const std::vector<double>& x, const std::vector<double>& c) {
  const std::size_t d = x.size();
  Eigen::RowVectorXd row(quadratic_feature_count(d));
  std::size_t i = 0;
  row(i++) = 1.0;
  for (std::size_t j = 0; j < d; ++j) row(i++) = x[j] - c[j];
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j; k < d; ++k) row(i++) = (x[j] - c[j]) * (x[k] - c[k]);
  return row;
}

Eigen::VectorXd coefficients(const QuadraticSurrogate& m) {
  const std::size_t d = m.dimension();
  Eigen::VectorXd c(quadratic_feature_count(d));
  std::size_t i = 0;
  c(i++) = m.constant();
  for (std::size_t j = 0; j < d; ++j) c(i++) = m.linear()[j];
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j; k < d; ++k) c(i++) = (j == k ? 1.0 : 2.0) * m.quadratic()[j * d + k];
  return c;
}

TEST(Fit, FeatureCount) {
  EXPECT_EQ(quadratic_feature_count(1), 3u);
  EXPECT_EQ(quadratic_feature_count(2), 6u);
  EXPECT_EQ(quadratic_feature_count(10), 66u);
}

TEST(Fit, RecoversExactQuadratic) {
  std::vector<Sample> s;
  for (double x : {-1.0, -0.5, 0.0, 0.3, 0.8, 1.5}) s.push_back({{x}, 1 + 2 * x + 3 * x * x});
  const auto m = fit_quadratic(s);
  EXPECT_NEAR(m.constant(), 1.0, 1e-9);
  EXPECT_NEAR(m.linear()[0], 2.0, 1e-9);
  EXPECT_NEAR(m.quadratic()[0], 3.0, 1e-9);
}

TEST(Fit, RecoversCrossTermsAroundCenter) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto f = [](const std::vector<double>& x) {
    return 0.5 + x[0] - 2 * x[1] + 0.7 * x[2] + 1.5 * x[0] * x[0] + 0.4 * x[0] * x[1] - x[1] * x[2] + 0.2 * x[2] * x[2];
  };
  std::vector<Sample> s;
  for (int i = 0; i < 30; ++i) {
    std::vector<double> x = {u(rng), u(rng), u(rng)};
    s.push_back({x, f(x)});
  }
  const std::vector<double> center = {0.2, -0.1, 0.3};
  const auto m = fit_quadratic(s, center);
  for (int i = 0; i < 10; ++i) {
    std::vector<double> x = {u(rng), u(rng), u(rng)};
    EXPECT_NEAR(m.value(x), f(x), 1e-9);
  }
}

TEST(Fit, SinglePointGivesConstantModel) {
  const std::vector<double> x = {0.4, -0.2};
  const std::vector<Sample> s = {{x, 3.0}};
  const auto m = fit_quadratic(s, x);
  EXPECT_NEAR(m.constant(), 3.0, 1e-12);
  EXPECT_NEAR(m.value(x), 3.0, 1e-12);
  for (double v : m.gradient(x)) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Fit, NoisyGradientAtOrigin) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1e-3);
  std::vector<Sample> s;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> x = {u(rng), u(rng)};
    s.push_back({x, 1.0 + 0.5 * x[0] - 1.5 * x[1] + x[0] * x[0] + 2 * x[1] * x[1] + noise(rng)});
  }
  const auto g = fit_quadratic(s).gradient(std::vector<double>{0.0, 0.0});
  EXPECT_NEAR(g[0], 0.5, 1e-2);
  EXPECT_NEAR(g[1], -1.5, 1e-2);
}

TEST(Fit, MinimumNormWhenUnderdetermined) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<double> center = {0.1, 0.2};
  std::vector<Sample> s;
  for (int i = 0; i < 3; ++i) s.push_back({{u(rng), u(rng)}, u(rng)});
  const auto m = fit_quadratic(s, center);

  // Coefficients lie in the row space of the design matrix.
  Eigen::MatrixXd a(3, 6);
  for (int i = 0; i < 3; ++i) a.row(i) = features(s[i].x, center);
  const Eigen::VectorXd c = coefficients(m);
  const Eigen::VectorXd projected = a.transpose() * (a * a.transpose()).ldlt().solve(a * c);
  EXPECT_LT((projected - c).cwiseAbs().maxCoeff(), 1e-9);
  for (const auto& p : s) EXPECT_NEAR(m.value(p.x), p.y, 1e-9);

  // A new point consistent with the model leaves the fit unchanged.
  std::vector<double> extra = {u(rng), u(rng)};
  auto s2 = s;
  s2.push_back({extra, m.value(extra)});
  const auto m2 = fit_quadratic(s2, center);
  EXPECT_LT((coefficients(m2) - c).cwiseAbs().maxCoeff(), 1e-9);
  for (const auto& p : s) EXPECT_NEAR(m2.value(p.x), p.y, 1e-9);
}

TEST(Surrogate, GradientExamplesAndFiniteDifferences) {
  std::vector<Sample> s;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 12; ++i) {
    std::vector<double> x = {u(rng), u(rng)};
    s.push_back({x, x[0] * x[0] + x[1] * x[1]});
  }
  const auto m = fit_quadratic(s);
  const auto g = surrogate_gradient(m, std::vector<double>{1.0, 1.0});
  EXPECT_NEAR(g[0], 2.0, 1e-9);
  EXPECT_NEAR(g[1], 2.0, 1e-9);

  const QuadraticSurrogate constant({0.0, 0.0}, 4.0, {0.0, 0.0}, {0.0, 0.0, 0.0, 0.0});
  for (double v : constant.gradient(std::vector<double>{0.3, 0.7})) EXPECT_EQ(v, 0.0);

  const QuadraticSurrogate q({0.5, -0.5}, 1.0, {0.3, -0.2}, {1.0, 0.4, 0.4, -0.5});
  const std::vector<double> x = {0.2, 0.9};
  const auto gq = q.gradient(x);
  for (int j = 0; j < 2; ++j) {
    auto xp = x, xm = x;
    xp[j] += 1e-6;
    xm[j] -= 1e-6;
    EXPECT_NEAR(gq[j], (q.value(xp) - q.value(xm)) / 2e-6, 1e-8);
  }
}

TEST(Fit, Errors) {
  EXPECT_THROW(fit_quadratic(std::vector<Sample>{}), std::invalid_argument);
  const std::vector<Sample> mixed = {{{1.0}, 1.0}, {{1.0, 2.0}, 2.0}};
  EXPECT_THROW(fit_quadratic(mixed), std::invalid_argument);
}

}  // namespace
