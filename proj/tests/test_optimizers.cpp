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

#include <cmath>
#include <random>

#include "vqopt/errors.hpp"
#include "vqopt/hypertune.hpp"
#include "vqopt/optimizers.hpp"

namespace {

using namespace vqopt;

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

// Forwards to a FunctionObjective and keeps every evaluated point.
class Recording final : public Objective {
 public:
  Recording(std::size_t dim, FunctionObjective::Function f) : inner_(dim, std::move(f), {}, 0) {}
  std::size_t dimension() const override { return inner_.dimension(); }
  BatchResult evaluate(const std::vector<Point>& points, std::uint64_t shots) override {
    for (const auto& p : points) seen.push_back(p);
    batch_sizes.push_back(points.size());
    return inner_.evaluate(points, shots);
  }
  double exact_score(std::span<const double> x) const override { return inner_.exact_score(x); }
  double optimum_score() const override { return 0.0; }

  std::vector<Point> seen;
  std::vector<std::size_t> batch_sizes;

 private:
  FunctionObjective inner_;
};

OptimizerTrace run(OptimizerKind kind, Objective& obj, std::vector<double> x0, Hyperparameters hp,
                   std::uint64_t seed = 0, StopConditions stop = {}) {
  return run_optimizer(kind, obj, x0, hp, CostModelParams{}, stop, seed);
}

TEST(NelderMead, InitialSimplex) {
  Recording obj(2, [](std::span<const double> x) { return norm2(x); });
  run(OptimizerKind::NelderMead, obj, {1.0, 2.0}, {{"simplex_scale", 0.1}, {"max_evals", 3}});
  ASSERT_EQ(obj.seen.size(), 3u);
  EXPECT_EQ(obj.seen[0], (Point{1.0, 2.0}));
  EXPECT_NEAR(obj.seen[1][0], 1.1, 1e-15);
  EXPECT_EQ(obj.seen[1][1], 2.0);
  EXPECT_EQ(obj.seen[2][0], 1.0);
  EXPECT_NEAR(obj.seen[2][1], 2.2, 1e-15);
  for (auto b : obj.batch_sizes) EXPECT_EQ(b, 1u);

  Recording zero(2, [](std::span<const double> x) { return norm2(x); });
  run(OptimizerKind::NelderMead, zero, {0.0, 2.0}, {{"simplex_scale", 0.1}, {"max_evals", 3}});
  EXPECT_NEAR(zero.seen[1][0], 0.1, 1e-15);
}

TEST(NelderMead, Rosenbrock) {
  FunctionObjective f(2, [](std::span<const double> x) {
    return std::pow(1 - x[0], 2) + 100 * std::pow(x[1] - x[0] * x[0], 2);
  }, {}, 0);
  const auto trace = run(OptimizerKind::NelderMead, f, {0.0, 0.0}, {{"max_evals", 500}});
  EXPECT_LE(trace.entries.back().evals, 500u);
  EXPECT_LT(-trace.entries.back().exact_score, 1e-6);
  EXPECT_EQ(trace.stop_reason, "budget");
}

TEST(Spsa, GradientEstimateIsUnbiasedForLinear) {
  const std::vector<double> v = {0.7, -1.3, 2.1};
  const std::vector<double> x = {0.2, 0.4, -0.1};
  const double c = 0.05;
  std::mt19937_64 rng(1);
  const int draws = 10000;
  std::vector<double> sum(3, 0.0), sum2(3, 0.0);
  for (int i = 0; i < draws; ++i) {
    std::vector<double> delta(3);
    for (auto& d : delta) d = (rng() >> 63) ? 1.0 : -1.0;
    double fp = 0.0, fm = 0.0;
    for (int k = 0; k < 3; ++k) {
      fp += v[k] * (x[k] + c * delta[k]);
      fm += v[k] * (x[k] - c * delta[k]);
    }
    const auto g = spsa_gradient_estimate(fp, fm, c, delta);
    for (int k = 0; k < 3; ++k) {
      sum[k] += g[k];
      sum2[k] += g[k] * g[k];
    }
  }
  for (int k = 0; k < 3; ++k) {
    const double mean = sum[k] / draws;
    const double se = std::sqrt((sum2[k] / draws - mean * mean) / draws);
    EXPECT_LE(std::abs(mean - v[k]), 4 * se + 1e-12);
  }
}

TEST(Spsa, PerturbationsAndAccounting) {
  Recording obj(3, [](std::span<const double> x) { return norm2(x); });
  const auto trace = run(OptimizerKind::SPSA, obj, {0.5, 0.5, 0.5},
                         {{"perturbation", 0.02}, {"perturbation_decay", 0.0}, {"max_evals", 40}}, 3);
  for (auto b : obj.batch_sizes) EXPECT_EQ(b, 2u);
  // The two points of a batch are theta +- c delta with delta in {-1, +1}^d.
  for (std::size_t i = 0; i + 1 < obj.seen.size(); i += 2) {
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(std::abs(obj.seen[i][k] - obj.seen[i + 1][k]), 0.04, 1e-12);
    }
  }
  EXPECT_EQ(trace.totals.circuits, 2 * trace.totals.batches);
  EXPECT_EQ(trace.totals.circuits, 40u);
}

TEST(Sgd, FirstStepUsesFullRate) {
  FunctionObjective::Options opt;
  opt.gradient = [](std::span<const double> x) { return std::vector<double>{2 * x[0], 2 * x[1]}; };
  opt.gradient_circuits = 4;
  FunctionObjective f(2, [](std::span<const double> x) { return norm2(x); }, opt, 0);
  const auto trace = run(OptimizerKind::SGD, f, {1.0, -2.0}, {{"rate", 0.1}, {"decay", 5.0}, {"max_evals", 8}});
  ASSERT_EQ(trace.entries.size(), 2u);
  EXPECT_DOUBLE_EQ(trace.entries[0].candidate[0], 1.0 - 0.1 * 2.0);
  EXPECT_DOUBLE_EQ(trace.entries[0].candidate[1], -2.0 + 0.1 * 4.0);
  EXPECT_EQ(trace.entries[0].cumulative, (QueryRecord{4000, 4, 1}));
  // Second step uses gamma e^{-beta}.
  EXPECT_NEAR(trace.entries[1].candidate[0], 0.8 - 0.1 * std::exp(-5.0) * 1.6, 1e-15);
}

TEST(Sgd, NoiselessMaxCutConverges) {
  const auto setup = make_problem({ProblemKind::MaxCut3Reg, 1, 8, 0});
  ObjectiveEngine engine(setup, Estimator::GaussianModel, {}, 0);
  const auto trace = run(OptimizerKind::SGD, engine, initial_guess(*setup, 0),
                         {{"rate", 0.05}, {"shots", 1e15}, {"max_evals", 20000}});
  EXPECT_LT(setup->optimum.score - trace.entries.back().exact_score, 1e-3);
}

TEST(Mgd, SampleNumberFromRatio) {
  MgdParams p;
  p.sample_ratio = 1.2;
  EXPECT_EQ(p.samples_for(2), 7u);
  p.sample_number = 3;
  EXPECT_EQ(p.samples_for(2), 3u);
}

TEST(Mgd, NoiselessQuadraticDescendsMonotonically) {
  Recording obj(2, [](std::span<const double> x) { return norm2(x); });
  const auto trace = run(OptimizerKind::MGD, obj, {0.5, 0.5},
                         {{"rate", 0.2}, {"sample_radius", 0.1}, {"sample_number", 10}, {"max_evals", 1100}});
  for (auto b : obj.batch_sizes) EXPECT_EQ(b, 11u);
  ASSERT_LE(trace.entries.size(), 100u);
  double prev = std::sqrt(0.5);
  bool below = false;
  for (const auto& e : trace.entries) {
    const double n = std::sqrt(norm2(e.candidate));
    EXPECT_LE(n, prev + 1e-12);
    prev = n;
    below = below || n < 1e-3;
  }
  EXPECT_TRUE(below);
  EXPECT_EQ(trace.stop_reason, "budget");
}

TEST(Mgd, BallSamplesStayInside) {
  Rng rng(3);
  const std::vector<double> c = {1.0, -1.0, 0.5};
  for (int i = 0; i < 1000; ++i) {
    const auto x = sample_ball(c, 0.2, rng);
    double r = 0.0;
    for (int k = 0; k < 3; ++k) r += std::pow(x[k] - c[k], 2);
    EXPECT_LT(std::sqrt(r), 0.2);
  }
}

TEST(Mpg, ScoreFunctionsMatchLogDensityDerivatives) {
  const std::vector<double> x = {0.3, -0.4}, mu = {0.1, 0.2}, sigma = {0.5, 1.5};
  auto logpdf = [&](std::vector<double> m, std::vector<double> s) {
    double l = 0.0;
    for (int k = 0; k < 2; ++k) l += -std::log(s[k]) - 0.5 * std::pow((x[k] - m[k]) / s[k], 2);
    return l;
  };
  const auto gm = policy_score_mean(x, mu, sigma);
  const auto gs = policy_score_log_sigma(x, mu, sigma);
  const double h = 1e-6;
  for (int k = 0; k < 2; ++k) {
    auto mp = mu, mm = mu;
    mp[k] += h;
    mm[k] -= h;
    EXPECT_NEAR(gm[k], (logpdf(mp, sigma) - logpdf(mm, sigma)) / (2 * h), 1e-7);
    auto sp = sigma, sm = sigma;
    sp[k] *= std::exp(h);
    sm[k] *= std::exp(-h);
    EXPECT_NEAR(gs[k], (logpdf(mu, sp) - logpdf(mu, sm)) / (2 * h), 1e-7);
  }
}

TEST(Mpg, ConstantObjectiveGivesExactlyZeroGradient) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> z(10, std::vector<double>(3));
  for (auto& row : z)
    for (auto& v : row) v = normal(rng);
  const std::vector<double> values(10, 0.7316);
  const auto g = sample_policy_gradient(z, values, std::vector<double>{0.1, 0.2, 0.3});
  for (double v : g.mean) EXPECT_EQ(v, 0.0);
  for (double v : g.log_sigma) EXPECT_EQ(v, 0.0);

  Recording obj(2, [](std::span<const double>) { return 0.7316; });
  const auto trace = run(OptimizerKind::MPG, obj, {0.3, -0.2}, {{"warmup", 1000}, {"max_evals", 110}});
  ASSERT_FALSE(trace.entries.empty());
  for (const auto& e : trace.entries) EXPECT_EQ(e.candidate, (Point{0.3, -0.2}));
}

TEST(Mpg, ModelGradientMatchesAnalyticExpectation) {
  // For q(x) = c + b.u + u^T Q u, E[q(mu + sigma z)] has mean gradient
  // grad q(mu) and log-sigma gradient 2 Q_jj sigma_j^2.
  const QuadraticSurrogate q({0.0, 0.0}, 0.5, {0.4, -0.3}, {1.0, 0.25, 0.25, 2.0});
  const std::vector<double> mu = {0.2, -0.1}, sigma = {0.3, 0.2};
  auto stream = simd::make_normal_stream(11);
  const auto g = model_policy_gradient(q, mu, sigma, 1 << 20, stream);
  const auto exact = q.gradient(mu);
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(g.mean[k], exact[k], 0.01);
  EXPECT_NEAR(g.log_sigma[0], 2 * 1.0 * 0.09, 0.01);
  EXPECT_NEAR(g.log_sigma[1], 2 * 2.0 * 0.04, 0.01);
}

TEST(Mpg, NoiselessQuadratic) {
  FunctionObjective f(2, [](std::span<const double> x) { return norm2(x); }, {}, 0);
  const auto trace = run(OptimizerKind::MPG, f, {0.5, 0.5},
                         {{"log_sigma0", -4.0}, {"rate", 0.02}, {"warmup", 0}, {"model_samples", 65536},
                          {"max_evals", 200 * 11}},
                         1);
  ASSERT_LE(trace.entries.size(), 200u);
  EXPECT_LT(std::sqrt(norm2(trace.entries.back().candidate)), 1e-2);
}

// f(x) = |x|^2 + N(0, 0.1^2), d = 2.
struct NoisyCase {
  OptimizerKind kind;
  Hyperparameters hp;
};

class NoiseTolerance : public ::testing::TestWithParam<NoisyCase> {};

TEST_P(NoiseTolerance, ReachesSmallNormInMostSeeds) {
  const auto& c = GetParam();
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    FunctionObjective::Options opt;
    opt.noise_sd = 0.1;
    FunctionObjective f(2, [](std::span<const double> x) { return norm2(x); }, opt, seed);
    auto hp = c.hp;
    hp["max_evals"] = 5000;
    const auto trace = run(c.kind, f, {0.5, 0.5}, hp, seed);
    if (!trace.entries.empty() && std::sqrt(norm2(trace.entries.back().candidate)) < 0.1) ++successes;
  }
  EXPECT_GE(successes, 45) << to_string(c.kind);
}

INSTANTIATE_TEST_SUITE_P(
    Toy, NoiseTolerance,
    ::testing::Values(
        NoisyCase{OptimizerKind::SPSA, {{"rate", 0.1}, {"perturbation", 0.1}}},
        NoisyCase{OptimizerKind::MGD, {{"rate", 0.2}, {"sample_radius", 0.1}, {"sample_number", 10}}},
        NoisyCase{OptimizerKind::MPG,
                  {{"log_sigma0", -2.0}, {"rate", 0.02}, {"radius_ratio", 2.0}, {"sample_number", 10},
                   {"warmup", 0}, {"model_samples", 4096}, {"rate_decay", 1.0}}}),
    [](const auto& info) { return to_string(info.param.kind); });

TEST(Contracts, DeterminismAndBudgets) {
  const auto setup = make_problem({ProblemKind::SK, 1, 8, 0});
  for (auto kind : all_optimizer_kinds()) {
    const auto hp = default_hyperparameters(ProblemKind::SK, 1, kind);
    const StopConditions stop{600, 300.0};
    ObjectiveEngine a(setup, {}, 7), b(setup, {}, 7);
    const auto x0 = initial_guess(*setup, 7);
    const auto ta = run_optimizer(kind, a, x0, hp, CostModelParams{}, stop, 7);
    const auto tb = run_optimizer(kind, b, x0, hp, CostModelParams{}, stop, 7);
    ASSERT_EQ(ta.entries.size(), tb.entries.size()) << to_string(kind);
    for (std::size_t i = 0; i < ta.entries.size(); ++i) {
      EXPECT_EQ(ta.entries[i].candidate, tb.entries[i].candidate);
      EXPECT_EQ(ta.entries[i].time, tb.entries[i].time);
    }
    EXPECT_LE(ta.totals.circuits, stop.max_evals) << to_string(kind);
    EXPECT_LE(ta.total_time, stop.time_limit) << to_string(kind);
    for (const auto& e : ta.entries) EXPECT_LE(e.evals, stop.max_evals);
  }
}

TEST(Contracts, SgdUnderRotationErrorIsUnsupported) {
  const auto setup = make_problem({ProblemKind::SK, 1, 8, 0});
  ObjectiveEngine engine(setup, {0.01}, 0);
  EXPECT_THROW(run(OptimizerKind::SGD, engine, setup->optimum.x, {}), UnsupportedError);
}

TEST(Contracts, HyperparameterValidation) {
  EXPECT_THROW(validate_hyperparameters(OptimizerKind::SPSA, {{"learning_rate", 0.1}}), std::invalid_argument);
  EXPECT_THROW(validate_hyperparameters(OptimizerKind::MGD, {{"shots", 0}}), std::invalid_argument);
  EXPECT_THROW(validate_hyperparameters(OptimizerKind::MPG, {{"sample_number", 2.5}}), std::invalid_argument);
  EXPECT_NO_THROW(validate_hyperparameters(OptimizerKind::NelderMead, {{"simplex_scale", 0.2}}));
  EXPECT_EQ(parse_optimizer_kind("mpg"), OptimizerKind::MPG);
  EXPECT_THROW(parse_optimizer_kind("adam"), std::invalid_argument);
  FunctionObjective f(2, [](std::span<const double> x) { return norm2(x); }, {}, 0);
  EXPECT_THROW(run(OptimizerKind::SPSA, f, {1.0}, {}), std::invalid_argument);
}

}  // namespace
