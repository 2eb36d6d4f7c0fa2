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

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "oracles/dense.hpp"
#include "vqopt/errors.hpp"
#include "vqopt/objective.hpp"

namespace {

using namespace vqopt;

std::shared_ptr<const ProblemSetup> sk1() { return make_problem({ProblemKind::SK, 1, 8, 0}); }

// One qubit, ansatz exp(-i theta X) from |0>, H = Z, so f(theta) = cos 2 theta.
std::shared_ptr<const ProblemSetup> single_qubit_setup() {
  auto s = std::make_shared<ProblemSetup>();
  s->spec = {ProblemKind::SK, 1, 1, 0};
  s->hamiltonian = PauliSum(1);
  s->hamiltonian.add(1.0, "Z0");
  HubbardHamiltonian h;
  h.t_h = PauliSum(1);
  h.t_h.add(1.0, "X0");
  h.t_v = PauliSum(1);
  h.v = PauliSum(1);
  s->ansatz = Ansatz::hubbard(h, 1, StateVector(1));
  s->dim = 3;
  s->norm = {0.0, -1.0, 1.0};
  s->diagonal = {1.0, -1.0};
  s->base_guess = {0.0, 0.0, 0.0};
  s->optimum.x = {std::numbers::pi / 2, 0.0, 0.0};
  s->optimum.score = 1.0;
  return s;
}

TEST(Lambda, Examples) {
  PauliSum h(2);
  h.add(0.5, "Z0");
  h.add(0.3, "Z1");
  EXPECT_DOUBLE_EQ(lambda_bound(h), 0.8);
  PauliSum id(2);
  id.add(3.0, "I");
  EXPECT_DOUBLE_EQ(lambda_bound(id), 0.0);
}

// Pauli decomposition of the dense Hubbard matrix, alpha_P = Tr(P H) / 2^n.
TEST(Lambda, HubbardMatchesDensePauliDecomposition) {
  const auto d = oracle::dense_hubbard(1.0, 4.0);
  const oracle::CMat h = d.t_h + d.t_v + d.v;
  const unsigned n = 8;
  const std::size_t dim = 256;
  double tally = 0.0;
  for (std::uint32_t code = 1; code < (1u << (2 * n)); ++code) {
    std::size_t flip = 0;
    for (unsigned q = 0; q < n; ++q) {
      const unsigned c = (code >> (2 * q)) & 3;  // 1 = X, 2 = Y, 3 = Z
      if (c == 1 || c == 2) flip |= std::size_t{1} << q;
    }
    std::complex<double> trace = 0.0;
    for (std::size_t x = 0; x < dim; ++x) {
      // <x|P|x^flip> = prod over qubits of the 2x2 entry.
      const std::size_t y = x ^ flip;
      std::complex<double> entry = 1.0;
      for (unsigned q = 0; q < n; ++q) {
        const unsigned c = (code >> (2 * q)) & 3;
        const bool bit_x = (x >> q) & 1;
        if (c == 2) entry *= bit_x ? std::complex<double>(0, 1) : std::complex<double>(0, -1);
        if (c == 3 && bit_x) entry = -entry;
      }
      trace += entry * h(y, x);
    }
    tally += std::abs(trace) / dim;
  }
  const auto hub = make_problem({ProblemKind::Hubbard, 1, 4, 0});
  EXPECT_NEAR(lambda_bound(hub->hamiltonian), tally, 1e-10);
  EXPECT_NEAR(ObjectiveEngine(hub, {}, 0).lambda(), tally, 1e-10);
}

TEST(Query, SampledConvergesAtLargeShots) {
  const auto setup = sk1();
  ObjectiveEngine engine(setup, Estimator::SampledDiagonal, {}, 4);
  const auto& x = setup->optimum.x;
  const StateVector s = setup->ansatz.prepare(x);
  double mean = 0.0, second = 0.0;
  for (std::size_t z = 0; z < s.size(); ++z) {
    mean += std::norm(s[z]) * setup->diagonal[z];
    second += std::norm(s[z]) * setup->diagonal[z] * setup->diagonal[z];
  }
  const double lambda_emp = std::sqrt(second - mean * mean);
  int inside = 0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) {
    QueryRecord r;
    const double e = engine.query_energy(x, 1000000, r);
    if (std::abs(e - mean) < 5 * lambda_emp / 1e3) ++inside;
    EXPECT_EQ(r, (QueryRecord{1000000, 1, 1}));
  }
  EXPECT_GE(inside, 0.99 * trials);
}

TEST(Query, GaussianVarianceMatchesLambda) {
  const auto setup = sk1();
  ObjectiveEngine engine(setup, Estimator::GaussianModel, {}, 5);
  const std::uint64_t shots = 1000;
  std::vector<double> v;
  QueryRecord r;
  for (int i = 0; i < 1000; ++i) v.push_back(engine.query_energy(setup->optimum.x, shots, r));
  double m = 0.0;
  for (double e : v) m += e;
  m /= v.size();
  double var = 0.0;
  for (double e : v) var += (e - m) * (e - m);
  var /= v.size() - 1;
  const double expected = engine.lambda() * engine.lambda() / shots;
  EXPECT_NEAR(var / expected, 1.0, 0.15);
}

TEST(Query, DeterministicAndShotValidation) {
  const auto setup = sk1();
  ObjectiveEngine a(setup, Estimator::GaussianModel, {}, 9), b(setup, Estimator::GaussianModel, {}, 9);
  QueryRecord r;
  EXPECT_EQ(a.query_energy(setup->optimum.x, 100, r), b.query_energy(setup->optimum.x, 100, r));
  EXPECT_THROW(a.query_energy(setup->optimum.x, 0, r), std::invalid_argument);
  EXPECT_THROW(a.query_batch({}, 10), std::invalid_argument);
  const auto hub = make_problem({ProblemKind::Hubbard, 1, 4, 0});
  EXPECT_THROW(ObjectiveEngine(hub, Estimator::SampledDiagonal, {}, 0), std::invalid_argument);
  EXPECT_THROW(ObjectiveEngine(setup, Estimator::GaussianModel, {-1.0}, 0), std::invalid_argument);
}

TEST(Batch, AccountingAndEquivalenceToSingleQueries) {
  const auto setup = sk1();
  std::vector<Point> points;
  for (int i = 0; i < 10; ++i) {
    Point p = setup->optimum.x;
    p[0] += 0.01 * i;
    points.push_back(p);
  }
  for (double sigma : {0.0, 0.02}) {
    ObjectiveEngine batched(setup, Estimator::SampledDiagonal, {sigma}, 3);
    ObjectiveEngine single(setup, Estimator::SampledDiagonal, {sigma}, 3);
    const auto r = batched.query_batch(points, 500);
    EXPECT_EQ(r.record, (QueryRecord{5000, 10, 1}));
    for (std::size_t i = 0; i < points.size(); ++i) {
      QueryRecord rec;
      EXPECT_EQ(r.values[i], single.query_energy(points[i], 500, rec));
    }
  }
}

TEST(Objective, SignAndScore) {
  const auto mc = make_problem({ProblemKind::MaxCut3Reg, 1, 8, 0});
  ObjectiveEngine engine(mc, Estimator::GaussianModel, {}, 1);
  const auto r = engine.evaluate({mc->optimum.x}, 100000000000ull);
  EXPECT_NEAR(r.values[0], -exact_energy(*mc, mc->optimum.x), 1e-3);
  EXPECT_DOUBLE_EQ(engine.exact_score(mc->optimum.x), mc->optimum.score);
  EXPECT_NEAR(engine.exact_score(std::vector<double>{0.0, 0.0}), 6.0 / mc->norm.c_max, 1e-12);
  const double e1 = exact_energy(*mc, mc->optimum.x), e2 = exact_energy(*mc, std::vector<double>{0.1, 0.2});
  EXPECT_EQ(e1 > e2, engine.exact_score(mc->optimum.x) > engine.exact_score(std::vector<double>{0.1, 0.2}));
}

TEST(Gradient, SingleQubitShiftRuleIsExact) {
  const auto setup = single_qubit_setup();
  for (double theta : {0.3, -0.7, 1.2}) {
    const std::vector<double> x = {theta, 0.0, 0.0};
    EXPECT_NEAR(exact_energy(*setup, x), std::cos(2 * theta), 1e-14);
    const auto g = exact_gradient(*setup, x);
    EXPECT_NEAR(g[0], -2.0 * std::sin(2 * theta), 1e-14);
    EXPECT_NEAR(g[1], 0.0, 1e-14);
  }
}

TEST(Gradient, SkCircuitCountAndNoiselessLimit) {
  const auto setup = sk1();
  ObjectiveEngine engine(setup, Estimator::GaussianModel, {}, 2);
  EXPECT_EQ(engine.gradient_circuits(), 72u);
  const auto x = initial_guess(*setup, 0);
  const auto g = engine.parameter_shift_gradient(x, 1000000000000ull);
  EXPECT_EQ(g.record, (QueryRecord{72 * 1000000000000ull, 72, 1}));
  const auto exact = exact_gradient(*setup, x);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(g.gradient[i], exact[i], 1e-3);
  ObjectiveEngine noisy(setup, Estimator::GaussianModel, {0.01}, 2);
  EXPECT_THROW(noisy.parameter_shift_gradient(x, 10), UnsupportedError);
  EXPECT_THROW(noisy.gradient(x, 10), UnsupportedError);
}

TEST(Rotation, ZeroSigmaIsUnperturbedAndPositiveSigmaMoves) {
  const auto setup = sk1();
  ObjectiveEngine clean(setup, Estimator::GaussianModel, {0.0}, 6);
  ObjectiveEngine rotated(setup, Estimator::GaussianModel, {0.05}, 6);
  const std::uint64_t huge = 1000000000000000ull;
  QueryRecord r;
  const double exact = exact_energy(*setup, setup->optimum.x);
  EXPECT_NEAR(clean.query_energy(setup->optimum.x, huge, r), exact, 1e-5);
  double spread = 0.0;
  for (int i = 0; i < 20; ++i) spread = std::max(spread, std::abs(rotated.query_energy(setup->optimum.x, huge, r) - exact));
  EXPECT_GT(spread, 1e-4);
}

TEST(FunctionObjective, NoiseAndGradients) {
  FunctionObjective::Options opt;
  opt.noise_sd = 0.5;
  FunctionObjective f(1, [](std::span<const double> x) { return x[0] * x[0]; }, opt, 1);
  std::vector<double> v;
  for (int i = 0; i < 2000; ++i) v.push_back(f.evaluate({{1.0}}, 1).values[0]);
  double m = 0.0;
  for (double e : v) m += e;
  m /= v.size();
  EXPECT_NEAR(m, 1.0, 0.05);
  EXPECT_EQ(f.gradient_circuits(), 0u);
  EXPECT_THROW(f.gradient(std::vector<double>{1.0}, 1), UnsupportedError);
  EXPECT_DOUBLE_EQ(f.exact_score(std::vector<double>{2.0}), -4.0);
}

}  // namespace
