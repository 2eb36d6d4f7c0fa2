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
#include <vector>

#include "vqopt/simd/kernels.hpp"

namespace {

using namespace vqopt::simd;

std::vector<double> random_amps(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> a(2 * n);
  double norm = 0.0;
  for (double& v : a) {
    v = normal(rng);
    norm += v * v;
  }
  for (double& v : a) v /= std::sqrt(norm);
  return a;
}

class SimdEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!avx2_kernels()) GTEST_SKIP() << "AVX2 not available on this host";
  }
  const KernelTable& scalar = scalar_kernels();
  const KernelTable& avx2 = *avx2_kernels();
};

constexpr double kTol = 1e-13;

TEST_F(SimdEquivalence, DiagonalPhase) {
  for (unsigned nq : {1u, 2u, 3u, 5u, 8u}) {
    const std::size_t n = std::size_t{1} << nq;
    auto a = random_amps(n, nq), b = a;
    std::vector<double> diag(n);
    for (std::size_t z = 0; z < n; ++z) diag[z] = std::sin(0.7 * z) * 3.0 - 1.0;
    scalar.diagonal_phase(a.data(), diag.data(), n, 0.83);
    avx2.diagonal_phase(b.data(), diag.data(), n, 0.83);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], kTol) << nq;
  }
}

TEST_F(SimdEquivalence, XRotationLayer) {
  for (unsigned nq : {1u, 2u, 3u, 6u, 8u}) {
    const std::size_t n = std::size_t{1} << nq;
    auto a = random_amps(n, 10 + nq), b = a;
    scalar.x_rotation_layer(a.data(), nq, -0.41);
    avx2.x_rotation_layer(b.data(), nq, -0.41);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], kTol) << nq;
  }
}

TEST_F(SimdEquivalence, PauliRotationAndExpectation) {
  std::mt19937_64 rng(3);
  for (unsigned nq : {1u, 2u, 3u, 8u}) {
    const std::size_t n = std::size_t{1} << nq;
    for (int trial = 0; trial < 20; ++trial) {
      PauliMasks m;
      m.flip = rng() & (n - 1);
      m.phase = rng() & (n - 1);
      m.y_count = static_cast<unsigned>(__builtin_popcountll(m.flip & m.phase));
      const auto in = random_amps(n, trial + 100 * nq);
      std::vector<double> a(in.size()), b(in.size());
      scalar.pauli_rotation(in.data(), a.data(), n, m, 0.37 * trial);
      avx2.pauli_rotation(in.data(), b.data(), n, m, 0.37 * trial);
      for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], kTol);
      ASSERT_NEAR(scalar.pauli_expectation(in.data(), n, m), avx2.pauli_expectation(in.data(), n, m), kTol);
    }
  }
}

TEST_F(SimdEquivalence, DiagonalExpectationAndProbabilities) {
  for (unsigned nq : {1u, 3u, 8u}) {
    const std::size_t n = std::size_t{1} << nq;
    const auto a = random_amps(n, 7 * nq);
    std::vector<double> diag(n);
    for (std::size_t z = 0; z < n; ++z) diag[z] = static_cast<double>(z % 7) - 3.0;
    EXPECT_NEAR(scalar.diagonal_expectation(a.data(), diag.data(), n),
                avx2.diagonal_expectation(a.data(), diag.data(), n), kTol);
    std::vector<double> p(n), q(n);
    scalar.probabilities(a.data(), p.data(), n);
    avx2.probabilities(a.data(), q.data(), n);
    for (std::size_t z = 0; z < n; ++z) ASSERT_NEAR(p[z], q[z], kTol);
  }
}

TEST_F(SimdEquivalence, NormalStream) {
  auto s1 = make_normal_stream(42), s2 = make_normal_stream(42);
  std::vector<double> a(4 * 257), b(4 * 257);
  scalar.normal_vectors(s1, a.data(), 257);
  avx2.normal_vectors(s2, b.data(), 257);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], 1e-12) << i;
}

TEST_F(SimdEquivalence, PolicyMoments) {
  const std::size_t d = 5;
  std::vector<double> sigma = {0.1, 0.2, 0.05, 0.3, 0.15};
  std::vector<double> grad = {1.0, -2.0, 0.5, 0.0, 3.0};
  std::vector<double> curv(d * d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) curv[j * d + k] = (j == k) ? 1.5 : 0.1 * static_cast<double>(j + k);
  }
  PolicyModel model{d, sigma.data(), grad.data(), curv.data()};
  for (std::size_t samples : {1u, 3u, 4u, 1001u}) {
    std::vector<std::vector<double>> sa(4, std::vector<double>(d, 0.0)), sb = sa;
    PolicyMoments ma{0.0, sa[0].data(), sa[1].data(), sa[2].data(), sa[3].data()};
    PolicyMoments mb{0.0, sb[0].data(), sb[1].data(), sb[2].data(), sb[3].data()};
    auto s1 = make_normal_stream(9), s2 = make_normal_stream(9);
    scalar.policy_moments(model, s1, samples, ma);
    avx2.policy_moments(model, s2, samples, mb);
    EXPECT_NEAR(ma.sum_value, mb.sum_value, 1e-10 * (1.0 + std::abs(ma.sum_value)));
    for (int k = 0; k < 4; ++k) {
      for (std::size_t j = 0; j < d; ++j) {
        ASSERT_NEAR(sa[k][j], sb[k][j], 1e-10 * (1.0 + std::abs(sa[k][j])));
      }
    }
  }
}

TEST(NormalStream, MomentsAreStandardNormal) {
  auto s = make_normal_stream(1);
  const std::size_t vectors = 50000;
  std::vector<double> out(4 * vectors);
  kernels().normal_vectors(s, out.data(), vectors);
  double mean = 0.0, var = 0.0;
  for (double v : out) mean += v;
  mean /= static_cast<double>(out.size());
  for (double v : out) var += (v - mean) * (v - mean);
  var /= static_cast<double>(out.size());
  // Standard errors: 1/sqrt(2e5) ~ 0.0022 for the mean, ~0.0032 for the variance.
  EXPECT_NEAR(mean, 0.0, 0.012);
  EXPECT_NEAR(var, 1.0, 0.016);
}

TEST(Dispatch, BackendSelection) {
  EXPECT_TRUE(backend_available(Backend::Scalar));
  const Backend before = active_backend();
  set_backend(Backend::Scalar);
  EXPECT_EQ(kernels().backend, Backend::Scalar);
  if (backend_available(Backend::Avx2)) {
    set_backend(Backend::Avx2);
    EXPECT_EQ(kernels().backend, Backend::Avx2);
  }
  set_backend(before);
  EXPECT_EQ(backend_name(Backend::Scalar), "scalar");
}

}  // namespace
