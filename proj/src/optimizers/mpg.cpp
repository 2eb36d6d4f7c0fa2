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

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "vqopt/optimizers.hpp"

namespace vqopt {

std::vector<double> policy_score_mean(std::span<const double> x, std::span<const double> mu,
                                      std::span<const double> sigma) {
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mu[j]) / (sigma[j] * sigma[j]);
  return out;
}

std::vector<double> policy_score_log_sigma(std::span<const double> x, std::span<const double> mu,
                                           std::span<const double> sigma) {
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double u = (x[j] - mu[j]) / sigma[j];
    out[j] = u * u - 1.0;
  }
  return out;
}

PolicyGradient sample_policy_gradient(const std::vector<std::vector<double>>& z,
                                      std::span<const double> values, std::span<const double> sigma) {
  if (z.size() != values.size() || z.size() < 2) {
    throw std::invalid_argument("sample_policy_gradient: need >= 2 samples with one value each");
  }
  const std::size_t d = sigma.size();
  const double n = static_cast<double>(z.size());
  // Baseline relative to the first value keeps f - f_bar exact for
  // constant inputs.
  double mean_shift = 0.0;
  for (double v : values) mean_shift += v - values[0];
  mean_shift /= n;
  PolicyGradient g{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double adv = (values[i] - values[0]) - mean_shift;
    for (std::size_t j = 0; j < d; ++j) {
      g.mean[j] += adv * z[i][j] / sigma[j];
      g.log_sigma[j] += adv * (z[i][j] * z[i][j] - 1.0);
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    g.mean[j] /= n;
    g.log_sigma[j] /= n;
  }
  return g;
}

PolicyGradient model_policy_gradient(const QuadraticSurrogate& model, std::span<const double> mu,
                                     std::span<const double> sigma, std::uint64_t samples,
                                     simd::NormalStream& stream) {
  const std::size_t d = sigma.size();
  if (samples == 0) throw std::invalid_argument("model_policy_gradient: samples must be >= 1");
  const auto grad = model.gradient(mu);
  std::vector<double> sum_z(d, 0.0), sum_zg(d, 0.0), sum_z2(d, 0.0), sum_z2g(d, 0.0);
  simd::PolicyModel pm{d, sigma.data(), grad.data(), model.quadratic().data()};
  simd::PolicyMoments mom{0.0, sum_z.data(), sum_zg.data(), sum_z2.data(), sum_z2g.data()};
  simd::kernels().policy_moments(pm, stream, samples, mom);
  const double m = static_cast<double>(samples);
  const double g_bar = mom.sum_value / m;
  PolicyGradient g{std::vector<double>(d), std::vector<double>(d)};
  for (std::size_t j = 0; j < d; ++j) {
    g.mean[j] = (sum_zg[j] - g_bar * sum_z[j]) / (m * sigma[j]);
    g.log_sigma[j] = (sum_z2g[j] - g_bar * sum_z2[j]) / m;
  }
  return g;
}

namespace {

class Adam {
 public:
  explicit Adam(std::size_t n) : m_(n, 0.0), v_(n, 0.0) {}

  // Descends: params -= rate * m_hat / (sqrt(v_hat) + eps).
  void step(std::vector<double>& params, const std::vector<double>& grad, double rate) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (std::size_t j = 0; j < params.size(); ++j) {
      m_[j] = kBeta1 * m_[j] + (1.0 - kBeta1) * grad[j];
      v_[j] = kBeta2 * v_[j] + (1.0 - kBeta2) * grad[j] * grad[j];
      params[j] -= rate * (m_[j] / c1) / (std::sqrt(v_[j] / c2) + kEps);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  std::vector<double> m_, v_;
  std::uint64_t t_ = 0;
};

}  // namespace

// Minimization: phi moves against grad E[f], with advantage f - f_bar.
OptimizerTrace mpg_minimize(RunContext& ctx, std::span<const double> x0, const MpgParams& hp, Rng& rng) {
  if (hp.sample_number < 2) throw std::invalid_argument("mpg: sample_number must be >= 2");
  const std::size_t d = x0.size();
  const std::size_t k = hp.sample_number;
  std::vector<double> phi(2 * d);  // (mu, log sigma)
  std::copy(x0.begin(), x0.end(), phi.begin());
  std::fill(phi.begin() + static_cast<std::ptrdiff_t>(d), phi.end(), hp.log_sigma0);
  Adam adam(2 * d);
  std::normal_distribution<double> normal;
  simd::NormalStream stream = simd::make_normal_stream(rng());
  std::vector<Sample> history;
  std::vector<double> sigma(d), grad(2 * d);

  for (std::uint64_t i = 0; !ctx.stopped(); ++i) {
    const std::span<const double> mu(phi.data(), d);
    for (std::size_t j = 0; j < d; ++j) sigma[j] = std::exp(phi[d + j]);

    std::vector<std::vector<double>> z(k, std::vector<double>(d));
    std::vector<Point> batch;
    batch.reserve(k + 1);
    batch.emplace_back(mu.begin(), mu.end());
    double r_max = 0.0;
    for (auto& zi : z) {
      Point x(d);
      double r2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        zi[j] = normal(rng);
        x[j] = mu[j] + sigma[j] * zi[j];
        r2 += (x[j] - mu[j]) * (x[j] - mu[j]);
      }
      r_max = std::max(r_max, std::sqrt(r2));
      batch.push_back(std::move(x));
    }
    auto f = ctx.evaluate(batch, hp.shots);
    if (!f) break;
    for (std::size_t s = 0; s < batch.size(); ++s) history.push_back({batch[s], (*f)[s]});

    PolicyGradient g;
    if (i < hp.warmup) {
      g = sample_policy_gradient(z, std::span<const double>(f->data() + 1, k), sigma);
    } else {
      const double radius = hp.radius_ratio * r_max;
      std::vector<Sample> local;
      for (const auto& h : history) {
        double r2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) r2 += (h.x[j] - mu[j]) * (h.x[j] - mu[j]);
        if (std::sqrt(r2) <= radius) local.push_back(h);
      }
      const auto model = fit_quadratic(local, mu);
      g = model_policy_gradient(model, mu, sigma, hp.model_samples, stream);
    }
    std::copy(g.mean.begin(), g.mean.end(), grad.begin());
    std::copy(g.log_sigma.begin(), g.log_sigma.end(), grad.begin() + static_cast<std::ptrdiff_t>(d));
    const double rate = hp.rate * std::pow(hp.rate_decay, static_cast<double>(i) / hp.decay_steps);
    adam.step(phi, grad, rate);
    ctx.record(std::span<const double>(phi.data(), d));
  }
  return ctx.finish();
}

}  // namespace vqopt
