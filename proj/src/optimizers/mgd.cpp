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

#include <cmath>
#include <random>

#include "vqopt/optimizers.hpp"

namespace vqopt {
namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

}  // namespace

std::vector<double> sample_ball(std::span<const double> center, double radius, Rng& rng) {
  const std::size_t d = center.size();
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  std::vector<double> dir(d);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : dir) {
      v = normal(rng);
      norm += v * v;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  const double r = radius * std::pow(uniform(rng), 1.0 / static_cast<double>(d));
  std::vector<double> x(d);
  for (std::size_t j = 0; j < d; ++j) x[j] = center[j] + r * dir[j] / norm;
  return x;
}

OptimizerTrace mgd_minimize(RunContext& ctx, std::span<const double> x0, const MgdParams& hp, Rng& rng) {
  const std::size_t d = x0.size();
  const std::size_t k = hp.samples_for(d);
  Point x(x0.begin(), x0.end());
  std::vector<Sample> history;

  for (std::uint64_t m = 0; !ctx.stopped(); ++m) {
    const double md = static_cast<double>(m);
    const double radius = hp.sample_radius / std::pow(md + 1.0, hp.radius_decay);
    std::vector<Point> batch;
    batch.reserve(k + 1);
    batch.push_back(x);
    for (std::size_t s = 0; s < k; ++s) batch.push_back(sample_ball(x, radius, rng));
    auto f = ctx.evaluate(batch, hp.shots);
    if (!f) break;
    for (std::size_t s = 0; s < batch.size(); ++s) history.push_back({std::move(batch[s]), (*f)[s]});

    std::vector<Sample> local;
    for (const auto& h : history) {
      if (distance(h.x, x) < radius) local.push_back(h);
    }
    const auto model = fit_quadratic(local, x);
    const auto g = model.gradient(x);
    const double rate = hp.rate / std::pow(md + 1.0 + hp.stability, hp.rate_decay);
    double gnorm = 0.0;
    for (double v : g) gnorm += v * v;
    gnorm = std::sqrt(gnorm);
    if (rate * gnorm < hp.tolerance) {
      ctx.record(x);
      ctx.stop("tolerance");
      break;
    }
    for (std::size_t j = 0; j < d; ++j) x[j] -= rate * g[j];
    ctx.record(x);
  }
  return ctx.finish();
}

}  // namespace vqopt
