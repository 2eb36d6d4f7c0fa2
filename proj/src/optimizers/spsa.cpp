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
#include <stdexcept>

#include "vqopt/optimizers.hpp"

namespace vqopt {

std::vector<double> spsa_gradient_estimate(double f_plus, double f_minus, double c,
                                           std::span<const double> delta) {
  const double scale = (f_plus - f_minus) / (2.0 * c);
  std::vector<double> g(delta.size());
  for (std::size_t k = 0; k < delta.size(); ++k) g[k] = scale / delta[k];
  return g;
}

OptimizerTrace spsa_minimize(RunContext& ctx, std::span<const double> x0, const SpsaParams& hp, Rng& rng) {
  const std::size_t d = x0.size();
  Point theta(x0.begin(), x0.end());
  std::vector<double> delta(d);
  for (std::uint64_t j = 1; !ctx.stopped(); ++j) {
    const double jd = static_cast<double>(j);
    const double c = hp.perturbation / std::pow(jd, hp.perturbation_decay);
    const double a = hp.rate / std::pow(jd + hp.stability, hp.rate_decay);
    for (double& v : delta) v = (rng() >> 63) ? 1.0 : -1.0;
    Point plus = theta, minus = theta;
    for (std::size_t k = 0; k < d; ++k) {
      plus[k] += c * delta[k];
      minus[k] -= c * delta[k];
    }
    auto f = ctx.evaluate({plus, minus}, hp.shots);
    if (!f) break;
    const auto g = spsa_gradient_estimate((*f)[0], (*f)[1], c, delta);
    for (std::size_t k = 0; k < d; ++k) theta[k] -= a * g[k];
    ctx.record(theta);
  }
  return ctx.finish();
}

}  // namespace vqopt
