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

#include "vqopt/optimizers.hpp"

namespace vqopt {

OptimizerTrace sgd_minimize(RunContext& ctx, std::span<const double> x0, const SgdParams& hp) {
  Point theta(x0.begin(), x0.end());
  for (std::uint64_t j = 0; !ctx.stopped(); ++j) {
    auto g = ctx.gradient(theta, hp.shots);
    if (!g) break;
    const double rate = hp.rate * std::exp(-hp.decay * static_cast<double>(j));
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= rate * (*g)[k];
    ctx.record(theta);
  }
  return ctx.finish();
}

}  // namespace vqopt
