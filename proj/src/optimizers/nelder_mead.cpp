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
#include <numeric>
#include <stdexcept>

#include "vqopt/optimizers.hpp"

namespace vqopt {
namespace {

struct Vertex {
  Point x;
  double f = 0.0;
};

Point affine(const Point& a, const Point& b, double t) {
  // a + t (b - a)
  Point out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + t * (b[j] - a[j]);
  return out;
}

}  // namespace

OptimizerTrace nelder_mead_minimize(RunContext& ctx, std::span<const double> x0, const NelderMeadParams& hp) {
  const std::size_t d = x0.size();
  if (d == 0) throw std::invalid_argument("nelder_mead: dimension must be >= 1");

  auto eval = [&](const Point& x) -> std::optional<double> {
    auto r = ctx.evaluate({x}, hp.shots);
    if (!r) return std::nullopt;
    return (*r)[0];
  };

  std::vector<Vertex> simplex;
  simplex.reserve(d + 1);
  for (std::size_t i = 0; i <= d; ++i) {
    Point x(x0.begin(), x0.end());
    if (i > 0) {
      double& c = x[i - 1];
      c = (c == 0.0) ? hp.simplex_scale : c * (1.0 + hp.simplex_scale);
    }
    auto f = eval(x);
    if (!f) return ctx.finish();
    simplex.push_back({std::move(x), *f});
  }
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::stable_sort(simplex.begin(), simplex.end(), by_value);
  ctx.record(simplex.front().x);

  while (!ctx.stopped()) {
    Point centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i].x[j];
    }
    for (double& c : centroid) c /= static_cast<double>(d);
    Vertex& worst = simplex.back();
    const double f_best = simplex.front().f;
    const double f_second = simplex[d - 1].f;

    const Point xr = affine(centroid, worst.x, -1.0);
    auto fr = eval(xr);
    if (!fr) break;
    bool shrink = false;
    if (*fr < f_best) {
      const Point xe = affine(centroid, worst.x, -2.0);
      auto fe = eval(xe);
      if (!fe) break;
      worst = (*fe < *fr) ? Vertex{xe, *fe} : Vertex{xr, *fr};
    } else if (*fr < f_second) {
      worst = {xr, *fr};
    } else if (*fr < worst.f) {
      const Point xc = affine(centroid, xr, 0.5);
      auto fc = eval(xc);
      if (!fc) break;
      if (*fc <= *fr) worst = {xc, *fc};
      else shrink = true;
    } else {
      const Point xc = affine(centroid, worst.x, 0.5);
      auto fc = eval(xc);
      if (!fc) break;
      if (*fc < worst.f) worst = {xc, *fc};
      else shrink = true;
    }
    if (shrink) {
      for (std::size_t i = 1; i <= d && !ctx.stopped(); ++i) {
        Point xs = affine(simplex.front().x, simplex[i].x, 0.5);
        auto fs = eval(xs);
        if (!fs) break;
        simplex[i] = {std::move(xs), *fs};
      }
    }
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    ctx.record(simplex.front().x);
  }
  return ctx.finish();
}

}  // namespace vqopt
