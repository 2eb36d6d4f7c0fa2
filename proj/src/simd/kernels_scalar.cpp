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

// Scalar reference kernels. These define the semantics the vectorized
// variants are tested against, including the lane structure of the normal
// stream and of the policy-moment accumulators.

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include "normal_stream_detail.hpp"
#include "vqopt/simd/kernels.hpp"

namespace vqopt::simd {
namespace {

void diagonal_phase(double* amps, const double* diag, std::size_t n, double gamma) {
  for (std::size_t z = 0; z < n; ++z) {
    const double angle = gamma * diag[z];
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double re = amps[2 * z];
    const double im = amps[2 * z + 1];
    // (re + i im)(c - i s)
    amps[2 * z] = re * c + im * s;
    amps[2 * z + 1] = im * c - re * s;
  }
}

void x_rotation_layer(double* amps, unsigned n_qubits, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const std::size_t n = std::size_t{1} << n_qubits;
  for (unsigned q = 0; q < n_qubits; ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < n; base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const std::size_t j = i + stride;
        const double re0 = amps[2 * i], im0 = amps[2 * i + 1];
        const double re1 = amps[2 * j], im1 = amps[2 * j + 1];
        amps[2 * i] = c * re0 + s * im1;
        amps[2 * i + 1] = c * im0 - s * re1;
        amps[2 * j] = c * re1 + s * im0;
        amps[2 * j + 1] = c * im1 - s * re0;
      }
    }
  }
}

// kappa = -i * s * i^{y_count}
void rotation_factor(unsigned y_count, double s, double& kr, double& ki) {
  switch (y_count % 4) {
    case 0: kr = 0.0; ki = -s; break;
    case 1: kr = s; ki = 0.0; break;
    case 2: kr = 0.0; ki = s; break;
    default: kr = -s; ki = 0.0; break;
  }
}

double parity_sign(std::uint64_t v) { return (std::popcount(v) & 1) ? -1.0 : 1.0; }

void pauli_rotation(const double* in, double* out, std::size_t n, PauliMasks masks,
                    double theta) {
  const double c = std::cos(theta);
  double kr = 0.0, ki = 0.0;
  rotation_factor(masks.y_count, std::sin(theta), kr, ki);
  for (std::size_t w = 0; w < n; ++w) {
    const std::size_t p = w ^ masks.flip;
    const double sign = parity_sign(p & masks.phase);
    const double pr = in[2 * p] * sign, pi = in[2 * p + 1] * sign;
    out[2 * w] = c * in[2 * w] + (kr * pr - ki * pi);
    out[2 * w + 1] = c * in[2 * w + 1] + (kr * pi + ki * pr);
  }
}

double diagonal_expectation(const double* amps, const double* diag, std::size_t n) {
  double acc = 0.0;
  for (std::size_t z = 0; z < n; ++z) {
    acc += (amps[2 * z] * amps[2 * z] + amps[2 * z + 1] * amps[2 * z + 1]) * diag[z];
  }
  return acc;
}

double pauli_expectation(const double* amps, std::size_t n, PauliMasks masks) {
  // S = sum_w sign(w ^ flip) conj(a_w) a_{w ^ flip}; result = Re(i^y S).
  double sr = 0.0, si = 0.0;
  for (std::size_t w = 0; w < n; ++w) {
    const std::size_t p = w ^ masks.flip;
    const double sign = parity_sign(p & masks.phase);
    const double ar = amps[2 * w], ai = amps[2 * w + 1];
    const double br = amps[2 * p], bi = amps[2 * p + 1];
    sr += sign * (ar * br + ai * bi);
    si += sign * (ar * bi - ai * br);
  }
  switch (masks.y_count % 4) {
    case 0: return sr;
    case 1: return -si;
    case 2: return -sr;
    default: return si;
  }
}

void probabilities(const double* amps, double* out, std::size_t n) {
  for (std::size_t z = 0; z < n; ++z) {
    out[z] = amps[2 * z] * amps[2 * z] + amps[2 * z + 1] * amps[2 * z + 1];
  }
}

// One Box-Muller step per lane: cosine branch to `cos_out`, sine branch to
// `sin_out`.
void box_muller_step(NormalStream& stream, double* cos_out, double* sin_out) {
  for (int lane = 0; lane < 4; ++lane) {
    const std::uint64_t a = detail::xoshiro_next(stream.state, lane);
    const std::uint64_t b = detail::xoshiro_next(stream.state, lane);
    const double radius_uniform = 2.0 - detail::unit_interval_from_bits(a);  // (0, 1]
    const double turns = detail::unit_interval_from_bits(b) - 1.0;           // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(radius_uniform));
    const double angle = 2.0 * std::numbers::pi * turns;
    cos_out[lane] = radius * std::cos(angle);
    sin_out[lane] = radius * std::sin(angle);
  }
}

void next_normal_vector(NormalStream& stream, double* out) {
  if (stream.has_pending) {
    for (int lane = 0; lane < 4; ++lane) out[lane] = stream.pending[lane];
    stream.has_pending = false;
    return;
  }
  box_muller_step(stream, out, stream.pending);
  stream.has_pending = true;
}

void normal_vectors(NormalStream& stream, double* out, std::size_t vectors) {
  for (std::size_t v = 0; v < vectors; ++v) next_normal_vector(stream, out + 4 * v);
}

void policy_moments(const PolicyModel& model, NormalStream& stream, std::size_t samples,
                    PolicyMoments& moments) {
  const std::size_t d = model.dim;
  // Lane-wise accumulators, combined in the same order as the vector code.
  std::vector<double> z(4 * d), u(4 * d);
  std::vector<double> acc_z(4 * d, 0.0), acc_zg(4 * d, 0.0), acc_z2(4 * d, 0.0),
      acc_z2g(4 * d, 0.0);
  double acc_g[4] = {0.0, 0.0, 0.0, 0.0};

  for (std::size_t block = 0; block < samples; block += 4) {
    for (std::size_t j = 0; j < d; ++j) next_normal_vector(stream, &z[4 * j]);
    for (int lane = 0; lane < 4; ++lane) {
      const double weight = (block + lane < samples) ? 1.0 : 0.0;
      for (std::size_t j = 0; j < d; ++j) u[4 * j + lane] = model.sigma[j] * z[4 * j + lane];
      double value = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double t = model.gradient[j];
        for (std::size_t k = 0; k < d; ++k) t += model.curvature[j * d + k] * u[4 * k + lane];
        value += u[4 * j + lane] * t;
      }
      value *= weight;
      acc_g[lane] += value;
      for (std::size_t j = 0; j < d; ++j) {
        const double zj = z[4 * j + lane] * weight;
        const double z2 = zj * z[4 * j + lane];
        acc_z[4 * j + lane] += zj;
        acc_zg[4 * j + lane] += zj * value;
        acc_z2[4 * j + lane] += z2;
        acc_z2g[4 * j + lane] += z2 * value;
      }
    }
  }
  auto reduce = [](const double* lanes) { return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]); };
  moments.sum_value += reduce(acc_g);
  for (std::size_t j = 0; j < d; ++j) {
    moments.sum_z[j] += reduce(&acc_z[4 * j]);
    moments.sum_z_value[j] += reduce(&acc_zg[4 * j]);
    moments.sum_z2[j] += reduce(&acc_z2[4 * j]);
    moments.sum_z2_value[j] += reduce(&acc_z2g[4 * j]);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      Backend::Scalar,   diagonal_phase, x_rotation_layer, pauli_rotation, diagonal_expectation,
      pauli_expectation, probabilities,  normal_vectors,   policy_moments,
  };
  return table;
}

}  // namespace vqopt::simd
