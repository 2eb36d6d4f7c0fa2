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

#pragma once

/**
 * @file
 * Data-parallel inner loops used by the simulator and by the model policy
 * gradient optimizer.
 *
 * Every kernel has a scalar reference implementation and, on x86-64 hosts
 * with AVX2+FMA, a vectorized variant. The active table is chosen once at
 * startup (overridable with the VQOPT_SIMD environment variable, values
 * `scalar`, `avx2` or `auto`) and both variants are checked against each
 * other by the equivalence tests.
 *
 * Amplitude arrays are interleaved (re, im) doubles, i.e. the layout of
 * `std::complex<double>[n]`. `n` counts complex elements.
 */

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace vqopt::simd {

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend backend);

/// Bit masks describing a Pauli string P = i^{y_count} X^{flip} Z^{phase}.
///
/// P|z> = i^{y_count} (-1)^{popcount(z & phase)} |z ^ flip>.
struct PauliMasks {
  std::uint64_t flip = 0;
  std::uint64_t phase = 0;
  unsigned y_count = 0;
};

/// Four interleaved xoshiro256++ generators feeding a Box-Muller transform.
///
/// The stream is consumed in vectors of four normals (one per lane). Each
/// Box-Muller step yields two such vectors, the cosine branch first; the sine
/// branch is held in `pending` until requested.
struct NormalStream {
  alignas(32) std::uint64_t state[16] = {};  // [word * 4 + lane]
  alignas(32) double pending[4] = {};
  bool has_pending = false;
};

NormalStream make_normal_stream(std::uint64_t seed);

/// Local quadratic model around the policy mean:
/// F(mu + u) - F(mu) = gradient . u + u^T curvature u.
struct PolicyModel {
  std::size_t dim = 0;
  const double* sigma = nullptr;      // [dim]
  const double* gradient = nullptr;   // [dim]
  const double* curvature = nullptr;  // [dim * dim], symmetric, row-major
};

/// Sums over policy samples x = mu + sigma * z of G = F(x) - F(mu).
/// Per-dimension arrays hold sums of z, z*G, z^2 and z^2*G.
struct PolicyMoments {
  double sum_value = 0.0;
  double* sum_z = nullptr;
  double* sum_z_value = nullptr;
  double* sum_z2 = nullptr;
  double* sum_z2_value = nullptr;
};

struct KernelTable {
  Backend backend;

  /// amps[z] *= exp(-i * gamma * diag[z]).
  void (*diagonal_phase)(double* amps, const double* diag, std::size_t n, double gamma);

  /// Applies exp(-i * beta * X) to every qubit.
  void (*x_rotation_layer)(double* amps, unsigned n_qubits, double beta);

  /// out = (cos(theta) I - i sin(theta) P) in. `in` and `out` must not alias.
  void (*pauli_rotation)(const double* in, double* out, std::size_t n, PauliMasks masks,
                         double theta);

  /// sum_z |amps[z]|^2 diag[z]
  double (*diagonal_expectation)(const double* amps, const double* diag, std::size_t n);

  /// Re <amps| P |amps>
  double (*pauli_expectation)(const double* amps, std::size_t n, PauliMasks masks);

  /// out[z] = |amps[z]|^2
  void (*probabilities)(const double* amps, double* out, std::size_t n);

  /// Writes `vectors` groups of four standard normals to out[4 * vectors].
  void (*normal_vectors)(NormalStream& stream, double* out, std::size_t vectors);

  /// Draws `samples` policy points and accumulates into `moments` (which the
  /// caller zero-initializes). Lanes past `samples` in the final block
  /// consume normals but contribute nothing.
  void (*policy_moments)(const PolicyModel& model, NormalStream& stream, std::size_t samples,
                         PolicyMoments& moments);
};

const KernelTable& scalar_kernels();

/// Nullptr when the binary or the host lacks AVX2/FMA support.
const KernelTable* avx2_kernels();

bool backend_available(Backend backend);

/// The table selected at startup or by the last call to set_backend.
const KernelTable& kernels();

/// Throws UnsupportedError when the backend is unavailable. Not thread-safe
/// with respect to in-flight kernel calls; intended for tests and tools.
void set_backend(Backend backend);

Backend active_backend();

}  // namespace vqopt::simd
