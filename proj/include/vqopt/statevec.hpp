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
 * Dense statevector simulation.
 *
 * Basis ordering: qubit 0 is the least significant bit of the basis index,
 * so |q2 q1 q0> has index q0 + 2 q1 + 4 q2.
 */

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vqopt/pauli.hpp"
#include "vqopt/rng.hpp"

namespace vqopt {

inline constexpr unsigned kMaxQubits = 12;
inline constexpr unsigned kMaxDiagonalizationQubits = 10;

using Amplitude = std::complex<double>;

class StateVector {
 public:
  /// |0...0> on n qubits. Throws std::invalid_argument unless 1 <= n <= 12.
  explicit StateVector(unsigned n_qubits);

  /// Throws std::invalid_argument when the length is not a power of two in
  /// range or the norm differs from 1 by more than 1e-10.
  static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);
  static StateVector basis_state(unsigned n_qubits, std::uint64_t index);

  unsigned n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amps_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }
  Amplitude operator[](std::size_t z) const { return amps_[z]; }
  double norm() const;

  // Raw interleaved (re, im) access for the kernels.
  double* data() { return reinterpret_cast<double*>(amps_.data()); }
  const double* data() const { return reinterpret_cast<const double*>(amps_.data()); }

  // In-place forms of the free functions below.
  void diagonal_phase(std::span<const double> diag, double gamma);
  void x_rotation_layer(double beta);
  void pauli_exponential(const PauliTerm& term, double theta);

 private:
  StateVector() = default;
  unsigned n_qubits_ = 0;
  std::vector<Amplitude> amps_;
  std::vector<Amplitude> scratch_;
};

/// Every amplitude 2^(-n/2).
StateVector init_plus_state(unsigned n);

/// amplitude_z *= exp(-i gamma diag_z).
StateVector apply_diagonal_phase(StateVector state, std::span<const double> diag, double gamma);

/// exp(-i beta X) on every qubit.
StateVector apply_x_rotation_layer(StateVector state, double beta);

/// exp(-i theta P) with P the term's Pauli string; the term coefficient is
/// ignored (callers fold it into theta).
StateVector apply_pauli_exponential(StateVector state, const PauliTerm& term, double theta);

/// Re <psi|H|psi>.
double expectation(const StateVector& state, const PauliSum& h);
double expectation_diagonal(const StateVector& state, std::span<const double> diag);

/// Diagonal observable grouped by distinct eigenvalue, so that M-shot
/// sampling reduces to a multinomial draw over the levels.
class DiagonalObservable {
 public:
  explicit DiagonalObservable(std::vector<double> diag);

  const std::vector<double>& diagonal() const { return diag_; }
  const std::vector<double>& levels() const { return levels_; }
  const std::vector<std::uint32_t>& level_of() const { return level_of_; }

 private:
  std::vector<double> diag_;
  std::vector<double> levels_;
  std::vector<std::uint32_t> level_of_;
};

/// Mean of diag_z over M basis states drawn with probability |amplitude_z|^2.
/// The draw is exact in distribution: outcome counts per distinct eigenvalue
/// are multinomial. Throws std::invalid_argument for M = 0 or size mismatch.
double sample_diagonal_estimate(const StateVector& state, const DiagonalObservable& obs,
                                std::uint64_t shots, Rng& rng);
double sample_diagonal_estimate(const StateVector& state, std::span<const double> diag,
                                std::uint64_t shots, Rng& rng);

/// (E_min, E_max) of the 2^n x 2^n matrix. Diagonal sums are read off the
/// diagonal; otherwise a dense Hermitian eigensolve is used. Throws
/// UnsupportedError above 10 qubits.
std::pair<double, double> extremal_eigenvalues(const PauliSum& h);

}  // namespace vqopt
