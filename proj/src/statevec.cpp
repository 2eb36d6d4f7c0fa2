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

#include "vqopt/statevec.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vqopt/errors.hpp"

namespace vqopt {
namespace {

void check_qubits(unsigned n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxQubits) + "]");
  }
}

void check_length(const StateVector& state, std::size_t len, const char* what) {
  if (len != state.size()) {
    throw std::invalid_argument(std::string(what) + " length " + std::to_string(len) +
                                " does not match state length " + std::to_string(state.size()));
  }
}

}  // namespace

StateVector::StateVector(unsigned n_qubits) : n_qubits_(n_qubits) {
  check_qubits(n_qubits);
  amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
  const std::size_t len = amplitudes.size();
  if (len < 2 || (len & (len - 1)) != 0) {
    throw std::invalid_argument("amplitude count must be a power of two >= 2");
  }
  StateVector s;
  s.n_qubits_ = static_cast<unsigned>(std::countr_zero(len));
  check_qubits(s.n_qubits_);
  s.amps_ = std::move(amplitudes);
  if (std::fabs(s.norm() - 1.0) > 1e-10) throw std::invalid_argument("amplitudes not normalized");
  return s;
}

StateVector StateVector::basis_state(unsigned n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.size()) throw std::invalid_argument("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void StateVector::diagonal_phase(std::span<const double> diag, double gamma) {
  check_length(*this, diag.size(), "diagonal");
  simd::kernels().diagonal_phase(data(), diag.data(), size(), gamma);
}

void StateVector::x_rotation_layer(double beta) {
  simd::kernels().x_rotation_layer(data(), n_qubits_, beta);
}

void StateVector::pauli_exponential(const PauliTerm& term, double theta) {
  if (term.min_qubits() > n_qubits_) throw std::invalid_argument("term exceeds qubit count");
  if (term.is_identity()) {
    const Amplitude phase = std::polar(1.0, -theta);
    for (auto& a : amps_) a *= phase;
    return;
  }
  scratch_.resize(amps_.size());
  simd::kernels().pauli_rotation(data(), reinterpret_cast<double*>(scratch_.data()), size(),
                                 term.masks(), theta);
  amps_.swap(scratch_);
}

StateVector init_plus_state(unsigned n) {
  check_qubits(n);
  std::vector<Amplitude> amps(std::size_t{1} << n, Amplitude{std::pow(2.0, -0.5 * n), 0.0});
  return StateVector::from_amplitudes(std::move(amps));
}

StateVector apply_diagonal_phase(StateVector state, std::span<const double> diag, double gamma) {
  state.diagonal_phase(diag, gamma);
  return state;
}

StateVector apply_x_rotation_layer(StateVector state, double beta) {
  state.x_rotation_layer(beta);
  return state;
}

StateVector apply_pauli_exponential(StateVector state, const PauliTerm& term, double theta) {
  state.pauli_exponential(term, theta);
  return state;
}

double expectation(const StateVector& state, const PauliSum& h) {
  if (h.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("Hamiltonian acts on " + std::to_string(h.n_qubits()) +
                                " qubits, state has " + std::to_string(state.n_qubits()));
  }
  const auto& k = simd::kernels();
  double total = 0.0;
  for (const auto& t : h.terms()) {
    total += t.coefficient * (t.is_identity() ? 1.0 : k.pauli_expectation(state.data(), state.size(), t.masks()));
  }
  return total;
}

double expectation_diagonal(const StateVector& state, std::span<const double> diag) {
  check_length(state, diag.size(), "diagonal");
  return simd::kernels().diagonal_expectation(state.data(), diag.data(), state.size());
}

DiagonalObservable::DiagonalObservable(std::vector<double> diag) : diag_(std::move(diag)) {
  levels_ = diag_;
  std::sort(levels_.begin(), levels_.end());
  levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
  level_of_.resize(diag_.size());
  for (std::size_t z = 0; z < diag_.size(); ++z) {
    level_of_[z] = static_cast<std::uint32_t>(
        std::lower_bound(levels_.begin(), levels_.end(), diag_[z]) - levels_.begin());
  }
}

double sample_diagonal_estimate(const StateVector& state, const DiagonalObservable& obs,
                                std::uint64_t shots, Rng& rng) {
  if (shots == 0) throw std::invalid_argument("shot count must be >= 1");
  check_length(state, obs.diagonal().size(), "diagonal");

  std::vector<double> prob(state.size());
  simd::kernels().probabilities(state.data(), prob.data(), state.size());
  std::vector<double> level_prob(obs.levels().size(), 0.0);
  for (std::size_t z = 0; z < prob.size(); ++z) level_prob[obs.level_of()[z]] += prob[z];
  double total = 0.0;
  for (double p : level_prob) total += p;

  // Sequential conditional binomials give an exact multinomial draw.
  std::uint64_t remaining = shots;
  double remaining_prob = total;
  double sum = 0.0;
  const std::size_t last = level_prob.size() - 1;
  for (std::size_t l = 0; l <= last && remaining > 0; ++l) {
    std::uint64_t count = remaining;
    if (l < last) {
      const double q = remaining_prob > 0.0 ? std::clamp(level_prob[l] / remaining_prob, 0.0, 1.0) : 1.0;
      if (q < 1.0) {
        std::binomial_distribution<std::uint64_t> binom(remaining, q);
        count = binom(rng);
      }
    }
    sum += static_cast<double>(count) * obs.levels()[l];
    remaining -= count;
    remaining_prob -= level_prob[l];
  }
  return sum / static_cast<double>(shots);
}

double sample_diagonal_estimate(const StateVector& state, std::span<const double> diag,
                                std::uint64_t shots, Rng& rng) {
  return sample_diagonal_estimate(state, DiagonalObservable({diag.begin(), diag.end()}), shots, rng);
}

std::pair<double, double> extremal_eigenvalues(const PauliSum& h) {
  if (h.n_qubits() > kMaxDiagonalizationQubits) {
    throw UnsupportedError("dense diagonalization limited to " +
                           std::to_string(kMaxDiagonalizationQubits) + " qubits");
  }
  if (h.is_diagonal()) {
    const auto diag = h.diagonal();
    const auto [lo, hi] = std::minmax_element(diag.begin(), diag.end());
    return {*lo, *hi};
  }
  const std::size_t n = std::size_t{1} << h.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& t : h.terms()) {
    const auto masks = t.masks();
    const Amplitude iy = std::pow(Amplitude{0.0, 1.0}, static_cast<int>(masks.y_count % 4));
    for (std::size_t z = 0; z < n; ++z) {
      const double sign = (std::popcount(z & masks.phase) & 1) ? -1.0 : 1.0;
      m(z ^ masks.flip, z) += t.coefficient * sign * iy;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return {solver.eigenvalues()(0), solver.eigenvalues()(n - 1)};
}

}  // namespace vqopt
