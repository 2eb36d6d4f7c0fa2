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

#include "vqopt/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace vqopt {

PauliTerm PauliTerm::parse(double coefficient, std::string_view spec) {
  PauliTerm term;
  term.coefficient = coefficient;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    while (pos < spec.size() && spec[pos] == ' ') ++pos;
    if (pos >= spec.size()) break;
    const char op = spec[pos++];
    if (op == 'I') continue;
    if (op != 'X' && op != 'Y' && op != 'Z') {
      throw std::invalid_argument("bad Pauli label '" + std::string(spec) + "'");
    }
    std::size_t end = pos;
    while (end < spec.size() && spec[end] >= '0' && spec[end] <= '9') ++end;
    if (end == pos) throw std::invalid_argument("missing qubit index in '" + std::string(spec) + "'");
    const unsigned qubit = static_cast<unsigned>(std::stoul(std::string(spec.substr(pos, end - pos))));
    if (!term.paulis.emplace(qubit, static_cast<Pauli>(op)).second) {
      throw std::invalid_argument("qubit repeated in '" + std::string(spec) + "'");
    }
    pos = end;
  }
  return term;
}

bool PauliTerm::is_diagonal() const {
  return std::all_of(paulis.begin(), paulis.end(),
                     [](const auto& kv) { return kv.second == Pauli::Z; });
}

unsigned PauliTerm::min_qubits() const { return paulis.empty() ? 0 : paulis.rbegin()->first + 1; }

simd::PauliMasks PauliTerm::masks() const {
  simd::PauliMasks m;
  for (const auto& [qubit, op] : paulis) {
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    if (op != Pauli::Z) m.flip |= bit;
    if (op != Pauli::X) m.phase |= bit;
    if (op == Pauli::Y) ++m.y_count;
  }
  return m;
}

std::string PauliTerm::label() const {
  if (paulis.empty()) return "I";
  std::string out;
  for (const auto& [qubit, op] : paulis) {
    if (!out.empty()) out += ' ';
    out += static_cast<char>(op);
    out += std::to_string(qubit);
  }
  return out;
}

void PauliSum::add(const PauliTerm& term) {
  if (term.min_qubits() > n_qubits_) {
    throw std::invalid_argument("term " + term.label() + " exceeds " + std::to_string(n_qubits_) +
                                " qubits");
  }
  for (auto& existing : terms_) {
    if (existing.paulis == term.paulis) {
      existing.coefficient += term.coefficient;
      return;
    }
  }
  terms_.push_back(term);
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (other.n_qubits_ > n_qubits_) n_qubits_ = other.n_qubits_;
  for (const auto& t : other.terms_) add(t);
  return *this;
}

PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }

void PauliSum::prune(double tolerance) {
  std::erase_if(terms_, [&](const PauliTerm& t) { return std::fabs(t.coefficient) <= tolerance; });
}

bool PauliSum::is_diagonal() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const PauliTerm& t) { return t.is_diagonal(); });
}

double PauliSum::identity_coefficient() const {
  double c = 0.0;
  for (const auto& t : terms_) {
    if (t.is_identity()) c += t.coefficient;
  }
  return c;
}

std::vector<double> PauliSum::diagonal() const {
  if (!is_diagonal()) throw std::invalid_argument("PauliSum has off-diagonal terms");
  const std::size_t n = std::size_t{1} << n_qubits_;
  std::vector<double> diag(n, 0.0);
  for (const auto& t : terms_) {
    const std::uint64_t phase = t.masks().phase;
    for (std::size_t z = 0; z < n; ++z) {
      diag[z] += (std::popcount(z & phase) & 1) ? -t.coefficient : t.coefficient;
    }
  }
  return diag;
}

}  // namespace vqopt
