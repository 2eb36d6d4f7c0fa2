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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vqopt/simd/kernels.hpp"

namespace vqopt {

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

/// coefficient * P, with P a tensor product of single-qubit Paulis. An empty
/// map is the identity.
struct PauliTerm {
  double coefficient = 0.0;
  std::map<unsigned, Pauli> paulis;

  /// Parses a compact form such as "X0 Z3 Y4"; "" or "I" is the identity.
  static PauliTerm parse(double coefficient, std::string_view spec);

  bool is_identity() const { return paulis.empty(); }
  bool is_diagonal() const;
  /// Highest qubit index plus one; 0 for the identity.
  unsigned min_qubits() const;
  simd::PauliMasks masks() const;
  /// "X0 Z3" style label, "I" for the identity.
  std::string label() const;
};

/// A Hermitian operator as a real-weighted sum of Pauli strings. Terms with
/// identical strings are merged on insertion, preserving first-insertion
/// order.
class PauliSum {
 public:
  explicit PauliSum(unsigned n_qubits = 0) : n_qubits_(n_qubits) {}

  unsigned n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  /// Throws std::invalid_argument when a qubit index is out of range.
  void add(const PauliTerm& term);
  void add(double coefficient, std::string_view spec) { add(PauliTerm::parse(coefficient, spec)); }
  PauliSum& operator+=(const PauliSum& other);

  /// Removes terms whose |coefficient| <= tolerance.
  void prune(double tolerance);

  bool is_diagonal() const;
  /// Sum of identity-term coefficients.
  double identity_coefficient() const;
  /// Diagonal of the operator over all 2^n basis states. Throws
  /// std::invalid_argument when a term is not diagonal.
  std::vector<double> diagonal() const;

 private:
  unsigned n_qubits_;
  std::vector<PauliTerm> terms_;
};

PauliSum operator+(PauliSum a, const PauliSum& b);

}  // namespace vqopt
