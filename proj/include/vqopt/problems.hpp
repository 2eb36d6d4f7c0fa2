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

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vqopt/pauli.hpp"
#include "vqopt/statevec.hpp"

namespace vqopt {

// ---------------------------------------------------------------------------
// Graphs and diagonal Hamiltonians

struct Graph {
  unsigned n_vertices = 0;
  std::vector<std::pair<unsigned, unsigned>> edges;  // (u, v) with u < v, sorted
};

/// Random simple connected 3-regular graph from the pairing model with
/// rejection. Throws std::invalid_argument for odd n or n < 4.
Graph gen_3regular(unsigned n, std::uint64_t seed);

/// C = sum over edges of (I - Z_u Z_v) / 2.
PauliSum maxcut_hamiltonian(const Graph& g);

/// H = sum_{i<j} J_ij Z_i Z_j with J_ij uniform on {-1, +1}.
PauliSum sk_hamiltonian(unsigned n, std::uint64_t seed);

struct DiagonalExtrema {
  double min = 0.0;
  double max = 0.0;
  std::uint64_t argmax = 0;
};

/// Exhaustive enumeration. Throws std::invalid_argument on off-diagonal terms
/// or more than 24 qubits.
DiagonalExtrema brute_force_diagonal_extrema(const PauliSum& h);

// ---------------------------------------------------------------------------
// Fermions

struct LadderOp {
  unsigned mode = 0;
  bool creation = false;
};

/// coefficient * ops[0] ops[1] ... (leftmost acts last).
struct FermionTerm {
  std::complex<double> coefficient{1.0, 0.0};
  std::vector<LadderOp> ops;
};

/// Jordan-Wigner image with a_j = Z_0 ... Z_{j-1} (X_j + i Y_j) / 2. The sum
/// must be Hermitian; terms with |coefficient| <= 1e-14 are dropped.
PauliSum jordan_wigner(const std::vector<FermionTerm>& terms, unsigned n_modes);

/// Applies a (not necessarily Hermitian) fermion operator to a state without
/// renormalizing.
std::vector<Amplitude> apply_fermion_operator(const std::vector<FermionTerm>& terms,
                                              const std::vector<Amplitude>& amplitudes);

// ---------------------------------------------------------------------------
// 2x2 Hubbard model
//
// Sites  0 - 1      qubit = 2 * site + spin (up = 0, down = 1)
//        |   |
//        2 - 3

inline constexpr unsigned kHubbardSites = 4;
inline constexpr unsigned kHubbardQubits = 8;

inline unsigned hubbard_qubit(unsigned site, unsigned spin) { return 2 * site + spin; }

struct HubbardHamiltonian {
  PauliSum h;
  PauliSum t_h;  // horizontal hopping, edges (0,1), (2,3)
  PauliSum t_v;  // vertical hopping, edges (0,2), (1,3)
  PauliSum v;    // on-site interaction
};

/// Each group has its terms sorted by (qubit, Pauli) support, which fixes the
/// ansatz term order.
HubbardHamiltonian hubbard_hamiltonian(double t = 1.0, double u = 4.0);

/// Orbital creation operators b_k^dagger of the single-particle hopping
/// eigenbasis for one spin, k = 0..3 with energies {-2, 0, 0, 2} (t = 1).
std::vector<FermionTerm> hubbard_orbital_creation(unsigned orbital, unsigned spin);

/// (b1u^dag b2d^dag + b2u^dag b1d^dag) b0u^dag b0d^dag |vac> / sqrt(2).
StateVector hubbard_initial_state();

// ---------------------------------------------------------------------------
// Ansatz circuits

struct AnsatzStep {
  enum class Kind { DiagonalPhase, XMixer, PauliRotation };
  Kind kind = Kind::PauliRotation;
  std::size_t param = 0;
  /// PauliRotation applies exp(-i scale * theta[param] * P).
  double scale = 1.0;
  PauliTerm term;
};

/// One exp(-i phi P) factor whose angle depends linearly on a parameter:
/// d phi / d theta[param] = weight.
struct Generator {
  std::size_t step = 0;
  std::size_t param = 0;
  double weight = 1.0;
  PauliTerm pauli;  // coefficient unused
};

/// Extra exp(-i angle P_g) inserted right after generator g's step. Within
/// a phase or mixer layer all factors commute, so this equals shifting
/// that factor's own angle.
struct Shift {
  std::size_t generator = 0;
  double angle = 0.0;
};

class Ansatz {
 public:
  /// U_B(beta_p) U_C(gamma_p) ... U_B(beta_1) U_C(gamma_1) |+>, parameters
  /// laid out (gamma_1..gamma_p, beta_1..beta_p).
  static Ansatz qaoa(const PauliSum& diagonal_h, unsigned p);

  /// p second-order layers over (T_h, T_v, V), parameters laid out
  /// (th_1, tv_1, tU_1, th_2, ...).
  static Ansatz hubbard(const HubbardHamiltonian& h, unsigned p, StateVector initial);

  unsigned n_qubits() const { return initial_.n_qubits(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<AnsatzStep>& steps() const { return steps_; }
  const std::vector<Generator>& generators() const { return generators_; }

  /// Throws std::invalid_argument on a parameter count mismatch.
  StateVector prepare(std::span<const double> params, const Shift* shift = nullptr) const;

 private:
  StateVector initial_{1};
  std::size_t dimension_ = 0;
  std::vector<AnsatzStep> steps_;
  std::vector<double> diag_;
  std::vector<Generator> generators_;
};

/// QAOA state for a diagonal Hamiltonian. Throws std::invalid_argument when
/// the angle vectors differ in length or h is not diagonal.
StateVector qaoa_state(const PauliSum& h_diag, std::span<const double> gammas,
                       std::span<const double> betas);

/// Second-order Hubbard ansatz from hubbard_initial_state (t = 1, U = 4).
/// Throws std::invalid_argument unless the length is a positive multiple of 3.
StateVector hubbard_ansatz_state(std::span<const double> thetas);

// ---------------------------------------------------------------------------
// Problem setups

enum class ProblemKind { MaxCut3Reg, SK, Hubbard };

std::string to_string(ProblemKind kind);
/// Accepts "maxcut3reg"/"3reg", "sk", "hubbard". Throws std::invalid_argument.
ProblemKind parse_problem_kind(const std::string& name);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::SK;
  unsigned p = 1;
  unsigned n = 8;  // vertices / spins; ignored for Hubbard
  std::uint64_t instance_seed = 0;
  bool operator==(const ProblemSpec&) const = default;
};

struct ScoreNorm {
  double c_max = 0.0;  // Max-Cut
  double e_min = 0.0;  // SK, Hubbard
  double e_max = 0.0;
};

struct OptimumResult {
  std::vector<double> x;
  double score = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct ProblemSetup {
  ProblemSpec spec;
  PauliSum hamiltonian;
  std::optional<Graph> graph;
  std::optional<HubbardHamiltonian> hubbard;
  Ansatz ansatz;
  std::size_t dim = 0;
  ScoreNorm norm;
  /// Objective = sign * energy is minimized; -1 for Max-Cut, +1 otherwise.
  double sign = 1.0;
  /// Diagonal of the Hamiltonian (QAOA problems only).
  std::vector<double> diagonal;
  /// Unperturbed starting point: the located optimum for QAOA, the
  /// adiabatic-ramp parameters for Hubbard.
  std::vector<double> base_guess;
  OptimumResult optimum;
};

double normalized_score(const ProblemSetup& setup, double energy);

/// Exact energy at a parameter vector.
double exact_energy(const ProblemSetup& setup, std::span<const double> params);

/// d energy / d theta by the parameter-shift rule on noiseless evaluations.
std::vector<double> exact_gradient(const ProblemSetup& setup, std::span<const double> params);

/// Adiabatic-ramp guess for the Hubbard ansatz: p second-order steps of size
/// A / p, A = 0.1 U p, for H(t) = T + (t / A) V sampled at step midpoints.
std::vector<double> hubbard_ramp_guess(unsigned p, double u = 4.0);

/// QAOA: base_guess plus a uniformly random direction of length exactly 0.1.
/// Hubbard: the ramp guess.
std::vector<double> initial_guess(const ProblemSetup& setup, std::uint64_t seed);

/// BFGS with Armijo backtracking on the exact objective and parameter-shift
/// gradient; converged when the gradient norm falls below 1e-8.
OptimumResult find_ansatz_optimum(const ProblemSetup& setup, std::span<const double> x0,
                                  int max_iterations = 500);

/// Builds the Hamiltonian, ansatz and norms, and locates the reference
/// optimum. Results are cached per spec; the returned setup is immutable.
std::shared_ptr<const ProblemSetup> make_problem(const ProblemSpec& spec);

/// JSON description of an instance: spec, graph edges or couplings, Hubbard
/// parameters, norm constants and the reference optimum.
std::string problem_to_json(const ProblemSetup& setup);

}  // namespace vqopt
