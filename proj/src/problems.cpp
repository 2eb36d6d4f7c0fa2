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

#include "vqopt/problems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "vqopt/rng.hpp"

namespace vqopt {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

bool is_connected(unsigned n, const std::vector<std::pair<unsigned, unsigned>>& edges) {
  std::vector<unsigned> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](unsigned v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& [u, v] : edges) parent[find(u)] = find(v);
  const unsigned root = find(0);
  for (unsigned v = 1; v < n; ++v) {
    if (find(v) != root) return false;
  }
  return true;
}

// Pauli strings in the form X^x Z^z (X factor on the left), so Y = i X Z.
struct XZ {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  auto operator<=>(const XZ&) const = default;
};
using OpSum = std::map<XZ, std::complex<double>>;

OpSum multiply(const OpSum& a, const OpSum& b) {
  OpSum out;
  for (const auto& [pa, ca] : a) {
    for (const auto& [pb, cb] : b) {
      // Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
      const double sign = (std::popcount(pa.z & pb.x) & 1) ? -1.0 : 1.0;
      out[{pa.x ^ pb.x, pa.z ^ pb.z}] += sign * ca * cb;
    }
  }
  return out;
}

OpSum ladder(const LadderOp& op, unsigned n_modes) {
  if (op.mode >= n_modes) throw std::invalid_argument("fermion mode out of range");
  const std::uint64_t bit = std::uint64_t{1} << op.mode;
  const std::uint64_t string = bit - 1;
  // a^dag = X (I + Z) / 2, a = X (I - Z) / 2 on the mode, Z on all lower modes.
  return {{{bit, string}, 0.5}, {{bit, string | bit}, op.creation ? 0.5 : -0.5}};
}

OpSum to_opsum(const std::vector<FermionTerm>& terms, unsigned n_modes) {
  OpSum total;
  for (const auto& term : terms) {
    OpSum product{{{0, 0}, term.coefficient}};
    for (const auto& op : term.ops) product = multiply(product, ladder(op, n_modes));
    for (const auto& [p, c] : product) total[p] += c;
  }
  return total;
}

std::vector<std::pair<unsigned, char>> support_key(const PauliTerm& t) {
  std::vector<std::pair<unsigned, char>> key;
  for (const auto& [q, op] : t.paulis) key.emplace_back(q, static_cast<char>(op));
  return key;
}

PauliSum sorted_by_support(const PauliSum& h) {
  std::vector<PauliTerm> terms = h.terms();
  std::sort(terms.begin(), terms.end(), [](const PauliTerm& a, const PauliTerm& b) {
    return support_key(a) < support_key(b);
  });
  PauliSum out(h.n_qubits());
  for (const auto& t : terms) out.add(t);
  return out;
}

std::vector<FermionTerm> hopping(const std::vector<std::pair<unsigned, unsigned>>& edges, double t) {
  std::vector<FermionTerm> terms;
  for (const auto& [i, j] : edges) {
    for (unsigned spin = 0; spin < 2; ++spin) {
      const unsigned qi = hubbard_qubit(i, spin), qj = hubbard_qubit(j, spin);
      terms.push_back({-t, {{qi, true}, {qj, false}}});
      terms.push_back({-t, {{qj, true}, {qi, false}}});
    }
  }
  return terms;
}

const HubbardHamiltonian& default_hubbard() {
  static const HubbardHamiltonian h = hubbard_hamiltonian(1.0, 4.0);
  return h;
}

const StateVector& default_hubbard_initial_state() {
  static const StateVector s = hubbard_initial_state();
  return s;
}

}  // namespace

Graph gen_3regular(unsigned n, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("3-regular graphs need an even vertex count >= 4, got " +
                                std::to_string(n));
  }
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(Stream::Instance)));
  std::vector<unsigned> points(3 * n);
  for (unsigned i = 0; i < 3 * n; ++i) points[i] = i / 3;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::shuffle(points.begin(), points.end(), rng);
    std::set<std::pair<unsigned, unsigned>> edges;
    bool ok = true;
    for (unsigned i = 0; i < 3 * n && ok; i += 2) {
      const unsigned u = std::min(points[i], points[i + 1]);
      const unsigned v = std::max(points[i], points[i + 1]);
      ok = u != v && edges.emplace(u, v).second;
    }
    if (!ok) continue;
    Graph g{n, {edges.begin(), edges.end()}};
    if (is_connected(n, g.edges)) return g;
  }
  throw std::runtime_error("pairing model failed to produce a simple connected graph");
}

PauliSum maxcut_hamiltonian(const Graph& g) {
  PauliSum c(g.n_vertices);
  c.add(0.5 * static_cast<double>(g.edges.size()), "");
  for (const auto& [u, v] : g.edges) {
    PauliTerm t;
    t.coefficient = -0.5;
    t.paulis = {{u, Pauli::Z}, {v, Pauli::Z}};
    c.add(t);
  }
  return c;
}

PauliSum sk_hamiltonian(unsigned n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("SK model needs at least 2 spins");
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(Stream::Instance)));
  PauliSum h(n);
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = i + 1; j < n; ++j) {
      PauliTerm t;
      t.coefficient = (rng() >> 63) ? 1.0 : -1.0;
      t.paulis = {{i, Pauli::Z}, {j, Pauli::Z}};
      h.add(t);
    }
  }
  return h;
}

DiagonalExtrema brute_force_diagonal_extrema(const PauliSum& h) {
  if (h.n_qubits() > 24) throw std::invalid_argument("enumeration limited to 24 qubits");
  const auto diag = h.diagonal();
  DiagonalExtrema out{diag[0], diag[0], 0};
  for (std::size_t z = 1; z < diag.size(); ++z) {
    out.min = std::min(out.min, diag[z]);
    if (diag[z] > out.max) {
      out.max = diag[z];
      out.argmax = z;
    }
  }
  return out;
}

PauliSum jordan_wigner(const std::vector<FermionTerm>& terms, unsigned n_modes) {
  PauliSum out(n_modes);
  for (const auto& [p, c] : to_opsum(terms, n_modes)) {
    // X^x Z^z = (-i)^{|x & z|} (Pauli string with Y where both bits are set)
    const std::uint64_t y = p.x & p.z;
    std::complex<double> coef = c;
    for (int k = 0; k < std::popcount(y); ++k) coef *= std::complex<double>(0.0, -1.0);
    if (std::abs(coef) <= 1e-14) continue;
    if (std::fabs(coef.imag()) > 1e-12) throw std::invalid_argument("fermion operator is not Hermitian");
    PauliTerm term;
    term.coefficient = coef.real();
    for (unsigned q = 0; q < n_modes; ++q) {
      const std::uint64_t bit = std::uint64_t{1} << q;
      if (y & bit) {
        term.paulis[q] = Pauli::Y;
      } else if (p.x & bit) {
        term.paulis[q] = Pauli::X;
      } else if (p.z & bit) {
        term.paulis[q] = Pauli::Z;
      }
    }
    out.add(term);
  }
  return out;
}

std::vector<Amplitude> apply_fermion_operator(const std::vector<FermionTerm>& terms,
                                              const std::vector<Amplitude>& amplitudes) {
  const std::size_t n = amplitudes.size();
  const unsigned modes = static_cast<unsigned>(std::countr_zero(n));
  std::vector<Amplitude> out(n, Amplitude{0.0, 0.0});
  for (const auto& [p, c] : to_opsum(terms, modes)) {
    for (std::size_t w = 0; w < n; ++w) {
      const double sign = (std::popcount(w & p.z) & 1) ? -1.0 : 1.0;
      out[w ^ p.x] += sign * c * amplitudes[w];
    }
  }
  return out;
}

HubbardHamiltonian hubbard_hamiltonian(double t, double u) {
  HubbardHamiltonian out;
  out.t_h = sorted_by_support(jordan_wigner(hopping({{0, 1}, {2, 3}}, t), kHubbardQubits));
  out.t_v = sorted_by_support(jordan_wigner(hopping({{0, 2}, {1, 3}}, t), kHubbardQubits));
  std::vector<FermionTerm> interaction;
  for (unsigned site = 0; site < kHubbardSites; ++site) {
    const unsigned up = hubbard_qubit(site, 0), down = hubbard_qubit(site, 1);
    interaction.push_back({u, {{up, true}, {up, false}, {down, true}, {down, false}}});
  }
  out.v = sorted_by_support(jordan_wigner(interaction, kHubbardQubits));
  out.h = PauliSum(kHubbardQubits);
  out.h += out.t_h;
  out.h += out.t_v;
  out.h += out.v;
  return out;
}

std::vector<FermionTerm> hubbard_orbital_creation(unsigned orbital, unsigned spin) {
  static constexpr double h = 0.5;
  static const double r = 1.0 / std::sqrt(2.0);
  const double table[4][4] = {
      {h, h, h, h},
      {r, 0.0, 0.0, -r},
      {0.0, r, -r, 0.0},
      {h, -h, -h, h},
  };
  if (orbital >= 4 || spin >= 2) throw std::invalid_argument("orbital or spin out of range");
  std::vector<FermionTerm> terms;
  for (unsigned site = 0; site < kHubbardSites; ++site) {
    if (table[orbital][site] != 0.0) {
      terms.push_back({table[orbital][site], {{hubbard_qubit(site, spin), true}}});
    }
  }
  return terms;
}

StateVector hubbard_initial_state() {
  auto apply = [](unsigned orbital, unsigned spin, const std::vector<Amplitude>& amps) {
    return apply_fermion_operator(hubbard_orbital_creation(orbital, spin), amps);
  };
  std::vector<Amplitude> vac(std::size_t{1} << kHubbardQubits, Amplitude{0.0, 0.0});
  vac[0] = 1.0;
  const auto core = apply(0, 0, apply(0, 1, vac));
  const auto a = apply(1, 0, apply(2, 1, core));
  const auto b = apply(2, 0, apply(1, 1, core));
  std::vector<Amplitude> amps(vac.size());
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t z = 0; z < amps.size(); ++z) amps[z] = r * (a[z] + b[z]);
  return StateVector::from_amplitudes(std::move(amps));
}

Ansatz Ansatz::qaoa(const PauliSum& diagonal_h, unsigned p) {
  if (p < 1) throw std::invalid_argument("QAOA depth must be >= 1");
  Ansatz a;
  const unsigned n = diagonal_h.n_qubits();
  a.initial_ = init_plus_state(n);
  a.dimension_ = 2 * std::size_t{p};
  a.diag_ = diagonal_h.diagonal();
  for (unsigned k = 0; k < p; ++k) {
    const std::size_t phase_step = a.steps_.size();
    a.steps_.push_back({AnsatzStep::Kind::DiagonalPhase, k, 1.0, {}});
    for (const auto& t : diagonal_h.terms()) {
      if (!t.is_identity()) a.generators_.push_back({phase_step, k, t.coefficient, t});
    }
    const std::size_t mixer_step = a.steps_.size();
    a.steps_.push_back({AnsatzStep::Kind::XMixer, p + k, 1.0, {}});
    for (unsigned q = 0; q < n; ++q) {
      a.generators_.push_back({mixer_step, p + k, 1.0, PauliTerm{1.0, {{q, Pauli::X}}}});
    }
  }
  return a;
}

Ansatz Ansatz::hubbard(const HubbardHamiltonian& h, unsigned p, StateVector initial) {
  if (p < 1) throw std::invalid_argument("ansatz depth must be >= 1");
  Ansatz a;
  a.initial_ = std::move(initial);
  a.dimension_ = 3 * std::size_t{p};
  const PauliSum* groups[3] = {&h.t_h, &h.t_v, &h.v};
  for (unsigned k = 0; k < p; ++k) {
    std::vector<AnsatzStep> half;
    for (std::size_t g = 0; g < 3; ++g) {
      for (const auto& t : groups[g]->terms()) {
        // The identity only contributes a global phase.
        if (!t.is_identity()) half.push_back({AnsatzStep::Kind::PauliRotation, 3 * k + g, 0.5 * t.coefficient, t});
      }
    }
    std::vector<AnsatzStep> layer = half;
    layer.insert(layer.end(), half.rbegin(), half.rend());
    for (auto& step : layer) {
      a.generators_.push_back({a.steps_.size(), step.param, step.scale, step.term});
      a.steps_.push_back(std::move(step));
    }
  }
  return a;
}

StateVector Ansatz::prepare(std::span<const double> params, const Shift* shift) const {
  if (params.size() != dimension_) {
    throw std::invalid_argument("expected " + std::to_string(dimension_) + " parameters, got " +
                                std::to_string(params.size()));
  }
  if (shift != nullptr && shift->generator >= generators_.size()) {
    throw std::invalid_argument("shift generator out of range");
  }
  StateVector state = initial_;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const AnsatzStep& step = steps_[i];
    const double theta = params[step.param];
    switch (step.kind) {
      case AnsatzStep::Kind::DiagonalPhase: state.diagonal_phase(diag_, theta); break;
      case AnsatzStep::Kind::XMixer: state.x_rotation_layer(theta); break;
      case AnsatzStep::Kind::PauliRotation: state.pauli_exponential(step.term, step.scale * theta); break;
    }
    if (shift != nullptr && generators_[shift->generator].step == i) {
      state.pauli_exponential(generators_[shift->generator].pauli, shift->angle);
    }
  }
  return state;
}

StateVector qaoa_state(const PauliSum& h_diag, std::span<const double> gammas,
                       std::span<const double> betas) {
  if (gammas.size() != betas.size()) throw std::invalid_argument("gamma and beta lengths differ");
  if (gammas.empty()) return init_plus_state(h_diag.n_qubits());
  std::vector<double> params(gammas.begin(), gammas.end());
  params.insert(params.end(), betas.begin(), betas.end());
  return Ansatz::qaoa(h_diag, static_cast<unsigned>(gammas.size())).prepare(params);
}

StateVector hubbard_ansatz_state(std::span<const double> thetas) {
  if (thetas.empty() || thetas.size() % 3 != 0) {
    throw std::invalid_argument("Hubbard ansatz needs a positive multiple of 3 parameters");
  }
  const auto p = static_cast<unsigned>(thetas.size() / 3);
  return Ansatz::hubbard(default_hubbard(), p, default_hubbard_initial_state()).prepare(thetas);
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::MaxCut3Reg: return "maxcut3reg";
    case ProblemKind::SK: return "sk";
    case ProblemKind::Hubbard: return "hubbard";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(const std::string& name) {
  if (name == "maxcut3reg" || name == "3reg" || name == "maxcut") return ProblemKind::MaxCut3Reg;
  if (name == "sk") return ProblemKind::SK;
  if (name == "hubbard") return ProblemKind::Hubbard;
  throw std::invalid_argument("unknown problem '" + name + "'");
}

double normalized_score(const ProblemSetup& setup, double energy) {
  if (setup.spec.kind == ProblemKind::MaxCut3Reg) return energy / setup.norm.c_max;
  return (energy - setup.norm.e_max) / (setup.norm.e_min - setup.norm.e_max);
}

double exact_energy(const ProblemSetup& setup, std::span<const double> params) {
  const StateVector state = setup.ansatz.prepare(params);
  if (!setup.diagonal.empty()) return expectation_diagonal(state, setup.diagonal);
  return expectation(state, setup.hamiltonian);
}

namespace {

double shifted_energy(const ProblemSetup& setup, std::span<const double> params, const Shift& shift) {
  const StateVector state = setup.ansatz.prepare(params, &shift);
  if (!setup.diagonal.empty()) return expectation_diagonal(state, setup.diagonal);
  return expectation(state, setup.hamiltonian);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

std::vector<double> exact_gradient(const ProblemSetup& setup, std::span<const double> params) {
  std::vector<double> grad(setup.ansatz.dimension(), 0.0);
  const auto& gens = setup.ansatz.generators();
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const double plus = shifted_energy(setup, params, {g, kQuarterPi});
    const double minus = shifted_energy(setup, params, {g, -kQuarterPi});
    grad[gens[g].param] += gens[g].weight * (plus - minus);
  }
  return grad;
}

std::vector<double> hubbard_ramp_guess(unsigned p, double u) {
  if (p < 1) throw std::invalid_argument("ansatz depth must be >= 1");
  const double total = 0.1 * u * p;
  const double dt = total / p;
  std::vector<double> x;
  for (unsigned k = 1; k <= p; ++k) {
    const double t_mid = (k - 0.5) * dt;
    x.push_back(dt);
    x.push_back(dt);
    // V already carries the factor U.
    x.push_back(dt * t_mid / total);
  }
  return x;
}

std::vector<double> initial_guess(const ProblemSetup& setup, std::uint64_t seed) {
  std::vector<double> x = setup.base_guess;
  if (setup.spec.kind == ProblemKind::Hubbard) return x;
  Rng rng = make_rng(seed, Stream::InitialGuess);
  std::normal_distribution<double> normal;
  std::vector<double> dir(x.size());
  double len = 0.0;
  while (len < 1e-12) {
    for (auto& v : dir) v = normal(rng);
    len = norm2(dir);
  }
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += 0.1 * dir[i] / len;
  return x;
}

OptimumResult find_ansatz_optimum(const ProblemSetup& setup, std::span<const double> x0,
                                  int max_iterations) {
  const std::size_t d = setup.ansatz.dimension();
  auto objective = [&](const std::vector<double>& x) { return setup.sign * exact_energy(setup, x); };
  auto gradient = [&](const std::vector<double>& x) {
    auto g = exact_gradient(setup, x);
    for (auto& v : g) v *= setup.sign;
    return g;
  };

  OptimumResult out;
  std::vector<double> x(x0.begin(), x0.end());
  double f = objective(x);
  std::vector<double> g = gradient(x);
  std::vector<double> hinv(d * d, 0.0);
  auto reset = [&] {
    std::fill(hinv.begin(), hinv.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i) hinv[i * d + i] = 1.0;
  };
  reset();

  int it = 0;
  for (; it < max_iterations; ++it) {
    if (norm2(g) < 1e-8) break;
    std::vector<double> dir(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) dir[i] -= hinv[i * d + j] * g[j];
    }
    double slope = dot(g, dir);
    if (slope >= 0.0) {
      reset();
      for (std::size_t i = 0; i < d; ++i) dir[i] = -g[i];
      slope = dot(g, dir);
    }
    double step = 1.0;
    std::vector<double> x_new(d);
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < d; ++i) x_new[i] = x[i] + step * dir[i];
      f_new = objective(x_new);
      // Armijo, with slack at the level of rounding error near the optimum.
      if (f_new <= f + 1e-4 * step * slope + 1e-14 * (1.0 + std::fabs(f))) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const std::vector<double> g_new = gradient(x_new);
    std::vector<double> s(d), y(d);
    for (std::size_t i = 0; i < d; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-16) {
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      std::vector<double> hy(d, 0.0);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) hy[i] += hinv[i * d + j] * y[j];
      }
      const double yhy = dot(y, hy);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          hinv[i * d + j] += (1.0 + rho * yhy) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
      }
    }
    x = x_new;
    f = f_new;
    g = g_new;
  }
  out.x = x;
  out.gradient_norm = norm2(g);
  out.converged = out.gradient_norm < 1e-8;
  out.iterations = it;
  out.score = normalized_score(setup, exact_energy(setup, x));
  return out;
}

namespace {

OptimumResult locate_qaoa_optimum(const ProblemSetup& setup) {
  const unsigned p = setup.spec.p;
  struct Start {
    double score;
    std::vector<double> x;
  };
  std::vector<Start> starts;
  // Linear-ramp schedules: gamma grows, beta shrinks across layers.
  for (int gi = -20; gi <= 20; ++gi) {
    for (int bi = -16; bi <= 16; ++bi) {
      if (gi == 0 || bi == 0) continue;
      const double dg = 0.1 * gi, db = 0.1 * bi;
      std::vector<double> x(2 * p);
      for (unsigned k = 0; k < p; ++k) {
        const double frac = (k + 0.5) / p;
        x[k] = dg * frac;
        x[p + k] = db * (1.0 - frac);
      }
      starts.push_back({normalized_score(setup, exact_energy(setup, x)), std::move(x)});
    }
  }
  std::stable_sort(starts.begin(), starts.end(),
                   [](const Start& a, const Start& b) { return a.score > b.score; });
  OptimumResult best;
  bool have = false;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, starts.size()); ++i) {
    OptimumResult r = find_ansatz_optimum(setup, starts[i].x);
    if (!r.converged) continue;
    const bool better = !have || r.score > best.score + 1e-9 ||
                        (std::fabs(r.score - best.score) <= 1e-9 && norm2(r.x) < norm2(best.x));
    if (better) {
      best = std::move(r);
      have = true;
    }
  }
  if (!have) throw std::runtime_error("failed to locate a converged QAOA optimum");
  return best;
}

std::shared_ptr<const ProblemSetup> build_problem(const ProblemSpec& spec) {
  if (spec.p < 1) throw std::invalid_argument("ansatz depth p must be >= 1");
  auto setup = std::make_shared<ProblemSetup>();
  setup->spec = spec;
  switch (spec.kind) {
    case ProblemKind::MaxCut3Reg: {
      setup->graph = gen_3regular(spec.n, spec.instance_seed);
      setup->hamiltonian = maxcut_hamiltonian(*setup->graph);
      setup->norm.c_max = brute_force_diagonal_extrema(setup->hamiltonian).max;
      setup->sign = -1.0;
      break;
    }
    case ProblemKind::SK: {
      if (spec.n > kMaxQubits) throw std::invalid_argument("too many spins");
      setup->hamiltonian = sk_hamiltonian(spec.n, spec.instance_seed);
      const auto ex = brute_force_diagonal_extrema(setup->hamiltonian);
      setup->norm.e_min = ex.min;
      setup->norm.e_max = ex.max;
      break;
    }
    case ProblemKind::Hubbard: {
      setup->spec.n = kHubbardSites;
      setup->hubbard = default_hubbard();
      setup->hamiltonian = setup->hubbard->h;
      const auto [lo, hi] = extremal_eigenvalues(setup->hamiltonian);
      setup->norm.e_min = lo;
      setup->norm.e_max = hi;
      break;
    }
  }
  if (spec.kind == ProblemKind::Hubbard) {
    setup->ansatz = Ansatz::hubbard(*setup->hubbard, spec.p, default_hubbard_initial_state());
    setup->dim = setup->ansatz.dimension();
    setup->base_guess = hubbard_ramp_guess(spec.p);
    setup->optimum = find_ansatz_optimum(*setup, setup->base_guess, 2000);
  } else {
    setup->diagonal = setup->hamiltonian.diagonal();
    setup->ansatz = Ansatz::qaoa(setup->hamiltonian, spec.p);
    setup->dim = setup->ansatz.dimension();
    setup->optimum = locate_qaoa_optimum(*setup);
    setup->base_guess = setup->optimum.x;
  }
  return setup;
}

}  // namespace

std::shared_ptr<const ProblemSetup> make_problem(const ProblemSpec& spec) {
  using Key = std::tuple<int, unsigned, unsigned, std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const ProblemSetup>> cache;
  const Key key{static_cast<int>(spec.kind), spec.p,
                spec.kind == ProblemKind::Hubbard ? kHubbardSites : spec.n,
                spec.kind == ProblemKind::Hubbard ? 0 : spec.instance_seed};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto setup = build_problem(spec);
  cache.emplace(key, setup);
  return setup;
}

}  // namespace vqopt
