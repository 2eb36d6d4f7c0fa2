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

#include <json.hpp>

#include "vqopt/problems.hpp"

namespace vqopt {

std::string problem_to_json(const ProblemSetup& setup) {
  using nlohmann::json;
  json doc;
  doc["schema"] = 1;
  doc["kind"] = to_string(setup.spec.kind);
  doc["p"] = setup.spec.p;
  doc["n"] = setup.spec.n;
  doc["instance_seed"] = setup.spec.instance_seed;
  doc["n_qubits"] = setup.hamiltonian.n_qubits();
  json terms = json::array();
  for (const auto& t : setup.hamiltonian.terms()) terms.push_back({{"pauli", t.label()}, {"coefficient", t.coefficient}});
  doc["hamiltonian"] = std::move(terms);
  if (setup.graph) doc["edges"] = setup.graph->edges;
  if (setup.spec.kind == ProblemKind::SK) {
    json couplings = json::array();
    for (const auto& t : setup.hamiltonian.terms()) {
      if (t.paulis.size() != 2) continue;
      couplings.push_back({t.paulis.begin()->first, t.paulis.rbegin()->first, t.coefficient});
    }
    doc["couplings"] = std::move(couplings);
  }
  if (setup.hubbard) doc["hubbard"] = {{"t", 1.0}, {"u", 4.0}, {"sites", kHubbardSites}};
  if (setup.spec.kind == ProblemKind::MaxCut3Reg) {
    doc["norm"] = {{"c_max", setup.norm.c_max}};
  } else {
    doc["norm"] = {{"e_min", setup.norm.e_min}, {"e_max", setup.norm.e_max}};
  }
  doc["base_guess"] = setup.base_guess;
  doc["optimum"] = {{"x", setup.optimum.x},
                    {"score", setup.optimum.score},
                    {"gradient_norm", setup.optimum.gradient_norm},
                    {"converged", setup.optimum.converged}};
  return doc.dump(2) + "\n";
}

}  // namespace vqopt
