// Copyright 2026 The QPH Lab Authors
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
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qph/circuit.hpp"
#include "qph/generator.hpp"
#include "qph/problem.hpp"
#include "qph/quantifier.hpp"
#include "qph/state.hpp"

namespace qph {

using Json = nlohmann::json;

// States: {"size_n": n, "amplitudes": [[re, im], ...]}.
Json to_json(const Qustring &state);
Qustring state_from_json(const Json &j);

// Tuples: a list of states (a single state object is a 1-tuple). Parts given
// as strings name state files relative to `base_dir`.
Json to_json(const QTuple &tuple);
QTuple tuple_from_json(const Json &j, const std::filesystem::path &base_dir = {});

Json to_json(const CMatrix &m);
CMatrix matrix_from_json(const Json &j);

// Circuits: {"registers": [...], "gates": [...], "output_wire": w,
// "copies": [c0, c1, ...], "dephased": [...]}. Named gates carry "wires"
// (controls first) and no matrix.
Json to_json(const Gate &gate);
Gate gate_from_json(const Json &j);
Json to_json(const QuantumFunction &f);
QuantumFunction circuit_from_json(const Json &j);

// Instances: {"circuit": {...} | "circuit_file": path, "levels", "arity",
// "witness_qubits", "pattern": "sigma" | "pi", "inputs": {name: state}}.
Json to_json(const HierarchyInstance &inst);
HierarchyInstance instance_from_json(const Json &j, const std::filesystem::path &base_dir = {});

// Generators: {"n": n, "nodes": [[[re, im] x 4, row-major], ...]}.
Json to_json(const Generator &g);
Generator generator_from_json(const Json &j);

// Problems: {"mode": "explicit", "shape", "accept", "reject"} or
// {"mode": "threshold", "instance" | "instance_file", "a", "b", "method"}.
Json to_json(const PartialProblem &p);
PartialProblem problem_from_json(const Json &j, const std::filesystem::path &base_dir = {});

// Probe files: {"n", "m", "probes": [{"phi": tuple, "psi": tuple?}, ...]}.
struct ProbeSet {
  int n = 1;
  int m = 1;
  std::vector<SeparabilityProbe> probes;
};
Json to_json(const ProbeSet &probes);
ProbeSet probes_from_json(const Json &j, const std::filesystem::path &base_dir = {});

Json to_json(const QoptResult &result);

/// Parse errors become ConfigInvalid, unreadable files IoFailure.
Json read_json_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path &path);
void write_binary_file(const std::filesystem::path &path, const std::vector<std::uint8_t> &bytes);

}  // namespace qph
