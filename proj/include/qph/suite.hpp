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
#include <string>
#include <string_view>
#include <vector>

#include "qph/quantifier.hpp"
#include "qph/random.hpp"
#include "qph/report.hpp"
#include "qph/serialize.hpp"

namespace qph {

/// Sweep values; an empty list selects the suite's default.
struct Sweeps {
  std::vector<int> n;
  std::vector<double> eps;
  std::vector<int> r;
  std::vector<int> t;
  std::vector<double> v;
  int samples = 0;
};

struct ExperimentConfig {
  std::uint64_t seed = 7;
  Budget budget;
  Sweeps sweeps;
  std::string output;
  ReportFormat format = ReportFormat::Json;

  /// Throws ConfigInvalid on non-positive budgets or out-of-range sweeps.
  void validate() const;
};

ExperimentConfig config_from_json(const Json &j);

const std::vector<std::string> &suite_names();

/// Runs one named property suite. Throws ConfigInvalid for unknown names.
Report run_property_suite(std::string_view name, const ExperimentConfig &cfg);

/// Shape of a random base circuit: one input register, one witness register
/// per level, one ancilla register, and a single Haar-random unitary over
/// all wires. The output is the last ancilla wire.
struct RandomInstanceSpec {
  int levels = 1;
  int witness_qubits = 1;
  int input_qubits = 1;
  int ancilla_qubits = 1;
  Pattern pattern = Pattern::Sigma;
  bool dephase_input = false;
  bool dephase_witness = false;
};

HierarchyInstance random_instance(const RandomInstanceSpec &spec, Rng &rng);

/// Probability that more than t/2 of t independent runs accept.
double majority_probability(double v, int t);

}  // namespace qph
