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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qph/circuit.hpp"
#include "qph/grid.hpp"
#include "qph/state.hpp"

namespace qph {

enum class Quantifier { Sup, Inf };
/// Sigma-form prefixes open with sup, Pi-form with inf.
enum class Pattern { Sigma, Pi };

/// A quantifier prefix of `levels` alternating blocks over a base circuit.
/// Block i ranges over `arity` witness registers of `witness_qubits` qubits,
/// namely the base registers with role Witness and level i.
class HierarchyInstance {
 public:
  static HierarchyInstance make(QuantumFunction base, int levels, int arity, int witness_qubits,
                                Pattern pattern, Assignment inputs);

  const QuantumFunction &base() const { return *base_; }
  int levels() const { return levels_; }
  int arity() const { return arity_; }
  int witness_qubits() const { return witness_qubits_; }
  Pattern pattern() const { return pattern_; }
  const Assignment &inputs() const { return inputs_; }
  /// Quantifier of block `level` (1-based).
  Quantifier quantifier(int level) const;

  HierarchyInstance with_inputs(Assignment inputs) const;

 private:
  HierarchyInstance(std::shared_ptr<const QuantumFunction> base, int levels, int arity,
                    int witness_qubits, Pattern pattern, Assignment inputs)
      : base_(std::move(base)),
        levels_(levels),
        arity_(arity),
        witness_qubits_(witness_qubits),
        pattern_(pattern),
        inputs_(std::move(inputs)) {}

  std::shared_ptr<const QuantumFunction> base_;
  int levels_;
  int arity_;
  int witness_qubits_;
  Pattern pattern_;
  Assignment inputs_;
};

struct DecisionThresholds {
  double a = 0.75;
  double b = 0.25;

  /// Requires a + b = 1 (within 1e-12) and a > b.
  static DecisionThresholds make(double a, double b);
};

/// Innermost block by eigen_oracle; for two blocks the outer one ranges over
/// the grid of precision `outer_r`.
struct ExactMethod {
  int outer_r = 3;
};
/// Every block ranges over the r-bit grid.
struct GridMethod {
  int r = 3;
};
/// Random-restart local search with the innermost block solved exactly when
/// it is a single uncopied register. Reports bounds, not exact values.
struct AlternatingMethod {
  int iters = 50;
  int restarts = 4;
  std::uint64_t seed = 0;
};
using Method = std::variant<ExactMethod, GridMethod, AlternatingMethod>;

/// "exact", "exact:r", "grid:r", "alt:iters,restarts".
Method parse_method(std::string_view text);
std::string method_name(const Method &method);

struct EigenResult {
  double value;
  Qustring witness;
};

/// Extreme eigenvalue and eigenvector. Degenerate extremes resolve to the
/// eigenspace projection of the first basis vector it does not annihilate;
/// the witness phase makes its first nonzero amplitude real positive.
EigenResult eigen_oracle(const CMatrix &m, Quantifier mode, const Budget &budget = {});
EigenResult eigen_oracle(const AcceptanceOperator &op, Quantifier mode,
                         const Budget &budget = {});

/// Extreme of <psi|M|psi> over the distinct directions of an n-qubit grid,
/// where M acts on n qubits.
EigenResult grid_extreme(const CMatrix &m, int r, Quantifier mode, const Budget &budget = {});

enum class BoundKind { Exact, Lower, Upper, Heuristic };
std::string_view bound_kind_name(BoundKind kind);

struct QoptResult {
  double value = 0.0;
  std::string method;
  /// Optimal first-block tuple, when the method produces one.
  std::optional<QTuple> witness;
  /// Exact over the method's quantifier ranges, or a guaranteed one-sided
  /// bound on the true value.
  bool certified = false;
  BoundKind bound = BoundKind::Exact;
};

/// sup_{psi_1} inf_{psi_2} ... g(inputs, psi_1, ..., psi_k) with the
/// quantifier ranges chosen by `method`.
QoptResult qopt_value(const HierarchyInstance &inst, const Method &method,
                      const Budget &budget = {});

/// Same nesting with every witness restricted to computational-basis states.
double classical_quantifier_value(const HierarchyInstance &inst, const Budget &budget = {});

enum class Decision { Accept, Reject, OutsideLegalRegion };
std::string_view decision_name(Decision d);

inline constexpr double kPromiseGapTolerance = 1e-9;

Decision decide_value(double value, const DecisionThresholds &th);
Decision decide(const HierarchyInstance &inst, const DecisionThresholds &th, const Method &method,
                const Budget &budget = {});

/// Majority vote over t independent runs of the base circuit, each on its own
/// block of copies and its own ancillas. Throws EvenT for even t.
HierarchyInstance amplify(const HierarchyInstance &inst, int t, const Budget &budget = {});

/// Flips every quantifier and negates the output wire.
HierarchyInstance complement_instance(const HierarchyInstance &inst);

/// For two blocks: swaps which block is quantified first (sup-inf becomes
/// inf-sup over the same registers).
HierarchyInstance transpose_prefix(const HierarchyInstance &inst);

}  // namespace qph
