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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qph/state.hpp"

namespace qph {

enum class RegisterRole { Witness, Input, Ancilla };

/// A named group of logical qubits. Witness registers carry the quantifier
/// level (1-based) they belong to.
struct Register {
  std::string name;
  RegisterRole role = RegisterRole::Input;
  int qubits = 1;
  int level = 0;
};

/// A unitary acting on `targets`, optionally conditioned on `controls`
/// holding `control_values`. targets[0] is the most significant bit of the
/// matrix index.
struct Gate {
  std::string name;
  CMatrix matrix;
  std::vector<int> targets;
  std::vector<int> controls;
  std::vector<int> control_values;
  std::optional<double> theta;
};

namespace gates {

Gate h(int wire);
Gate x(int wire);
Gate y(int wire);
Gate z(int wire);
Gate s(int wire);
Gate t(int wire);
Gate ry(double theta, int wire);
Gate cnot(int control, int target);
Gate cz(int control, int target);
Gate swap(int a, int b);
Gate unitary(CMatrix matrix, std::vector<int> targets, std::string name = "U");
/// Conditions `g` on extra wires; values default to all ones.
Gate controlled(Gate g, std::vector<int> controls, std::vector<int> values = {});
/// Builds a named gate ("H", "X", "CNOT", "RY", ...) from its wires.
Gate named(std::string_view name, std::vector<int> wires, std::optional<double> theta = {});

}  // namespace gates

/// Physical wire layout of a register table. Every non-ancilla register is
/// laid out as `copy_count` consecutive copies of its logical qubits.
class RegisterLayout {
 public:
  RegisterLayout(const std::vector<Register> &registers, const std::vector<int> &copy_polynomial);

  int copy_count() const { return copy_count_; }
  int wire_count() const { return wire_count_; }
  /// Sum of logical sizes of the non-ancilla registers.
  int logical_input_size() const { return logical_size_; }
  int offset(std::size_t reg) const { return offsets_[reg]; }
  int physical_qubits(std::size_t reg) const { return physical_[reg]; }
  int copies_of(std::size_t reg) const { return copies_[reg]; }

 private:
  int copy_count_ = 1;
  int wire_count_ = 0;
  int logical_size_ = 0;
  std::vector<int> offsets_;
  std::vector<int> physical_;
  std::vector<int> copies_;
};

/// A finite unitary circuit whose acceptance probability is the probability
/// of reading 1 on `output_wire`. Immutable after construction.
class QuantumFunction {
 public:
  /// Validates gate unitarity (1e-10), wire ranges and register names.
  /// `copy_polynomial` holds coefficients c0, c1, ... of q(l) = sum c_i l^i
  /// where l is the total logical size of the non-ancilla registers.
  static QuantumFunction make(std::vector<Register> registers, std::vector<Gate> gate_list,
                              int output_wire, std::vector<int> copy_polynomial = {1},
                              std::vector<std::string> dephased = {});

  const std::vector<Register> &registers() const { return registers_; }
  const std::vector<Gate> &gate_list() const { return gates_; }
  int output_wire() const { return output_wire_; }
  const std::vector<int> &copy_polynomial() const { return copy_polynomial_; }
  const std::vector<std::string> &dephased() const { return dephased_; }
  const RegisterLayout &layout() const { return layout_; }
  int copy_count() const { return layout_.copy_count(); }
  int wire_count() const { return layout_.wire_count(); }

  std::optional<std::size_t> find_register(std::string_view name) const;
  std::size_t register_index(std::string_view name) const;
  bool is_dephased(std::size_t reg) const;
  /// Physical wire of `qubit` within copy `copy` of register `name`.
  int wire(std::string_view name, int qubit = 0, int copy = 0) const;
  /// Witness registers of `level`, in table order.
  std::vector<std::size_t> witness_registers(int level) const;
  std::vector<std::size_t> input_registers() const;

 private:
  QuantumFunction(std::vector<Register> registers, std::vector<Gate> gate_list, int output_wire,
                  std::vector<int> copy_polynomial, std::vector<std::string> dephased,
                  RegisterLayout layout)
      : registers_(std::move(registers)),
        gates_(std::move(gate_list)),
        output_wire_(output_wire),
        copy_polynomial_(std::move(copy_polynomial)),
        dephased_(std::move(dephased)),
        layout_(std::move(layout)) {}

  std::vector<Register> registers_;
  std::vector<Gate> gates_;
  int output_wire_;
  std::vector<int> copy_polynomial_;
  std::vector<std::string> dephased_;
  RegisterLayout layout_;
};

/// Incremental construction helper; wires can be looked up as soon as the
/// register table and copy polynomial are set.
class CircuitBuilder {
 public:
  CircuitBuilder &add_register(std::string name, RegisterRole role, int qubits, int level = 0);
  CircuitBuilder &witness(std::string name, int level, int qubits = 1) {
    return add_register(std::move(name), RegisterRole::Witness, qubits, level);
  }
  CircuitBuilder &input(std::string name, int qubits = 1) {
    return add_register(std::move(name), RegisterRole::Input, qubits);
  }
  CircuitBuilder &ancilla(std::string name, int qubits = 1) {
    return add_register(std::move(name), RegisterRole::Ancilla, qubits);
  }
  CircuitBuilder &copies(std::vector<int> polynomial);
  CircuitBuilder &dephase(std::string name);
  CircuitBuilder &apply(Gate g);

  int wire(std::string_view name, int qubit = 0, int copy = 0) const;
  int wire_count() const;

  QuantumFunction build(int output_wire) const;

 private:
  std::vector<Register> registers_;
  std::vector<int> copy_polynomial_{1};
  std::vector<std::string> dephased_;
  std::vector<Gate> gates_;
};

using Assignment = std::map<std::string, Qustring, std::less<>>;

/// Hermitian operator M over a free register with
/// <psi^{(x)copies}| M |psi^{(x)copies}> = evaluate(f, fixed + {free: psi}).
/// `copies` is 1 whenever the free register is dephased or q = 1.
struct AcceptanceOperator {
  CMatrix matrix;
  int qubits = 0;
  int copies = 1;

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// Acceptance probability: the weight of |1> on the output wire after the
/// circuit runs on q copies of every assigned register and |0...0> ancillas.
/// Dephased registers are replaced by their computational-basis mixture
/// before copying.
double evaluate(const QuantumFunction &f, const Assignment &assignment, const Budget &budget = {});

AcceptanceOperator acceptance_operator(const QuantumFunction &f, const Assignment &fixed,
                                       std::string_view free_register, const Budget &budget = {});

/// h' = sum_x |<x|phi>|^2 h(..., |x>, ...) on `input_register`.
QuantumFunction classical_mix(const QuantumFunction &h, std::string_view input_register);

/// Runs the circuit on an explicit physical initial state (one vector per
/// register, ancillas included) and returns the final state.
CVector run_circuit(const QuantumFunction &f, const CVector &initial);

/// Probability that `wire` reads 1 in a state over `wire_count` qubits.
double probability_of_one(const CVector &state, int wire_count, int wire);

bool is_unitary(const CMatrix &m, double tolerance = 1e-10);

}  // namespace qph
