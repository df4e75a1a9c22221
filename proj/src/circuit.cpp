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

#include "qph/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qph/error.hpp"

namespace qph {

bool is_unitary(const CMatrix &m, double tolerance) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  const CMatrix diff = m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols());
  return diff.cwiseAbs().maxCoeff() <= tolerance;
}

namespace gates {

namespace {

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Gate single(std::string name, CMatrix m, int wire) {
  Gate g;
  g.name = std::move(name);
  g.matrix = std::move(m);
  g.targets = {wire};
  return g;
}

}  // namespace

Gate h(int wire) {
  const double r = 1.0 / std::numbers::sqrt2;
  return single("H", mat2(r, r, r, -r), wire);
}
Gate x(int wire) { return single("X", mat2(0, 1, 1, 0), wire); }
Gate y(int wire) { return single("Y", mat2(0, Complex(0, -1), Complex(0, 1), 0), wire); }
Gate z(int wire) { return single("Z", mat2(1, 0, 0, -1), wire); }
Gate s(int wire) { return single("S", mat2(1, 0, 0, Complex(0, 1)), wire); }
Gate t(int wire) {
  return single("T", mat2(1, 0, 0, std::polar(1.0, std::numbers::pi / 4)), wire);
}

Gate ry(double theta, int wire) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Gate g = single("RY", mat2(c, -s, s, c), wire);
  g.theta = theta;
  return g;
}

Gate cnot(int control, int target) {
  Gate g = controlled(x(target), {control});
  g.name = "CNOT";
  return g;
}

Gate cz(int control, int target) {
  Gate g = controlled(z(target), {control});
  g.name = "CZ";
  return g;
}

Gate swap(int a, int b) {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
  return unitary(std::move(m), {a, b}, "SWAP");
}

Gate unitary(CMatrix matrix, std::vector<int> targets, std::string name) {
  Gate g;
  g.name = std::move(name);
  g.matrix = std::move(matrix);
  g.targets = std::move(targets);
  return g;
}

Gate controlled(Gate g, std::vector<int> controls, std::vector<int> values) {
  if (values.empty()) values.assign(controls.size(), 1);
  for (std::size_t i = 0; i < controls.size(); ++i) {
    g.controls.push_back(controls[i]);
    g.control_values.push_back(values[i]);
  }
  return g;
}

Gate named(std::string_view name, std::vector<int> wires, std::optional<double> theta) {
  auto need = [&](std::size_t n) {
    if (wires.size() != n) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(name) + " expects " + std::to_string(n) + " wires");
    }
  };
  if (name == "H") return need(1), h(wires[0]);
  if (name == "X") return need(1), x(wires[0]);
  if (name == "Y") return need(1), y(wires[0]);
  if (name == "Z") return need(1), z(wires[0]);
  if (name == "S") return need(1), s(wires[0]);
  if (name == "T") return need(1), t(wires[0]);
  if (name == "RY") {
    need(1);
    if (!theta) throw Error(ErrorCode::InvalidArgument, "RY requires theta");
    return ry(*theta, wires[0]);
  }
  if (name == "CNOT" || name == "CX") return need(2), cnot(wires[0], wires[1]);
  if (name == "CZ") return need(2), cz(wires[0], wires[1]);
  if (name == "SWAP") return need(2), swap(wires[0], wires[1]);
  throw Error(ErrorCode::InvalidArgument, "unknown gate " + std::string(name));
}

}  // namespace gates

namespace {

int eval_copy_polynomial(const std::vector<int> &poly, int l) {
  long long value = 0, power = 1;
  for (int c : poly) {
    value += c * power;
    power *= l;
    if (value > (1 << 20)) break;
  }
  return static_cast<int>(std::min<long long>(value, 1 << 20));
}

}  // namespace

RegisterLayout::RegisterLayout(const std::vector<Register> &registers,
                               const std::vector<int> &copy_polynomial) {
  for (const auto &r : registers)
    if (r.role != RegisterRole::Ancilla) logical_size_ += r.qubits;
  copy_count_ = eval_copy_polynomial(copy_polynomial, logical_size_);
  for (const auto &r : registers) {
    const int copies = r.role == RegisterRole::Ancilla ? 1 : copy_count_;
    offsets_.push_back(wire_count_);
    copies_.push_back(copies);
    physical_.push_back(copies * r.qubits);
    wire_count_ += copies * r.qubits;
  }
}

QuantumFunction QuantumFunction::make(std::vector<Register> registers, std::vector<Gate> gate_list,
                                      int output_wire, std::vector<int> copy_polynomial,
                                      std::vector<std::string> dephased) {
  for (std::size_t i = 0; i < registers.size(); ++i) {
    const auto &r = registers[i];
    if (r.name.empty() || r.qubits < 1) {
      throw Error(ErrorCode::RegisterMismatch, "register needs a name and at least one qubit");
    }
    if (r.role == RegisterRole::Witness && r.level < 1) {
      throw Error(ErrorCode::RegisterMismatch, "witness register " + r.name + " needs level >= 1");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (registers[j].name == r.name) {
        throw Error(ErrorCode::RegisterMismatch, "duplicate register " + r.name);
      }
    }
  }
  if (copy_polynomial.empty()) copy_polynomial = {1};
  for (int c : copy_polynomial) {
    if (c < 0) throw Error(ErrorCode::InvalidArgument, "negative copy coefficient");
  }
  RegisterLayout layout(registers, copy_polynomial);
  if (layout.copy_count() < 1) {
    throw Error(ErrorCode::InvalidArgument, "copy count must be at least 1");
  }
  const int wires = layout.wire_count();
  for (const auto &g : gate_list) {
    const auto k = g.targets.size();
    if (k == 0 || g.matrix.rows() != (Eigen::Index{1} << k)) {
      throw Error(ErrorCode::InvalidArgument, "gate " + g.name + " matrix does not match wires");
    }
    if (!is_unitary(g.matrix)) {
      throw Error(ErrorCode::InvalidArgument, "gate " + g.name + " is not unitary");
    }
    if (g.controls.size() != g.control_values.size()) {
      throw Error(ErrorCode::InvalidArgument, "gate " + g.name + " control values mismatch");
    }
    std::vector<int> all = g.targets;
    all.insert(all.end(), g.controls.begin(), g.controls.end());
    for (int w : all) {
      if (w < 0 || w >= wires) {
        throw Error(ErrorCode::InvalidArgument,
                    "gate " + g.name + " wire " + std::to_string(w) + " out of range");
      }
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
      throw Error(ErrorCode::InvalidArgument, "gate " + g.name + " repeats a wire");
    }
    for (int v : g.control_values) {
      if (v != 0 && v != 1) throw Error(ErrorCode::InvalidArgument, "control value must be 0/1");
    }
  }
  if (output_wire < 0 || output_wire >= wires) {
    throw Error(ErrorCode::InvalidArgument, "output wire out of range");
  }
  std::vector<std::string> unique_dephased;
  for (auto &name : dephased) {
    auto it = std::find_if(registers.begin(), registers.end(),
                           [&](const Register &r) { return r.name == name; });
    if (it == registers.end() || it->role == RegisterRole::Ancilla) {
      throw Error(ErrorCode::RegisterMismatch, "cannot dephase register " + name);
    }
    if (std::find(unique_dephased.begin(), unique_dephased.end(), name) == unique_dephased.end())
      unique_dephased.push_back(name);
  }
  return QuantumFunction(std::move(registers), std::move(gate_list), output_wire,
                         std::move(copy_polynomial), std::move(unique_dephased),
                         std::move(layout));
}

std::optional<std::size_t> QuantumFunction::find_register(std::string_view name) const {
  for (std::size_t i = 0; i < registers_.size(); ++i)
    if (registers_[i].name == name) return i;
  return std::nullopt;
}

std::size_t QuantumFunction::register_index(std::string_view name) const {
  auto idx = find_register(name);
  if (!idx) throw Error(ErrorCode::RegisterMismatch, "no register named " + std::string(name));
  return *idx;
}

bool QuantumFunction::is_dephased(std::size_t reg) const {
  return std::find(dephased_.begin(), dephased_.end(), registers_[reg].name) != dephased_.end();
}

int QuantumFunction::wire(std::string_view name, int qubit, int copy) const {
  const std::size_t reg = register_index(name);
  if (qubit < 0 || qubit >= registers_[reg].qubits || copy < 0 ||
      copy >= layout_.copies_of(reg)) {
    throw Error(ErrorCode::RegisterMismatch, "wire lookup out of range in " + std::string(name));
  }
  return layout_.offset(reg) + copy * registers_[reg].qubits + qubit;
}

std::vector<std::size_t> QuantumFunction::witness_registers(int level) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < registers_.size(); ++i)
    if (registers_[i].role == RegisterRole::Witness && registers_[i].level == level)
      out.push_back(i);
  return out;
}

std::vector<std::size_t> QuantumFunction::input_registers() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < registers_.size(); ++i)
    if (registers_[i].role == RegisterRole::Input) out.push_back(i);
  return out;
}

CircuitBuilder &CircuitBuilder::add_register(std::string name, RegisterRole role, int qubits,
                                             int level) {
  registers_.push_back(Register{std::move(name), role, qubits, level});
  return *this;
}

CircuitBuilder &CircuitBuilder::copies(std::vector<int> polynomial) {
  copy_polynomial_ = std::move(polynomial);
  return *this;
}

CircuitBuilder &CircuitBuilder::dephase(std::string name) {
  dephased_.push_back(std::move(name));
  return *this;
}

CircuitBuilder &CircuitBuilder::apply(Gate g) {
  gates_.push_back(std::move(g));
  return *this;
}

int CircuitBuilder::wire(std::string_view name, int qubit, int copy) const {
  RegisterLayout layout(registers_, copy_polynomial_);
  for (std::size_t i = 0; i < registers_.size(); ++i) {
    if (registers_[i].name != name) continue;
    if (qubit < 0 || qubit >= registers_[i].qubits || copy < 0 || copy >= layout.copies_of(i)) {
      throw Error(ErrorCode::RegisterMismatch, "wire lookup out of range in " + std::string(name));
    }
    return layout.offset(i) + copy * registers_[i].qubits + qubit;
  }
  throw Error(ErrorCode::RegisterMismatch, "no register named " + std::string(name));
}

int CircuitBuilder::wire_count() const {
  return RegisterLayout(registers_, copy_polynomial_).wire_count();
}

QuantumFunction CircuitBuilder::build(int output_wire) const {
  return QuantumFunction::make(registers_, gates_, output_wire, copy_polynomial_, dephased_);
}

namespace {

void apply_gate(CVector &state, int wire_count, const Gate &g) {
  const auto bit = [&](int wire) {
    return std::size_t{1} << static_cast<std::size_t>(wire_count - 1 - wire);
  };
  const std::size_t k = g.targets.size();
  const std::size_t sub = std::size_t{1} << k;
  std::size_t target_mask = 0;
  std::vector<std::size_t> offsets(sub, 0);
  for (std::size_t a = 0; a < sub; ++a) {
    for (std::size_t j = 0; j < k; ++j) {
      if (a & (std::size_t{1} << (k - 1 - j))) offsets[a] |= bit(g.targets[j]);
    }
  }
  for (int w : g.targets) target_mask |= bit(w);
  std::size_t control_mask = 0, control_pattern = 0;
  for (std::size_t i = 0; i < g.controls.size(); ++i) {
    control_mask |= bit(g.controls[i]);
    if (g.control_values[i]) control_pattern |= bit(g.controls[i]);
  }
  const std::size_t dim = static_cast<std::size_t>(state.size());
  Complex *amp = state.data();
  const Complex *m = g.matrix.data();  // column-major
  std::vector<Complex> in(sub);
  for (std::size_t base = 0; base < dim; ++base) {
    if ((base & target_mask) != 0 || (base & control_mask) != control_pattern) continue;
    for (std::size_t a = 0; a < sub; ++a) in[a] = amp[base | offsets[a]];
    for (std::size_t r = 0; r < sub; ++r) {
      Complex acc = 0.0;
      for (std::size_t c = 0; c < sub; ++c) acc += m[c * sub + r] * in[c];
      amp[base | offsets[r]] = acc;
    }
  }
}

CVector kron(const CVector &a, const CVector &b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

CVector power(const CVector &v, int k) {
  CVector acc = v;
  for (int i = 1; i < k; ++i) acc = kron(acc, v);
  return acc;
}

void check_assignment(const QuantumFunction &f, const Assignment &assignment,
                      std::optional<std::size_t> free_reg) {
  std::size_t expected = 0;
  for (std::size_t i = 0; i < f.registers().size(); ++i) {
    const auto &r = f.registers()[i];
    if (r.role == RegisterRole::Ancilla) continue;
    if (free_reg && *free_reg == i) {
      if (assignment.count(r.name)) {
        throw Error(ErrorCode::RegisterMismatch, "free register " + r.name + " is also fixed");
      }
      continue;
    }
    ++expected;
    auto it = assignment.find(r.name);
    if (it == assignment.end()) {
      throw Error(ErrorCode::RegisterMismatch, "register " + r.name + " is not assigned");
    }
    if (it->second.size() != r.qubits) {
      throw Error(ErrorCode::RegisterMismatch,
                  "register " + r.name + " expects " + std::to_string(r.qubits) +
                      " qubits, got " + std::to_string(it->second.size()));
    }
  }
  if (assignment.size() != expected) {
    throw Error(ErrorCode::RegisterMismatch, "assignment names an unknown or ancilla register");
  }
}

/// One term of the computational-basis mixture over dephased registers.
struct Branch {
  double weight = 1.0;
  std::vector<CVector> logical;  // per register; empty for ancillas and the free register
};

std::vector<Branch> branches(const QuantumFunction &f, const Assignment &assignment,
                             std::optional<std::size_t> free_reg) {
  Branch root;
  root.logical.resize(f.registers().size());
  for (std::size_t i = 0; i < f.registers().size(); ++i) {
    const auto &r = f.registers()[i];
    if (r.role == RegisterRole::Ancilla || (free_reg && *free_reg == i)) continue;
    root.logical[i] = assignment.find(r.name)->second.amplitudes();
  }
  std::vector<Branch> out{root};
  for (std::size_t i = 0; i < f.registers().size(); ++i) {
    if (!f.is_dephased(i) || (free_reg && *free_reg == i)) continue;
    std::vector<Branch> next;
    for (const auto &b : out) {
      const CVector &v = b.logical[i];
      for (Eigen::Index x = 0; x < v.size(); ++x) {
        const double p = std::norm(v[x]);
        if (p == 0.0) continue;
        Branch nb = b;
        nb.weight *= p;
        nb.logical[i] = CVector::Zero(v.size());
        nb.logical[i][x] = 1.0;
        next.push_back(std::move(nb));
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Initial physical state with `free_vec` (already physical) substituted for
/// the free register.
CVector initial_state(const QuantumFunction &f, const Branch &b,
                      std::optional<std::size_t> free_reg, const CVector *free_vec) {
  CVector acc = CVector::Ones(1);
  for (std::size_t i = 0; i < f.registers().size(); ++i) {
    const auto &r = f.registers()[i];
    if (r.role == RegisterRole::Ancilla) {
      CVector zero = CVector::Zero(Eigen::Index{1} << r.qubits);
      zero[0] = 1.0;
      acc = kron(acc, zero);
    } else if (free_reg && *free_reg == i) {
      acc = kron(acc, *free_vec);
    } else {
      acc = kron(acc, power(b.logical[i], f.layout().copies_of(i)));
    }
  }
  return acc;
}

void check_wires(const QuantumFunction &f, const Budget &budget) {
  if (f.wire_count() > budget.qubits) {
    throw Error(ErrorCode::SizeOverflow, "circuit uses " + std::to_string(f.wire_count()) +
                                             " wires, budget is " +
                                             std::to_string(budget.qubits));
  }
}

}  // namespace

CVector run_circuit(const QuantumFunction &f, const CVector &initial) {
  CVector state = initial;
  for (const auto &g : f.gate_list()) apply_gate(state, f.wire_count(), g);
  return state;
}

double probability_of_one(const CVector &state, int wire_count, int wire) {
  const std::size_t mask = std::size_t{1} << static_cast<std::size_t>(wire_count - 1 - wire);
  double p = 0.0;
  for (Eigen::Index i = 0; i < state.size(); ++i)
    if (static_cast<std::size_t>(i) & mask) p += std::norm(state[i]);
  return p;
}

double evaluate(const QuantumFunction &f, const Assignment &assignment, const Budget &budget) {
  check_assignment(f, assignment, std::nullopt);
  check_wires(f, budget);
  double value = 0.0;
  for (const auto &b : branches(f, assignment, std::nullopt)) {
    const CVector out = run_circuit(f, initial_state(f, b, std::nullopt, nullptr));
    value += b.weight * probability_of_one(out, f.wire_count(), f.output_wire());
  }
  return std::clamp(value, 0.0, 1.0);
}

AcceptanceOperator acceptance_operator(const QuantumFunction &f, const Assignment &fixed,
                                       std::string_view free_register, const Budget &budget) {
  const std::size_t free_reg = f.register_index(free_register);
  const Register &reg = f.registers()[free_reg];
  if (reg.role == RegisterRole::Ancilla) {
    throw Error(ErrorCode::RegisterMismatch, "ancilla register cannot be free");
  }
  check_assignment(f, fixed, free_reg);
  check_wires(f, budget);

  AcceptanceOperator op;
  op.qubits = reg.qubits;
  if (f.is_dephased(free_reg)) {
    const std::size_t dim = std::size_t{1} << reg.qubits;
    if (dim > budget.matrix_dim) {
      throw Error(ErrorCode::BudgetExceeded, "operator dimension " + std::to_string(dim) +
                                                 " exceeds " + std::to_string(budget.matrix_dim));
    }
    op.matrix = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    Assignment full = fixed;
    for (std::size_t x = 0; x < dim; ++x) {
      full.insert_or_assign(reg.name, Qustring::basis(reg.qubits, x));
      op.matrix(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) =
          evaluate(f, full, budget);
    }
    return op;
  }

  op.copies = f.layout().copies_of(free_reg);
  const int physical = f.layout().physical_qubits(free_reg);
  if (physical >= 63 || (std::size_t{1} << physical) > budget.matrix_dim) {
    throw Error(ErrorCode::BudgetExceeded, "operator over " + std::to_string(physical) +
                                               " qubits exceeds matrix budget " +
                                               std::to_string(budget.matrix_dim));
  }
  const auto dim = Eigen::Index{1} << physical;
  const std::size_t mask =
      std::size_t{1} << static_cast<std::size_t>(f.wire_count() - 1 - f.output_wire());
  std::vector<Eigen::Index> accepted;
  for (Eigen::Index i = 0; i < (Eigen::Index{1} << f.wire_count()); ++i)
    if (static_cast<std::size_t>(i) & mask) accepted.push_back(i);

  op.matrix = CMatrix::Zero(dim, dim);
  CMatrix finals(static_cast<Eigen::Index>(accepted.size()), dim);
  for (const auto &b : branches(f, fixed, free_reg)) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      CVector e = CVector::Zero(dim);
      e[j] = 1.0;
      const CVector out = run_circuit(f, initial_state(f, b, free_reg, &e));
      for (std::size_t r = 0; r < accepted.size(); ++r)
        finals(static_cast<Eigen::Index>(r), j) = out[accepted[r]];
    }
    op.matrix += b.weight * (finals.adjoint() * finals);
  }
  op.matrix = (op.matrix + op.matrix.adjoint()) * 0.5;
  return op;
}

QuantumFunction classical_mix(const QuantumFunction &h, std::string_view input_register) {
  const std::size_t reg = h.register_index(input_register);
  if (h.registers()[reg].role == RegisterRole::Ancilla) {
    throw Error(ErrorCode::RegisterMismatch, "cannot mix ancilla register");
  }
  std::vector<std::string> dephased = h.dephased();
  dephased.emplace_back(input_register);
  return QuantumFunction::make(h.registers(), h.gate_list(), h.output_wire(),
                               h.copy_polynomial(), std::move(dephased));
}

}  // namespace qph
