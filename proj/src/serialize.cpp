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

#include "qph/serialize.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "qph/error.hpp"

namespace qph {

namespace {

template <typename F>
auto guarded(std::string_view what, F &&body) -> decltype(body()) {
  try {
    return body();
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::ConfigInvalid, std::string(what) + ": " + e.what());
  }
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json &j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::ConfigInvalid, "complex numbers are [re, im] pairs");
  }
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

const std::vector<std::string> kNamedGates = {"H", "X", "Y", "Z", "S", "T",
                                              "RY", "CNOT", "CZ", "SWAP"};

bool same_gate(const Gate &a, const Gate &b) {
  return a.targets == b.targets && a.controls == b.controls &&
         a.control_values == b.control_values && a.matrix.rows() == b.matrix.rows() &&
         a.matrix.cols() == b.matrix.cols() && a.matrix == b.matrix;
}

std::string_view role_name(RegisterRole role) {
  switch (role) {
    case RegisterRole::Witness: return "witness";
    case RegisterRole::Input: return "input";
    case RegisterRole::Ancilla: return "ancilla";
  }
  return "?";
}

RegisterRole role_from(const std::string &s) {
  if (s == "witness") return RegisterRole::Witness;
  if (s == "input") return RegisterRole::Input;
  if (s == "ancilla") return RegisterRole::Ancilla;
  throw Error(ErrorCode::ConfigInvalid, "unknown register role '" + s + "'");
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

Json to_json(const Qustring &state) {
  Json amps = Json::array();
  for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i)
    amps.push_back(complex_json(state.amplitudes()[i]));
  return Json{{"size_n", state.size()}, {"amplitudes", std::move(amps)}};
}

Qustring state_from_json(const Json &j) {
  return guarded("state", [&] {
    const auto &amps = j.at("amplitudes");
    CVector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = complex_from(amps.at(i));
    Qustring s = Qustring::make(std::move(v));
    if (j.contains("size_n") && j.at("size_n").get<int>() != s.size()) {
      throw Error(ErrorCode::ConfigInvalid, "size_n disagrees with the amplitude count");
    }
    return s;
  });
}

Json to_json(const QTuple &tuple) {
  Json out = Json::array();
  for (const auto &p : tuple.parts()) out.push_back(to_json(p));
  return out;
}

QTuple tuple_from_json(const Json &j, const std::filesystem::path &base_dir) {
  return guarded("tuple", [&] {
    auto part = [&](const Json &item) {
      if (item.is_string()) return state_from_json(read_json_file(resolve(base_dir, item.get<std::string>())));
      return state_from_json(item);
    };
    std::vector<Qustring> parts;
    if (j.is_array()) {
      for (const auto &item : j) parts.push_back(part(item));
    } else {
      parts.push_back(part(j));
    }
    return QTuple(std::move(parts));
  });
}

Json to_json(const CMatrix &m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json &j) {
  return guarded("matrix", [&] {
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) throw Error(ErrorCode::ConfigInvalid, "empty matrix");
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto &row = j.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(row.size()) != cols) {
        throw Error(ErrorCode::ConfigInvalid, "ragged matrix");
      }
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from(row.at(static_cast<std::size_t>(c)));
    }
    return m;
  });
}

Json to_json(const Gate &gate) {
  for (const auto &name : kNamedGates) {
    if (gate.name != name) continue;
    std::vector<int> wires = gate.controls;
    wires.insert(wires.end(), gate.targets.begin(), gate.targets.end());
    try {
      if (same_gate(gates::named(name, wires, gate.theta), gate)) {
        Json out{{"name", name}, {"wires", wires}};
        if (gate.theta) out["theta"] = *gate.theta;
        return out;
      }
    } catch (const Error &) {
    }
  }
  Json out{{"name", gate.name}, {"targets", gate.targets}, {"matrix", to_json(gate.matrix)}};
  if (!gate.controls.empty()) {
    out["controls"] = gate.controls;
    out["control_values"] = gate.control_values;
  }
  if (gate.theta) out["theta"] = *gate.theta;
  return out;
}

Gate gate_from_json(const Json &j) {
  return guarded("gate", [&] {
    const std::string name = j.value("name", std::string("U"));
    std::optional<double> theta;
    if (j.contains("theta")) theta = j.at("theta").get<double>();
    Gate g;
    if (!j.contains("matrix")) {
      g = gates::named(name, j.at("wires").get<std::vector<int>>(), theta);
    } else {
      const auto key = j.contains("targets") ? "targets" : "wires";
      g = gates::unitary(matrix_from_json(j.at("matrix")), j.at(key).get<std::vector<int>>(), name);
      g.theta = theta;
    }
    if (j.contains("controls")) {
      std::vector<int> values;
      if (j.contains("control_values")) values = j.at("control_values").get<std::vector<int>>();
      g = gates::controlled(std::move(g), j.at("controls").get<std::vector<int>>(), std::move(values));
    }
    return g;
  });
}

Json to_json(const QuantumFunction &f) {
  Json regs = Json::array();
  for (const auto &r : f.registers()) {
    Json item{{"name", r.name}, {"role", role_name(r.role)}, {"qubits", r.qubits}};
    if (r.role == RegisterRole::Witness) item["level"] = r.level;
    regs.push_back(std::move(item));
  }
  Json gate_list = Json::array();
  for (const auto &g : f.gate_list()) gate_list.push_back(to_json(g));
  Json out{{"registers", std::move(regs)},
           {"gates", std::move(gate_list)},
           {"output_wire", f.output_wire()},
           {"copies", f.copy_polynomial()}};
  if (!f.dephased().empty()) out["dephased"] = f.dephased();
  return out;
}

QuantumFunction circuit_from_json(const Json &j) {
  return guarded("circuit", [&] {
    std::vector<Register> regs;
    for (const auto &item : j.at("registers")) {
      Register r;
      r.name = item.at("name").get<std::string>();
      r.role = role_from(item.value("role", std::string("input")));
      r.qubits = item.value("qubits", 1);
      r.level = item.value("level", 0);
      regs.push_back(std::move(r));
    }
    std::vector<Gate> gate_list;
    for (const auto &item : j.at("gates")) gate_list.push_back(gate_from_json(item));
    std::vector<int> poly{1};
    if (j.contains("copies")) poly = j.at("copies").get<std::vector<int>>();
    std::vector<std::string> dephased;
    if (j.contains("dephased")) dephased = j.at("dephased").get<std::vector<std::string>>();
    return QuantumFunction::make(std::move(regs), std::move(gate_list),
                                 j.at("output_wire").get<int>(), std::move(poly),
                                 std::move(dephased));
  });
}

Json to_json(const HierarchyInstance &inst) {
  Json inputs = Json::object();
  for (const auto &[name, state] : inst.inputs()) inputs[name] = to_json(state);
  return Json{{"circuit", to_json(inst.base())},
              {"levels", inst.levels()},
              {"arity", inst.arity()},
              {"witness_qubits", inst.witness_qubits()},
              {"pattern", inst.pattern() == Pattern::Sigma ? "sigma" : "pi"},
              {"inputs", std::move(inputs)}};
}

HierarchyInstance instance_from_json(const Json &j, const std::filesystem::path &base_dir) {
  return guarded("instance", [&] {
    QuantumFunction f = j.contains("circuit_file")
                            ? circuit_from_json(read_json_file(
                                  resolve(base_dir, j.at("circuit_file").get<std::string>())))
                            : circuit_from_json(j.at("circuit"));
    const std::string pattern = j.value("pattern", std::string("sigma"));
    if (pattern != "sigma" && pattern != "pi") {
      throw Error(ErrorCode::ConfigInvalid, "pattern must be 'sigma' or 'pi'");
    }
    Assignment inputs;
    if (j.contains("inputs")) {
      for (const auto &[name, item] : j.at("inputs").items()) {
        inputs.emplace(name, item.is_string()
                                 ? state_from_json(read_json_file(resolve(base_dir, item.get<std::string>())))
                                 : state_from_json(item));
      }
    }
    return HierarchyInstance::make(std::move(f), j.at("levels").get<int>(), j.value("arity", 1),
                                   j.value("witness_qubits", 1),
                                   pattern == "sigma" ? Pattern::Sigma : Pattern::Pi,
                                   std::move(inputs));
  });
}

Json to_json(const Generator &g) {
  Json nodes = Json::array();
  for (const auto &m : g.nodes()) {
    nodes.push_back(Json::array({complex_json(m(0, 0)), complex_json(m(0, 1)),
                                 complex_json(m(1, 0)), complex_json(m(1, 1))}));
  }
  return Json{{"n", g.n()}, {"nodes", std::move(nodes)}};
}

Generator generator_from_json(const Json &j) {
  return guarded("generator", [&] {
    std::vector<Matrix2> nodes;
    for (const auto &item : j.at("nodes")) {
      if (item.size() != 4) throw Error(ErrorCode::ConfigInvalid, "generator nodes have 4 entries");
      Matrix2 m;
      m << complex_from(item.at(0)), complex_from(item.at(1)), complex_from(item.at(2)),
          complex_from(item.at(3));
      nodes.push_back(m);
    }
    return Generator::make(j.at("n").get<int>(), std::move(nodes));
  });
}

Json to_json(const PartialProblem &p) {
  if (p.is_explicit()) {
    Json accept = Json::array(), reject = Json::array();
    for (const auto &t : p.accept_set()) accept.push_back(to_json(t));
    for (const auto &t : p.reject_set()) reject.push_back(to_json(t));
    return Json{{"mode", "explicit"},
                {"shape", p.shape()},
                {"accept", std::move(accept)},
                {"reject", std::move(reject)}};
  }
  return Json{{"mode", "threshold"},
              {"instance", to_json(p.instance())},
              {"a", p.thresholds().a},
              {"b", p.thresholds().b},
              {"method", method_name(p.method())}};
}

PartialProblem problem_from_json(const Json &j, const std::filesystem::path &base_dir) {
  return guarded("problem", [&] {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "explicit") {
      std::vector<QTuple> accept, reject;
      for (const auto &t : j.at("accept")) accept.push_back(tuple_from_json(t, base_dir));
      for (const auto &t : j.at("reject")) reject.push_back(tuple_from_json(t, base_dir));
      return PartialProblem::explicit_sets(j.at("shape").get<std::vector<int>>(),
                                           std::move(accept), std::move(reject));
    }
    if (mode == "threshold") {
      HierarchyInstance inst =
          j.contains("instance_file")
              ? instance_from_json(
                    read_json_file(resolve(base_dir, j.at("instance_file").get<std::string>())),
                    base_dir)
              : instance_from_json(j.at("instance"), base_dir);
      const auto th = DecisionThresholds::make(j.value("a", 0.75), j.value("b", 0.25));
      return PartialProblem::threshold(std::move(inst), th,
                                       parse_method(j.value("method", std::string("exact"))));
    }
    throw Error(ErrorCode::ConfigInvalid, "unknown problem mode '" + mode + "'");
  });
}

Json to_json(const ProbeSet &probes) {
  Json list = Json::array();
  for (const auto &p : probes.probes) {
    Json item{{"phi", to_json(p.phi)}};
    if (p.psi.arity() > 0) item["psi"] = to_json(p.psi);
    list.push_back(std::move(item));
  }
  return Json{{"n", probes.n}, {"m", probes.m}, {"probes", std::move(list)}};
}

ProbeSet probes_from_json(const Json &j, const std::filesystem::path &base_dir) {
  return guarded("probes", [&] {
    ProbeSet out;
    out.n = j.at("n").get<int>();
    out.m = j.value("m", 1);
    for (const auto &item : j.at("probes")) {
      SeparabilityProbe p;
      p.phi = tuple_from_json(item.at("phi"), base_dir);
      if (item.contains("psi")) p.psi = tuple_from_json(item.at("psi"), base_dir);
      out.probes.push_back(std::move(p));
    }
    return out;
  });
}

Json to_json(const QoptResult &result) {
  Json out{{"value", result.value},
           {"method", result.method},
           {"certified", result.certified},
           {"bound", bound_kind_name(result.bound)}};
  if (result.witness) out["witness"] = to_json(*result.witness);
  return out;
}

Json read_json_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::ConfigInvalid, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::filesystem::path &path, const std::vector<std::uint8_t> &bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

}  // namespace qph
