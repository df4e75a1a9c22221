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

#include "qph/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "qph/error.hpp"
#include "qph/generator.hpp"
#include "qph/grid.hpp"
#include "qph/problem.hpp"

namespace qph {

void ExperimentConfig::validate() const {
  auto fail = [](const std::string &msg) { throw Error(ErrorCode::ConfigInvalid, msg); };
  if (budget.qubits < 1 || budget.grid_count < 1 || budget.matrix_dim < 1) {
    fail("budgets must be positive");
  }
  for (int n : sweeps.n)
    if (n < 1 || n > budget.qubits) fail("sweep n=" + std::to_string(n) + " outside 1..qubits");
  for (double e : sweeps.eps)
    if (!(e > 0.0 && e < 1.0)) fail("sweep eps must lie in (0, 1)");
  for (int r : sweeps.r)
    if (r < 1 || r > 30) fail("sweep r must lie in 1..30");
  for (int t : sweeps.t)
    if (t < 1 || t % 2 == 0 || 2 * t > budget.qubits) fail("sweep t must be odd and fit the budget");
  for (double v : sweeps.v)
    if (!(v >= 0.0 && v <= 1.0)) fail("sweep v must lie in [0, 1]");
  if (sweeps.samples < 0) fail("samples must be non-negative");
}

ExperimentConfig config_from_json(const Json &j) {
  ExperimentConfig cfg;
  try {
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("budgets")) {
      const auto &b = j.at("budgets");
      const auto positive = [](const Json &v, const char *what) {
        if (!v.is_number_integer() || v.get<long long>() < 1) {
          throw Error(ErrorCode::ConfigInvalid, std::string(what) + " budget must be positive");
        }
        return v.get<long long>();
      };
      if (b.contains("qubits")) cfg.budget.qubits = static_cast<int>(positive(b.at("qubits"), "qubits"));
      if (b.contains("grid_count"))
        cfg.budget.grid_count = static_cast<std::uint64_t>(positive(b.at("grid_count"), "grid_count"));
      if (b.contains("matrix_dim"))
        cfg.budget.matrix_dim = static_cast<std::size_t>(positive(b.at("matrix_dim"), "matrix_dim"));
    }
    if (j.contains("sweeps")) {
      const auto &s = j.at("sweeps");
      cfg.sweeps.n = s.value("n", std::vector<int>{});
      cfg.sweeps.eps = s.value("eps", std::vector<double>{});
      cfg.sweeps.r = s.value("r", std::vector<int>{});
      cfg.sweeps.t = s.value("t", std::vector<int>{});
      cfg.sweeps.v = s.value("v", std::vector<double>{});
      cfg.sweeps.samples = s.value("samples", 0);
    }
    if (j.contains("output")) {
      const auto &o = j.at("output");
      cfg.output = o.value("path", std::string{});
      cfg.format = parse_report_format(o.value("format", std::string("json")));
    }
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names = {
      "generator-roundtrip", "fragment-bounds", "m0-reconstruction", "grid-convergence",
      "amplification",       "duality",         "separability",      "classical-vs-quantum"};
  return names;
}

HierarchyInstance random_instance(const RandomInstanceSpec &spec, Rng &rng) {
  CircuitBuilder b;
  if (spec.input_qubits > 0) b.input("x", spec.input_qubits);
  for (int level = 1; level <= spec.levels; ++level)
    b.witness("w" + std::to_string(level), level, spec.witness_qubits);
  b.ancilla("a", spec.ancilla_qubits);
  if (spec.dephase_input && spec.input_qubits > 0) b.dephase("x");
  if (spec.dephase_witness)
    for (int level = 1; level <= spec.levels; ++level) b.dephase("w" + std::to_string(level));
  const int wires = b.wire_count();
  std::vector<int> all(static_cast<std::size_t>(wires));
  for (int i = 0; i < wires; ++i) all[static_cast<std::size_t>(i)] = i;
  b.apply(gates::unitary(random_unitary(std::size_t{1} << wires, rng), all));
  Assignment inputs;
  if (spec.input_qubits > 0) inputs.emplace("x", random_qustring(spec.input_qubits, rng));
  return HierarchyInstance::make(b.build(wires - 1), spec.levels, 1, spec.witness_qubits,
                                 spec.pattern, std::move(inputs));
}

double majority_probability(double v, int t) {
  double total = 0.0;
  for (int j = t / 2 + 1; j <= t; ++j) {
    double binom = 1.0;
    for (int i = 1; i <= j; ++i) binom = binom * (t - j + i) / i;
    total += binom * std::pow(v, j) * std::pow(1.0 - v, t - j);
  }
  return total;
}

namespace {

template <typename T>
std::vector<T> or_default(const std::vector<T> &given, std::vector<T> fallback) {
  return given.empty() ? fallback : given;
}

int samples_or(const ExperimentConfig &cfg, int fallback) {
  return cfg.sweeps.samples > 0 ? cfg.sweeps.samples : fallback;
}

std::string id(const char *fmt, auto... args) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

/// Records `measured <= allowed` (or `<`) as a case.
Case check(std::string case_id, double measured, double allowed, std::string bound,
           bool strict = false) {
  Case c;
  c.id = std::move(case_id);
  c.measured = measured;
  c.allowed = allowed;
  c.bound = std::move(bound);
  c.pass = strict ? measured < allowed : measured <= allowed;
  if (!c.pass) {
    c.message = c.bound + " violated: measured " + format_number(measured) + ", allowed " +
                format_number(allowed);
  }
  return c;
}

Report generator_roundtrip(const ExperimentConfig &cfg, Rng &rng) {
  Report rep;
  const auto ns = or_default(cfg.sweeps.n, {1, 2, 3, 4, 5});
  const int samples = samples_or(cfg, 50);
  for (int s = 0; s < samples; ++s) {
    const int n = ns[static_cast<std::size_t>(s) % ns.size()];
    const Qustring phi = random_qustring(n, rng);
    const double d = projector_distance(phi, recompose(decompose(phi)));
    Case c = check(id("n%d/s%04d", n, s), d, 1e-10, "generator round-trip trace distance < 1e-10",
                   true);
    c.params = {{"n", n}};
    rep.cases.push_back(std::move(c));
  }
  return rep;
}

Report fragment_bounds(const ExperimentConfig &cfg, Rng &rng) {
  Report rep;
  const auto ns = or_default(cfg.sweeps.n, {1, 2, 3});
  const auto epss = or_default(cfg.sweeps.eps, {0.125, 0.0625, 0.03125, 0.015625, 0.0078125,
                                                0.00390625, 0.001953125, 0.0009765625});
  const int samples = samples_or(cfg, 20);
  for (int s = 0; s < samples; ++s) {
    const int n = ns[static_cast<std::size_t>(s) % ns.size()];
    const Generator g = decompose(random_qustring(n, rng));
    for (double eps : epss) {
      const Fragment f = quantize(g, eps);
      double entry = 0.0, op = 0.0;
      for (std::size_t i = 0; i < g.nodes().size(); ++i) {
        const Matrix2 diff = f.node_matrix(i) - g.nodes()[i];
        entry = std::max(entry, diff.cwiseAbs().maxCoeff());
        op = std::max(op, operator_norm(diff));
      }
      Case c = check(id("n%d/eps%.10g/s%04d", n, eps, s), op, 4 * eps,
                     "fragment node operator-norm error <= 4 eps");
      c.params = {{"n", n}, {"eps", eps}, {"entry_error", entry}, {"entry_allowed", 2 * eps}};
      if (entry > 2 * eps) {
        c.pass = false;
        c.message = "fragment entrywise error <= 2 eps violated: measured " +
                    format_number(entry) + ", allowed " + format_number(2 * eps);
      }
      rep.cases.push_back(std::move(c));
    }
  }
  return rep;
}

Report m0_reconstruction(const ExperimentConfig &cfg, Rng &rng) {
  Report rep;
  const auto ns = or_default(cfg.sweeps.n, {1, 2, 3});
  const auto epss = or_default(cfg.sweeps.eps, {0.25, 0.0625});
  const int samples = samples_or(cfg, 20);
  for (int s = 0; s < samples; ++s) {
    const int n = ns[static_cast<std::size_t>(s) % ns.size()];
    const Qustring phi = random_qustring(n, rng);
    const Generator g = decompose(phi);
    for (double eps : epss) {
      const double precision = std::ldexp(eps, -n - 4);
      const DensityMatrix rho = reconstruct(quantize(g, precision));
      const double d = trace_distance(DensityMatrix::pure(phi), rho);
      Case c = check(id("n%d/eps%.10g/s%04d", n, eps, s), d, eps,
                     "fragment reconstruction trace distance <= eps");
      c.params = {{"n", n}, {"eps", eps}, {"precision", precision}};
      rep.cases.push_back(std::move(c));
    }
  }
  return rep;
}

Report grid_convergence(const ExperimentConfig &cfg, Rng &rng) {
  Report rep;
  const auto ns = or_default(cfg.sweeps.n, {1, 2, 3});
  const auto epss = or_default(cfg.sweeps.eps, {0.25, 0.0625, 0.015625});
  auto rs = or_default(cfg.sweeps.r, {2, 3, 4});
  std::sort(rs.begin(), rs.end());
  const int samples = samples_or(cfg, 10);

  for (int s = 0; s < samples; ++s) {
    for (int n : ns) {
      const Qustring phi = random_qustring(n, rng);
      for (double eps : epss) {
        const int r = precision_bits_for(eps) + n + 2;
        const double dev = std::abs(truncate_components(phi.amplitudes(), r).squaredNorm() - 1.0);
        Case c = check(id("norm/n%d/eps%.10g/s%04d", n, eps, s), dev, eps,
                       "truncated grid point squared-norm deviation <= eps");
        c.params = {{"n", n}, {"eps", eps}, {"r", r}};
        rep.cases.push_back(std::move(c));
      }
    }
  }

  RandomInstanceSpec spec;
  spec.input_qubits = 0;
  for (int s = 0; s < samples; ++s) {
    const HierarchyInstance inst = random_instance(spec, rng);
    const AcceptanceOperator op = acceptance_operator(inst.base(), {}, "w1", cfg.budget);
    const double top = eigen_oracle(op, Quantifier::Sup, cfg.budget).value;
    double previous = -1.0;
    for (int r : rs) {
      const double v = grid_extreme(op.matrix, r, Quantifier::Sup, cfg.budget).value;
      const double allowed = std::ldexp(1.0, 3 - r);
      Case c = check(id("eigen/r%02d/s%04d", r, s), std::abs(top - v), allowed,
                     "grid optimum within 2^(3-r) of the largest eigenvalue");
      c.params = {{"r", r}, {"grid_value", v}, {"eigenvalue", top}};
      if (v < previous - 1e-15) {
        c.pass = false;
        c.message = "grid optimum decreased from " + format_number(previous) + " to " +
                    format_number(v) + " as r grew";
      }
      previous = v;
      rep.cases.push_back(std::move(c));
    }
  }
  return rep;
}

Report amplification(const ExperimentConfig &cfg, Rng &) {
  Report rep;
  const auto vs = or_default(cfg.sweeps.v, {0.25, 0.5, 0.75});
  const auto ts = or_default(cfg.sweeps.t, {1, 3, 5});
  for (double v : vs) {
    CircuitBuilder b;
    b.ancilla("a");
    b.apply(gates::ry(2.0 * std::asin(std::sqrt(v)), 0));
    const auto base = HierarchyInstance::make(b.build(0), 0, 1, 1, Pattern::Sigma, {});
    for (int t : ts) {
      const auto amp = amplify(base, t, cfg.budget);
      const double value = qopt_value(amp, ExactMethod{}, cfg.budget).value;
      const double expected = majority_probability(v, t);
      Case c = check(id("v%.6g/t%02d", v, t), std::abs(value - expected), 1e-12,
                     "majority vote matches the binomial tail within 1e-12");
      c.params = {{"v", v}, {"t", t}, {"value", value}, {"expected", expected}};
      rep.cases.push_back(std::move(c));
    }
  }
  return rep;
}

Report duality(const ExperimentConfig &cfg, Rng &rng) {
  Report rep;
  const int samples = samples_or(cfg, 20);
  const int r = cfg.sweeps.r.empty() ? 3 : cfg.sweeps.r.front();
  for (int s = 0; s < samples; ++s) {
    RandomInstanceSpec spec;
    spec.pattern = s % 2 ? Pattern::Pi : Pattern::Sigma;
    const auto inst = random_instance(spec, rng);
    const double v = qopt_value(inst, ExactMethod{}, cfg.budget).value;
    const double w = qopt_value(complement_instance(inst), ExactMethod{}, cfg.budget).value;
    Case c = check(id("k1/s%04d", s), std::abs(v + w - 1.0), 1e-9,
                   "value plus complement value equals 1 within 1e-9");
    c.params = {{"value", v}, {"complement", w}};
    rep.cases.push_back(std::move(c));
  }
  const int deep = std::max(1, samples / 4);
  for (int s = 0; s < deep; ++s) {
    RandomInstanceSpec spec;
    spec.levels = 2;
    spec.pattern = s % 2 ? Pattern::Pi : Pattern::Sigma;
    const auto inst = random_instance(spec, rng);
    const double v = qopt_value(inst, GridMethod{r}, cfg.budget).value;
    const double w = qopt_value(complement_instance(inst), GridMethod{r}, cfg.budget).value;
    Case c = check(id("k2/s%04d", s), std::abs(v + w - 1.0), 1e-9,
                   "value plus complement value equals 1 within 1e-9");
    c.params = {{"r", r}, {"value", v}, {"complement", w}};
    rep.cases.push_back(std::move(c));
  }
  return rep;
}

/// Accepts with probability 1/2 + |<+|phi>|^2 / 2 on input register x.
HierarchyInstance plus_acceptor() {
  CircuitBuilder b;
  b.input("x").ancilla("c").ancilla("o");
  b.apply(gates::h(1));
  b.apply(gates::cnot(1, 2));
  b.apply(gates::controlled(gates::h(0), {1}, {0}));
  b.apply(gates::controlled(gates::x(2), {1, 0}, {0, 0}));
  Assignment inputs;
  inputs.emplace("x", Qustring::basis(1, 0));
  return HierarchyInstance::make(b.build(2), 0, 1, 1, Pattern::Sigma, std::move(inputs));
}

std::vector<SeparabilityProbe> random_probes(int count, int n, Rng &rng) {
  std::vector<SeparabilityProbe> probes;
  for (int i = 0; i < count; ++i) probes.push_back({QTuple({random_qustring(n, rng)}), QTuple()});
  return probes;
}

Report separability(const ExperimentConfig &cfg, Rng &rng) {
  Report rep;
  const int samples = samples_or(cfg, 5);
  const int probes = 100;
  const auto th = DecisionThresholds::make(0.75, 0.25);
  for (int s = 0; s < samples; ++s) {
    RandomInstanceSpec spec;
    spec.dephase_input = true;
    spec.pattern = s % 2 ? Pattern::Pi : Pattern::Sigma;
    const auto inst = random_instance(spec, rng);
    const auto problem = PartialProblem::threshold(inst, th, ExactMethod{});
    const auto list = random_probes(probes, 1, rng);
    for (const auto &[label, set] :
         {std::pair{"accept", accept_membership(problem, cfg.budget)},
          std::pair{"reject", reject_membership(problem, cfg.budget)}}) {
      const auto res = is_classically_separable(set, 1, 1, list, cfg.budget);
      Case c;
      c.id = id("mixed/%s/s%04d", label, s);
      c.measured = res.separable ? 0.0 : 1.0;
      c.allowed = 0.0;
      c.bound = "threshold set over a classical mix is classically separable";
      c.pass = res.separable;
      c.params = {{"probes", static_cast<double>(res.probes_checked)},
                  {"sigma", spec.pattern == Pattern::Sigma ? 1.0 : 0.0}};
      if (!res.separable) {
        const Qustring &phi = res.counterexample->phi.parts()[0];
        c.message = c.bound + " violated: superposition with amplitudes (" +
                    format_number(phi[0].real()) + "," + format_number(phi[0].imag()) + "), (" +
                    format_number(phi[1].real()) + "," + format_number(phi[1].imag()) +
                    ") leaves the set while its basis support stays inside";
      }
      rep.cases.push_back(std::move(c));
    }
  }
  const auto control = PartialProblem::threshold(plus_acceptor(), th, ExactMethod{});
  const auto res = is_classically_separable(accept_membership(control, cfg.budget), 1, 1,
                                            random_probes(probes, 1, rng), cfg.budget);
  Case c;
  c.id = "unmixed/plus-acceptor";
  c.measured = res.separable ? 1.0 : 0.0;
  c.allowed = 0.0;
  c.bound = "checker finds a counterexample for the unmixed |+> acceptor";
  c.pass = !res.separable;
  c.params = {{"probes", static_cast<double>(res.probes_checked)}};
  if (c.pass) c.params.emplace_back("counterexample_value",
                                    evaluate(control.instance().base(),
                                             {{"x", res.counterexample->phi.parts()[0]}}));
  else c.message = c.bound + " violated: no counterexample found";
  rep.cases.push_back(std::move(c));
  return rep;
}

Report classical_vs_quantum(const ExperimentConfig &cfg, Rng &rng) {
  Report rep;
  const int samples = samples_or(cfg, 20);
  for (int s = 0; s < samples; ++s) {
    RandomInstanceSpec spec;
    spec.dephase_witness = s % 2 == 1;
    const auto inst = random_instance(spec, rng);
    const double classical = classical_quantifier_value(inst, cfg.budget);
    const double quantum = qopt_value(inst, ExactMethod{}, cfg.budget).value;
    Case c = spec.dephase_witness
                 ? check(id("diagonal/s%04d", s), std::abs(classical - quantum), 1e-9,
                         "diagonal operator: classical and quantum values agree within 1e-9")
                 : check(id("general/s%04d", s), classical - quantum, 1e-9,
                         "classical value <= quantum value + 1e-9");
    c.params = {{"classical", classical}, {"quantum", quantum}};
    rep.cases.push_back(std::move(c));
  }
  return rep;
}

}  // namespace

Report run_property_suite(std::string_view name, const ExperimentConfig &cfg) {
  static const std::map<std::string, std::function<Report(const ExperimentConfig &, Rng &)>,
                        std::less<>>
      suites = {{"generator-roundtrip", generator_roundtrip},
                {"fragment-bounds", fragment_bounds},
                {"m0-reconstruction", m0_reconstruction},
                {"grid-convergence", grid_convergence},
                {"amplification", amplification},
                {"duality", duality},
                {"separability", separability},
                {"classical-vs-quantum", classical_vs_quantum}};
  const auto it = suites.find(name);
  if (it == suites.end()) {
    throw Error(ErrorCode::ConfigInvalid, "unknown suite '" + std::string(name) + "'");
  }
  cfg.validate();
  Rng rng(cfg.seed);
  Report rep = it->second(cfg, rng);
  rep.suite = std::string(name);
  rep.seed = cfg.seed;
  return rep;
}

}  // namespace qph
