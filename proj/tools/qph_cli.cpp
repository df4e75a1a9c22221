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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qph/error.hpp"
#include "qph/generator.hpp"
#include "qph/problem.hpp"
#include "qph/quantifier.hpp"
#include "qph/report.hpp"
#include "qph/serialize.hpp"
#include "qph/suite.hpp"

namespace {

namespace fs = std::filesystem;
using qph::Json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  bool format_given = false;
};

void emit_text(const Globals &g, const std::string &text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    qph::write_text_file(g.out, text);
  }
}

void emit_json(const Globals &g, const Json &j) { emit_text(g, j.dump(2) + "\n"); }

fs::path dir_of(const std::string &path) { return fs::path(path).parent_path(); }

qph::ExperimentConfig load_config(const Globals &g) {
  qph::ExperimentConfig cfg;
  if (!g.config.empty()) cfg = qph::config_from_json(qph::read_json_file(g.config));
  if (g.seed) cfg.seed = *g.seed;
  if (!g.out.empty()) cfg.output = g.out;
  if (g.format_given) cfg.format = qph::parse_report_format(g.format);
  return cfg;
}

qph::HierarchyInstance load_instance(const std::string &path) {
  return qph::instance_from_json(qph::read_json_file(path), dir_of(path));
}

qph::PartialProblem load_problem(const std::string &path) {
  return qph::problem_from_json(qph::read_json_file(path), dir_of(path));
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Quantum quantifier hierarchy toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Experiment configuration (JSON)");
  app.add_option("--seed", g.seed, "Seed for every random draw");
  app.add_option("--out", g.out, "Output path (default: stdout)");
  auto *format_opt =
      app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  std::string in, state_path, fragment_path, instance_path, method = "exact";
  std::string op, p_path, q_path, probes_path, set_name = "accept", suite, report_kind;
  double eps = 0.0, a = 0.75, b = 0.25;
  int t = 3;

  auto *decompose = app.add_subcommand("decompose", "State file to generator file");
  decompose->add_option("--in", in, "State file")->required();

  auto *quantize = app.add_subcommand("quantize", "Generator or state to fragment bytes");
  quantize->add_option("--in", in, "Generator file (or state file with --state)");
  quantize->add_option("--state", state_path, "State file to decompose first");
  quantize->add_option("--eps", eps, "Precision")->required()->check(CLI::Range(1e-18, 0.999));

  auto *reconstruct = app.add_subcommand("reconstruct", "Fragment bytes to reconstructed state");
  reconstruct->add_option("--fragment", fragment_path, "Fragment file")->required();
  reconstruct->add_option("--state", state_path, "Reference state for the distance report");
  reconstruct->add_option("--report", report_kind, "Quantity to report")
      ->check(CLI::IsMember({"trace-distance", "density"}));

  auto *eval = app.add_subcommand("eval", "Quantified value of an instance");
  eval->add_option("--instance", instance_path, "Instance file")->required();
  eval->add_option("--method", method, "exact[:r] | grid:r | alt:iters,restarts[,seed]");

  auto *decide = app.add_subcommand("decide", "Threshold decision for an instance");
  decide->add_option("--instance", instance_path, "Instance file")->required();
  decide->add_option("--method", method, "Evaluation method");
  decide->add_option("--a", a, "Accept threshold");
  decide->add_option("--b", b, "Reject threshold");

  auto *amplify = app.add_subcommand("amplify", "Majority-vote amplification of an instance");
  amplify->add_option("--instance", instance_path, "Instance file")->required();
  amplify->add_option("--t", t, "Odd repetition count");

  auto *algebra = app.add_subcommand("algebra", "Partial-problem algebra");
  algebra->add_option("--op", op, "Operation")
      ->required()
      ->check(CLI::IsMember({"complement", "union", "intersect", "includes"}));
  algebra->add_option("--p", p_path, "First problem file")->required();
  algebra->add_option("--q", q_path, "Second problem file");

  auto *separability = app.add_subcommand("separability", "Classical separability check");
  separability->add_option("--problem", p_path, "Problem file")->required();
  separability->add_option("--probes", probes_path, "Probe file")->required();
  separability->add_option("--set", set_name, "Which set to check")
      ->check(CLI::IsMember({"accept", "reject"}));

  auto *check = app.add_subcommand("check", "Run a property suite");
  check->add_option("suite", suite, "Suite name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitConfig;
  }

  g.format_given = format_opt->count() > 0;
  try {
    const qph::ExperimentConfig cfg = load_config(g);
    const qph::Budget &budget = cfg.budget;

    if (*decompose) {
      emit_json(g, qph::to_json(qph::decompose(qph::state_from_json(qph::read_json_file(in)))));
    } else if (*quantize) {
      if (in.empty() == state_path.empty()) {
        throw qph::Error(qph::ErrorCode::ConfigInvalid, "give exactly one of --in and --state");
      }
      const qph::Generator gen =
          state_path.empty()
              ? qph::generator_from_json(qph::read_json_file(in))
              : qph::decompose(qph::state_from_json(qph::read_json_file(state_path)));
      const auto bytes = qph::encode(qph::quantize(gen, eps));
      if (g.out.empty()) {
        throw qph::Error(qph::ErrorCode::ConfigInvalid, "quantize writes binary; pass --out");
      }
      qph::write_binary_file(g.out, bytes);
    } else if (*reconstruct) {
      const qph::Fragment frag = qph::decode(qph::read_binary_file(fragment_path));
      const qph::DensityMatrix rho = qph::reconstruct(frag);
      Json out{{"n", frag.n()}, {"precision_bits", frag.precision_bits()}};
      if (report_kind == "density" || state_path.empty()) out["density"] = qph::to_json(rho.entries());
      if (!state_path.empty()) {
        const auto phi = qph::state_from_json(qph::read_json_file(state_path));
        out["trace_distance"] = qph::trace_distance(qph::DensityMatrix::pure(phi), rho);
      } else if (report_kind == "trace-distance") {
        throw qph::Error(qph::ErrorCode::ConfigInvalid, "trace-distance needs --state");
      }
      emit_json(g, out);
    } else if (*eval) {
      qph::Method m = qph::parse_method(method);
      if (auto *alt = std::get_if<qph::AlternatingMethod>(&m); alt && g.seed) alt->seed = *g.seed;
      emit_json(g, qph::to_json(qph::qopt_value(load_instance(instance_path), m, budget)));
    } else if (*decide) {
      const auto th = qph::DecisionThresholds::make(a, b);
      qph::Method m = qph::parse_method(method);
      if (auto *alt = std::get_if<qph::AlternatingMethod>(&m); alt && g.seed) alt->seed = *g.seed;
      const auto res = qph::qopt_value(load_instance(instance_path), m, budget);
      emit_json(g, Json{{"value", res.value},
                        {"method", res.method},
                        {"a", th.a},
                        {"b", th.b},
                        {"decision", qph::decision_name(qph::decide_value(res.value, th))}});
    } else if (*amplify) {
      emit_json(g, qph::to_json(qph::amplify(load_instance(instance_path), t, budget)));
    } else if (*algebra) {
      const auto p = load_problem(p_path);
      if (op == "complement") {
        emit_json(g, qph::to_json(qph::complement(p)));
      } else {
        if (q_path.empty()) throw qph::Error(qph::ErrorCode::ConfigInvalid, op + " needs --q");
        const auto q = load_problem(q_path);
        if (op == "union") emit_json(g, qph::to_json(qph::unite(p, q)));
        else if (op == "intersect") emit_json(g, qph::to_json(qph::intersect(p, q)));
        else emit_json(g, Json{{"includes", qph::includes(p, q)}});
      }
    } else if (*separability) {
      const auto p = load_problem(p_path);
      const auto probes = qph::probes_from_json(qph::read_json_file(probes_path), dir_of(probes_path));
      const auto set = set_name == "accept" ? qph::accept_membership(p, budget)
                                            : qph::reject_membership(p, budget);
      const auto res = qph::is_classically_separable(set, probes.n, probes.m, probes.probes, budget);
      Json out{{"separable", res.separable}, {"probes_checked", res.probes_checked}};
      if (res.counterexample) {
        out["counterexample"] = {{"phi", qph::to_json(res.counterexample->phi)},
                                 {"psi", qph::to_json(res.counterexample->psi)}};
      }
      emit_json(g, out);
      return res.separable ? kExitPass : kExitFail;
    } else if (*check) {
      const qph::Report rep = qph::run_property_suite(suite, cfg);
      const std::string text = qph::emit(rep, cfg.format);
      if (cfg.output.empty()) std::cout << text;
      else qph::write_text_file(cfg.output, text);
      std::cerr << suite << ": " << rep.cases.size() - rep.failures() << "/" << rep.cases.size()
                << " cases pass\n";
      return rep.passed() ? kExitPass : kExitFail;
    }
    return kExitPass;
  } catch (const qph::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
