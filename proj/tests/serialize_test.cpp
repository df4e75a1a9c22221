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

#include <filesystem>

#include <gtest/gtest.h>

#include "qph/random.hpp"
#include "qph/suite.hpp"
#include "test_util.hpp"

using namespace qph;
using qph::testing::code_of;

namespace {

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "qph_serialize_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Serialize, StateRoundTrip) {
  Rng rng(3);
  for (int n = 1; n <= 3; ++n) {
    const Qustring s = random_qustring(n, rng);
    const Json j = to_json(s);
    EXPECT_EQ(j.at("size_n"), n);
    // Loading renormalizes, which may move the last bit.
    const Qustring back = state_from_json(Json::parse(j.dump()));
    EXPECT_LT((back.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Serialize, StateErrors) {
  EXPECT_EQ(code_of([] { state_from_json(Json::parse(R"({"size_n":1,"amplitudes":[[1,0]]})")); }),
            ErrorCode::NotPowerOfTwo);
  EXPECT_EQ(code_of([] {
              state_from_json(Json::parse(R"({"size_n":2,"amplitudes":[[1,0],[0,0]]})"));
            }),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { state_from_json(Json::parse(R"({"size_n":1})")); }),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] {
              state_from_json(Json::parse(R"({"size_n":1,"amplitudes":[[1,0],[1,0]]})"));
            }),
            ErrorCode::NormOutOfTolerance);
  EXPECT_EQ(code_of([] { state_from_json(Json::parse(R"([1,2])")); }), ErrorCode::ConfigInvalid);
}

TEST(Serialize, TupleWithFileReference) {
  const auto dir = temp_dir();
  write_text_file(dir / "one.json", to_json(Qustring::basis(1, 1)).dump());
  const Json j = Json::parse(R"(["one.json", {"size_n":1,"amplitudes":[[1,0],[0,0]]}])");
  const QTuple t = tuple_from_json(j, dir);
  ASSERT_EQ(t.arity(), 2u);
  EXPECT_NEAR(std::abs(t.parts()[0][1]), 1.0, 0.0);
  EXPECT_NEAR(std::abs(t.parts()[1][0]), 1.0, 0.0);
  EXPECT_EQ(code_of([&] { tuple_from_json(Json::parse(R"(["missing.json"])"), dir); }),
            ErrorCode::IoFailure);
}

TEST(Serialize, CircuitRoundTrip) {
  Rng rng(5);
  CircuitBuilder b;
  b.input("x").witness("w", 1, 2).ancilla("o").dephase("x");
  b.apply(gates::h(0)).apply(gates::ry(0.3, 1)).apply(gates::cnot(1, 3));
  b.apply(gates::controlled(gates::x(3), {0, 2}, {1, 0}));
  b.apply(gates::unitary(random_unitary(4, rng), {2, 3}));
  const QuantumFunction f = b.build(3);
  const QuantumFunction g = circuit_from_json(Json::parse(to_json(f).dump()));
  EXPECT_EQ(to_json(g).dump(), to_json(f).dump());
  const Assignment a{{"x", random_qustring(1, rng)}, {"w", random_qustring(2, rng)}};
  EXPECT_EQ(evaluate(g, a), evaluate(f, a));
}

TEST(Serialize, CircuitErrors) {
  EXPECT_EQ(code_of([] { circuit_from_json(Json::parse(R"({"gates":[]})")); }),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] {
              circuit_from_json(Json::parse(
                  R"({"registers":[{"name":"a","role":"ancilla","qubits":1}],
                      "gates":[{"name":"FOO","wires":[0]}],"output_wire":0})"));
            }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] {
              circuit_from_json(Json::parse(
                  R"({"registers":[{"name":"a","role":"ancilla","qubits":1}],
                      "gates":[{"name":"H","wires":[4]}],"output_wire":0})"));
            }),
            ErrorCode::InvalidArgument);
}

TEST(Serialize, InstanceAndProblemRoundTrip) {
  Rng rng(7);
  RandomInstanceSpec spec;
  spec.levels = 2;
  spec.pattern = Pattern::Pi;
  const auto inst = random_instance(spec, rng);
  const Json j = to_json(inst);
  const auto back = instance_from_json(Json::parse(j.dump()));
  EXPECT_EQ(to_json(back).at("circuit"), j.at("circuit"));
  EXPECT_LT(std::abs(qopt_value(back, GridMethod{2}).value - qopt_value(inst, GridMethod{2}).value),
            1e-14);
  EXPECT_EQ(back.pattern(), Pattern::Pi);
  EXPECT_EQ(back.levels(), 2);

  const auto p = PartialProblem::threshold(inst, DecisionThresholds::make(0.8, 0.2), GridMethod{2});
  const auto q = problem_from_json(Json::parse(to_json(p).dump()));
  EXPECT_EQ(to_json(q).at("instance").at("circuit"), to_json(p).at("instance").at("circuit"));
  EXPECT_EQ(q.thresholds().a, 0.8);
  EXPECT_EQ(q.thresholds().b, 0.2);
  EXPECT_EQ(method_name(q.method()), "grid:2");

  const auto e = PartialProblem::explicit_sets({1}, {QTuple({Qustring::basis(1, 0)})},
                                               {QTuple({Qustring::basis(1, 1)})});
  const auto f = problem_from_json(Json::parse(to_json(e).dump()));
  EXPECT_TRUE(same_problem(e, f));
}

TEST(Serialize, GeneratorRoundTrip) {
  Rng rng(9);
  const Generator g = decompose(random_qustring(2, rng));
  const Generator h = generator_from_json(Json::parse(to_json(g).dump()));
  ASSERT_EQ(h.nodes().size(), g.nodes().size());
  for (std::size_t i = 0; i < g.nodes().size(); ++i) EXPECT_EQ(h.nodes()[i], g.nodes()[i]);
}

TEST(Serialize, ProbesRoundTrip) {
  Rng rng(11);
  ProbeSet ps{1, 1, {{QTuple({random_qustring(1, rng)}), QTuple()}}};
  const ProbeSet back = probes_from_json(Json::parse(to_json(ps).dump()));
  EXPECT_EQ(back.n, 1);
  ASSERT_EQ(back.probes.size(), 1u);
  EXPECT_EQ(back.probes[0].phi.parts()[0].amplitudes(), ps.probes[0].phi.parts()[0].amplitudes());
}

TEST(Serialize, Files) {
  const auto dir = temp_dir();
  write_text_file(dir / "bad.json", "{ not json");
  EXPECT_EQ(code_of([&] { read_json_file(dir / "bad.json"); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([&] { read_json_file(dir / "absent.json"); }), ErrorCode::IoFailure);
  const std::vector<std::uint8_t> bytes{0, 1, 255, 7};
  write_binary_file(dir / "b.bin", bytes);
  EXPECT_EQ(read_binary_file(dir / "b.bin"), bytes);
  EXPECT_EQ(code_of([&] { write_text_file(dir / "no" / "such" / "dir.json", "x"); }),
            ErrorCode::IoFailure);
}
