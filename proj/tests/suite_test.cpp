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

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace qph;
using qph::testing::code_of;

TEST(Suite, UnknownNameIsConfigInvalid) {
  EXPECT_EQ(code_of([] { run_property_suite("nope", ExperimentConfig{}); }), ErrorCode::ConfigInvalid);
}

TEST(Suite, ConfigValidation) {
  EXPECT_NO_THROW(config_from_json(Json::parse(R"({"seed": 3, "sweeps": {"n": [1, 2]}})")));
  for (const char *bad : {R"({"budgets": {"qubits": 0}})", R"({"sweeps": {"eps": [2.0]}})",
                          R"({"sweeps": {"t": [2]}})", R"({"sweeps": {"n": [50]}})",
                          R"({"sweeps": {"samples": -1}})", R"({"output": {"format": "xml"}})",
                          R"({"seed": "seven"})"}) {
    EXPECT_EQ(code_of([&] { config_from_json(Json::parse(bad)); }), ErrorCode::ConfigInvalid)
        << bad;
  }
}

TEST(Suite, GeneratorRoundTripSeven) {
  ExperimentConfig cfg;
  cfg.seed = 7;
  cfg.sweeps.n = {1, 2, 3};
  cfg.sweeps.samples = 50;
  const Report r = run_property_suite("generator-roundtrip", cfg);
  EXPECT_EQ(r.cases.size(), 50u);
  EXPECT_TRUE(r.passed());
  for (const auto &c : r.cases) EXPECT_LT(c.measured, 1e-10) << c.id;
}

TEST(Suite, AmplificationValues) {
  ExperimentConfig cfg;
  cfg.sweeps.v = {0.75, 0.25};
  cfg.sweeps.t = {3};
  const Report r = run_property_suite("amplification", cfg);
  ASSERT_EQ(r.cases.size(), 2u);
  EXPECT_TRUE(r.passed());
  std::vector<double> values;
  for (const auto &c : r.cases)
    for (const auto &[k, v] : c.params)
      if (k == "value") values.push_back(v);
  std::sort(values.begin(), values.end());
  ASSERT_EQ(values.size(), 2u);
  EXPECT_NEAR(values[0], 5.0 / 32, 1e-12);
  EXPECT_NEAR(values[1], 27.0 / 32, 1e-12);
}

TEST(Suite, SameSeedSameBytes) {
  ExperimentConfig cfg;
  cfg.sweeps.samples = 4;
  for (const auto &name : {"fragment-bounds", "duality"}) {
    EXPECT_EQ(emit(run_property_suite(name, cfg), ReportFormat::Json),
              emit(run_property_suite(name, cfg), ReportFormat::Json))
        << name;
  }
}

TEST(Suite, MajorityProbability) {
  EXPECT_NEAR(majority_probability(0.75, 3), 27.0 / 32, 1e-15);
  EXPECT_NEAR(majority_probability(0.25, 3), 5.0 / 32, 1e-15);
  EXPECT_NEAR(majority_probability(1.0, 5), 1.0, 1e-15);
}
