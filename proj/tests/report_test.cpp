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

#include "qph/report.hpp"

#include <nlohmann/json.hpp>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace qph;
using qph::testing::code_of;

namespace {

Report sample() {
  Report r;
  r.suite = "demo";
  r.seed = 7;
  r.metadata = {{"note", "x\"y"}};
  Case b{"b", false, 0.5, 0.25, "limit", {{"n", 2}, {"eps", 0.125}}, "0.5 exceeds 0.25"};
  Case a{"a", true, 1.0 / 3.0, 1.0, "limit", {{"n", 1}}, ""};
  r.cases = {b, a};
  return r;
}

}  // namespace

TEST(Report, EmptyJson) {
  Report r;
  r.suite = "empty";
  const std::string s = emit(r, ReportFormat::Json);
  const auto j = nlohmann::json::parse(s);
  EXPECT_TRUE(j.at("cases").is_array());
  EXPECT_TRUE(j.at("cases").empty());
  EXPECT_EQ(j.at("metadata").at("suite"), "empty");
  EXPECT_NE(s.find("\"cases\": []"), std::string::npos);
}

TEST(Report, DeterministicAndSorted) {
  const std::string s = emit(sample(), ReportFormat::Json);
  EXPECT_EQ(s, emit(sample(), ReportFormat::Json));
  const auto j = nlohmann::json::parse(s);
  EXPECT_EQ(j.at("cases")[0].at("id"), "a");
  EXPECT_EQ(j.at("cases")[1].at("id"), "b");
  EXPECT_EQ(j.at("metadata").at("failures"), 1);
  EXPECT_EQ(j.at("metadata").at("passed"), false);
  EXPECT_EQ(j.at("metadata").at("note"), "x\"y");
  EXPECT_NE(s.find("0.333333333333"), std::string::npos);
  EXPECT_EQ(s.find("0.3333333333333"), std::string::npos);
}

TEST(Report, CsvRowPerCase) {
  const std::string s = emit(sample(), ReportFormat::Csv);
  EXPECT_EQ(s,
            "id,pass,measured,allowed,bound,n,eps,message\n"
            "a,true,0.333333333333,1,limit,1,,\n"
            "b,false,0.5,0.25,limit,2,0.125,0.5 exceeds 0.25\n");
}

TEST(Report, NumberFormat) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1e-13), "1e-13");
  EXPECT_EQ(format_number(2.0 / 3.0), "0.666666666667");
}

TEST(Report, FormatParsing) {
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::Csv);
  EXPECT_EQ(parse_report_format("json"), ReportFormat::Json);
  EXPECT_EQ(code_of([] { parse_report_format("xml"); }), ErrorCode::ConfigInvalid);
}

TEST(Report, WriteFailure) {
  EXPECT_EQ(code_of([] { write_report(sample(), ReportFormat::Json, "/nonexistent/dir/r.json"); }),
            ErrorCode::IoFailure);
}
