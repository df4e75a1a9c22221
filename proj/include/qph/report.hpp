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
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qph {

enum class ReportFormat { Json, Csv };

ReportFormat parse_report_format(std::string_view text);

/// One checked property: the measured quantity, the limit it is held to, and
/// a short description of the bound.
struct Case {
  std::string id;
  bool pass = true;
  double measured = 0.0;
  double allowed = 0.0;
  std::string bound;
  std::vector<std::pair<std::string, double>> params;
  std::string message;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Case> cases;

  std::size_t failures() const;
  bool passed() const { return failures() == 0; }
};

/// Fixed formatting: 12 significant digits, cases sorted by id, fields in a
/// fixed order. Equal reports give equal bytes.
std::string emit(const Report &report, ReportFormat format);
void write_report(const Report &report, ReportFormat format, const std::filesystem::path &path);

std::string format_number(double value);

}  // namespace qph
