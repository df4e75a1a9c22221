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

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "qph/error.hpp"
#include "qph/serialize.hpp"

namespace qph {

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  throw Error(ErrorCode::ConfigInvalid, "format must be json or csv");
}

std::size_t Report::failures() const {
  return static_cast<std::size_t>(
      std::count_if(cases.begin(), cases.end(), [](const Case &c) { return !c.pass; }));
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value == 0.0 ? 0.0 : value);
  return buf;
}

namespace {

std::string quote(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

std::string json_number(double value) {
  return std::isfinite(value) ? format_number(value) : quote(format_number(value));
}

std::vector<const Case *> sorted_cases(const Report &report) {
  std::vector<const Case *> out;
  for (const auto &c : report.cases) out.push_back(&c);
  std::stable_sort(out.begin(), out.end(),
                   [](const Case *a, const Case *b) { return a->id < b->id; });
  return out;
}

std::string emit_json(const Report &report) {
  std::string s = "{\n  \"metadata\": {";
  s += "\"suite\": " + quote(report.suite);
  s += ", \"seed\": " + std::to_string(report.seed);
  s += ", \"cases\": " + std::to_string(report.cases.size());
  s += ", \"failures\": " + std::to_string(report.failures());
  s += ", \"passed\": " + std::string(report.passed() ? "true" : "false");
  for (const auto &[k, v] : report.metadata) s += ", " + quote(k) + ": " + quote(v);
  s += "},\n  \"cases\": [";
  bool first = true;
  for (const Case *c : sorted_cases(report)) {
    s += first ? "\n    {" : ",\n    {";
    first = false;
    s += "\"id\": " + quote(c->id);
    s += ", \"pass\": " + std::string(c->pass ? "true" : "false");
    s += ", \"measured\": " + json_number(c->measured);
    s += ", \"allowed\": " + json_number(c->allowed);
    s += ", \"bound\": " + quote(c->bound);
    s += ", \"params\": {";
    for (std::size_t i = 0; i < c->params.size(); ++i) {
      if (i) s += ", ";
      s += quote(c->params[i].first) + ": " + json_number(c->params[i].second);
    }
    s += "}";
    if (!c->message.empty()) s += ", \"message\": " + quote(c->message);
    s += "}";
  }
  s += first ? "]\n}\n" : "\n  ]\n}\n";
  return s;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string emit_csv(const Report &report) {
  const auto cases = sorted_cases(report);
  std::vector<std::string> columns;
  for (const Case *c : cases)
    for (const auto &p : c->params)
      if (std::find(columns.begin(), columns.end(), p.first) == columns.end())
        columns.push_back(p.first);
  std::string s = "id,pass,measured,allowed,bound";
  for (const auto &col : columns) s += "," + csv_field(col);
  s += ",message\n";
  for (const Case *c : cases) {
    s += csv_field(c->id) + "," + (c->pass ? "true" : "false") + "," +
         format_number(c->measured) + "," + format_number(c->allowed) + "," + csv_field(c->bound);
    for (const auto &col : columns) {
      s += ",";
      for (const auto &p : c->params)
        if (p.first == col) s += format_number(p.second);
    }
    s += "," + csv_field(c->message) + "\n";
  }
  return s;
}

}  // namespace

std::string emit(const Report &report, ReportFormat format) {
  return format == ReportFormat::Json ? emit_json(report) : emit_csv(report);
}

void write_report(const Report &report, ReportFormat format, const std::filesystem::path &path) {
  write_text_file(path, emit(report, format));
}

}  // namespace qph
