// Copyright 2026 The modelshare Authors
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

#include "modelshare/cli/table.hpp"

#include <algorithm>
#include <cstdio>

#include "modelshare/core_model.hpp"

namespace modelshare::cli {

TableFormat parse_format(const std::string& name) {
  if (name == "plain") return TableFormat::Plain;
  if (name == "csv") return TableFormat::Csv;
  throw ValidationError("format: expected plain or csv, got '" + name + "'");
}

std::string format_fixed6(double value) {
  if (value == 0.0) value = 0.0;  // drops the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string out(buf);
  if (out == "-0.000000") out = "0.000000";
  return out;
}

std::string emit_table(const Report& report, TableFormat format) {
  std::vector<const ReportColumn*> kept;
  for (const auto& col : report.columns) {
    if (col.values.size() != report.labels.size()) throw ValidationError("report: column length mismatch");
    const bool any = std::any_of(col.values.begin(), col.values.end(), [](const auto& v) { return v.has_value(); });
    if (any) kept.push_back(&col);
  }
  std::vector<std::vector<std::string>> cells;
  cells.push_back({report.label_header});
  for (const auto* col : kept) cells.back().push_back(col->header);
  for (std::size_t r = 0; r < report.labels.size(); ++r) {
    cells.push_back({report.labels[r]});
    for (const auto* col : kept) cells.back().push_back(col->values[r] ? format_fixed6(*col->values[r]) : "");
  }

  std::string out;
  if (format == TableFormat::Csv) {
    for (const auto& row : cells) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        const bool quote = row[c].find_first_of(",\"") != std::string::npos;
        if (!quote) {
          out += row[c];
          continue;
        }
        out += '"';
        for (const char ch : row[c]) {
          if (ch == '"') out += '"';
          out += ch;
        }
        out += '"';
      }
      out += '\n';
    }
    return out;
  }

  // Display width counts code points so labels with non-ASCII symbols align.
  auto width = [](const std::string& s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char ch) { return (ch & 0xC0) != 0x80; }));
  };
  std::vector<std::size_t> widths(kept.size() + 1, 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], width(row[c]));
  }
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += ' ';
      const std::string pad(widths[c] - width(row[c]), ' ');
      line += c == 0 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

}  // namespace modelshare::cli
