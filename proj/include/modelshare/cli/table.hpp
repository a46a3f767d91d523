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

// Plain-text and CSV rendering of labeled numeric reports.

#ifndef MODELSHARE_CLI_TABLE_HPP
#define MODELSHARE_CLI_TABLE_HPP

#include <optional>
#include <string>
#include <vector>

namespace modelshare::cli {

enum class TableFormat { Plain, Csv };

TableFormat parse_format(const std::string& name);

struct ReportColumn {
  std::string header;
  std::vector<std::optional<double>> values;
};

/// One row per label; columns whose values are all empty are dropped.
struct Report {
  std::string label_header = "player";
  std::vector<std::string> labels;
  std::vector<ReportColumn> columns;
};

/// Six decimals, ties to even on the exact binary value.
std::string format_fixed6(double value);

std::string emit_table(const Report& report, TableFormat format);

}  // namespace modelshare::cli

#endif  // MODELSHARE_CLI_TABLE_HPP
