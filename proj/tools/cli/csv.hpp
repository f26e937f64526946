/*
 * Copyright 2026 The mccal Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MCCAL_TOOLS_CLI_CSV_HPP_
#define MCCAL_TOOLS_CLI_CSV_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mccal::cli {

// Comma-separated, header row first. Fields may be double-quoted, with ""
// as an escaped quote. Blank lines are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line per row

  std::optional<std::size_t> Find(std::string_view name) const;
  std::size_t Require(std::string_view name) const;
  // Parses every cell of the column; errors name the line and column.
  std::vector<double> NumericColumn(std::size_t col) const;
};

CsvTable ParseCsv(std::string_view text);
CsvTable ReadCsv(const std::string& path);

std::string SerializeCsv(const CsvTable& table);
void WriteCsv(const std::string& path, const CsvTable& table);

// 17 significant digits, enough to round-trip any double.
std::string FormatDouble(double v);
double ParseDouble(std::string_view text);

void WriteText(const std::string& path, const std::string& text);

}  // namespace mccal::cli

#endif  // MCCAL_TOOLS_CLI_CSV_HPP_
