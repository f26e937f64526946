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

#include "cli/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "cli/capi.hpp"

namespace mccal::cli {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void ParseFail(std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ": " << what;
  throw CliError(kExitValidation, os.str());
}

}  // namespace

std::optional<std::size_t> CsvTable::Find(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::Require(std::string_view name) const {
  if (auto i = Find(name)) return *i;
  throw CliError(kExitValidation,
                 "missing column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::NumericColumn(std::size_t col) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    try {
      out.push_back(ParseDouble(rows[r][col]));
    } catch (const CliError& e) {
      ParseFail(line_numbers[r], "column '" + header[col] + "': " + e.what());
    }
  }
  return out;
}

CsvTable ParseCsv(std::string_view text) {
  CsvTable table;
  std::size_t pos = 0;
  std::size_t line = 0;
  bool have_header = false;
  while (pos < text.size()) {
    ++line;
    const std::size_t start_line = line;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (; pos < text.size(); ++pos) {
      const char c = text[pos];
      if (quoted) {
        if (c == '"') {
          if (pos + 1 < text.size() && text[pos + 1] == '"') {
            field.push_back('"');
            ++pos;
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
        }
        continue;
      }
      if (c == '"') {
        quoted = true;
        any = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
        any = true;
      } else if (c == '\n') {
        ++pos;
        break;
      } else if (c != '\r') {
        field.push_back(c);
        any = true;
      }
    }
    if (quoted) ParseFail(start_line, "unterminated quoted field");
    if (!any && field.empty()) continue;  // blank line
    fields.push_back(std::move(field));

    if (!have_header) {
      for (auto& f : fields) f = std::string(Trim(f));
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      std::ostringstream os;
      os << "expected " << table.header.size() << " fields, found "
         << fields.size();
      ParseFail(start_line, os.str());
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(start_line);
  }
  if (!have_header) throw CliError(kExitValidation, "empty CSV input");
  return table;
}

CsvTable ReadCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kExitIo, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw CliError(kExitIo, "error reading '" + path + "'");
  try {
    return ParseCsv(buf.str());
  } catch (const CliError& e) {
    throw CliError(e.exit_code(), path + ": " + e.what());
  }
}

std::string SerializeCsv(const CsvTable& table) {
  std::string out;
  auto put = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out.push_back(',');
      const std::string& f = fields[i];
      if (f.find_first_of(",\"\n\r") == std::string::npos) {
        out += f;
        continue;
      }
      out.push_back('"');
      for (char c : f) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
      }
      out.push_back('"');
    }
    out.push_back('\n');
  };
  put(table.header);
  for (const auto& row : table.rows) put(row);
  return out;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError(kExitIo, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw CliError(kExitIo, "error writing '" + path + "'");
}

void WriteCsv(const std::string& path, const CsvTable& table) {
  WriteText(path, SerializeCsv(table));
}

std::string FormatDouble(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

double ParseDouble(std::string_view text) {
  std::string_view s = Trim(text);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
    throw CliError(kExitValidation,
                   "'" + std::string(text) + "' is not a number");
  }
  return v;
}

}  // namespace mccal::cli
