// Copyright 2026 The INP-X Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal RFC 4180 reader for manifests (quoted fields, CRLF tolerant).

#ifndef INPX_CSV_HPP_
#define INPX_CSV_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inpx/error.hpp"
#include "inpx/io.hpp"

namespace inpx {

struct CsvTable {
  struct Row {
    int line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
  };

  std::vector<std::string> header;
  std::vector<Row> rows;

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  }
};

inline CsvTable parse_csv(std::string_view text) {
  std::vector<CsvTable::Row> records;
  CsvTable::Row cur;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  int line = 1;
  cur.line = 1;

  auto end_field = [&] {
    cur.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = cur.fields.size() == 1 && cur.fields[0].empty();
    if (!blank) records.push_back(std::move(cur));
    cur = CsvTable::Row{};
    cur.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (field_started && !field.empty()) {
          throw FormatError("csv line " + std::to_string(line) +
                            ": stray quote inside field");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(ch);
        field_started = true;
    }
  }
  if (in_quotes) throw FormatError("csv: unterminated quoted field");
  if (field_started || !cur.fields.empty()) end_record();

  CsvTable table;
  if (records.empty()) throw FormatError("csv: missing header");
  table.header = std::move(records.front().fields);
  records.erase(records.begin());
  table.rows = std::move(records);
  return table;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                    bytes.size()));
}

/// Resolves a manifest path entry relative to the manifest's directory.
inline std::filesystem::path resolve_manifest_path(
    const std::filesystem::path& manifest, const std::string& entry) {
  std::filesystem::path p(entry);
  if (p.is_absolute()) return p;
  return manifest.parent_path() / p;
}

}  // namespace inpx

#endif  // INPX_CSV_HPP_
