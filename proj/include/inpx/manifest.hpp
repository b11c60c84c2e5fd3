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

// Path manifests: CSV with an item_id column plus named path columns,
// relative paths resolved against the manifest's directory.

#ifndef INPX_MANIFEST_HPP_
#define INPX_MANIFEST_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "inpx/csv.hpp"
#include "inpx/error.hpp"

namespace inpx {

struct PathRow {
  int line = 0;
  std::string item_id;
  std::map<std::string, std::filesystem::path> paths;  // non-empty path columns
  std::map<std::string, std::string> fields;           // non-path optional columns

  const std::filesystem::path* path(const std::string& column) const {
    auto it = paths.find(column);
    return it == paths.end() ? nullptr : &it->second;
  }
};

struct PathColumns {
  std::vector<std::string> required;
  std::vector<std::string> optional_paths;
  std::vector<std::string> optional_fields;
};

/// Column layout of a triplet manifest.
inline PathColumns triplet_columns() {
  return {{"original_path", "generated_path", "mask_path"}, {}, {"dataset"}};
}

/// Column layout of a signal manifest for correlation analysis.
inline PathColumns signal_columns() {
  return {{"original_path", "inpainted_path", "reconstructed_path"}, {"mask_path"}, {}};
}

/// Parses a path manifest; all row problems are reported together.
inline std::vector<PathRow> parse_path_manifest(const CsvTable& table,
                                                const std::filesystem::path& manifest,
                                                const PathColumns& cols) {
  const auto c_id = table.column("item_id");
  std::vector<std::string> missing;
  if (!c_id) missing.push_back("item_id");
  for (const auto& name : cols.required)
    if (!table.column(name)) missing.push_back(name);
  if (!missing.empty()) {
    std::string msg = manifest.string() + ": missing column(s)";
    for (const auto& m : missing) msg += " " + m;
    throw FormatError(msg);
  }
  std::vector<PathRow> out;
  std::vector<std::string> errors;
  std::unordered_set<std::string> seen;
  for (const auto& row : table.rows) {
    auto err = [&](const std::string& msg) {
      errors.push_back("line " + std::to_string(row.line) + ": " + msg);
    };
    if (row.fields.size() != table.header.size()) {
      err("expected " + std::to_string(table.header.size()) + " fields, got " +
          std::to_string(row.fields.size()));
      continue;
    }
    PathRow r;
    r.line = row.line;
    r.item_id = row.fields[*c_id];
    if (r.item_id.empty()) {
      err("empty item_id");
      continue;
    }
    if (!seen.insert(r.item_id).second) {
      err("duplicate item_id '" + r.item_id + "'");
      continue;
    }
    bool ok = true;
    for (const auto& name : cols.required) {
      const std::string& v = row.fields[*table.column(name)];
      if (v.empty()) {
        err("empty " + name);
        ok = false;
        break;
      }
      r.paths[name] = resolve_manifest_path(manifest, v);
    }
    if (!ok) continue;
    for (const auto& name : cols.optional_paths) {
      const auto c = table.column(name);
      if (c && !row.fields[*c].empty()) r.paths[name] = resolve_manifest_path(manifest, row.fields[*c]);
    }
    for (const auto& name : cols.optional_fields) {
      const auto c = table.column(name);
      if (c && !row.fields[*c].empty()) r.fields[name] = row.fields[*c];
    }
    out.push_back(std::move(r));
  }
  if (!errors.empty()) {
    std::string msg = manifest.string() + ": invalid rows";
    for (const auto& e : errors) msg += "\n  " + e;
    throw FormatError(msg);
  }
  return out;
}

inline std::vector<PathRow> load_path_manifest(const std::filesystem::path& manifest,
                                               const PathColumns& cols) {
  return parse_path_manifest(read_csv(manifest), manifest, cols);
}

/// item_id usable as an output file stem.
inline bool safe_file_stem(const std::string& id) {
  if (id.empty() || id == "." || id == "..") return false;
  return id.find_first_of("/\\") == std::string::npos && id.find('\0') == std::string::npos;
}

}  // namespace inpx

#endif  // INPX_MANIFEST_HPP_
