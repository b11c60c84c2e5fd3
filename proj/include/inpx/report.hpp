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

// Report envelope shared by every subcommand, and report merging.
//
//   {"config": RunConfig, "kind": ..., "result": ..., "seed": ...,
//    "tool": {"name": "inpx", "version": ...}}
//
// Objects serialize with sorted keys and no timestamps, so identical
// configurations give byte-identical files.

#ifndef INPX_REPORT_HPP_
#define INPX_REPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "inpx/error.hpp"
#include "inpx/eval.hpp"
#include "inpx/io.hpp"

namespace inpx {

inline constexpr const char* kToolName = "inpx";
inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  std::string subcommand;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 7;
  std::string output = "-";
  int jobs = 1;

  nlohmann::json to_json() const {
    return {{"subcommand", subcommand}, {"parameters", parameters},
            {"seed", seed}, {"output", output}, {"jobs", jobs}};
  }

  static RunConfig from_json(const nlohmann::json& j) {
    try {
      RunConfig c;
      c.subcommand = j.at("subcommand").get<std::string>();
      c.parameters = j.at("parameters");
      c.seed = j.at("seed").get<std::uint64_t>();
      c.output = j.at("output").get<std::string>();
      c.jobs = j.at("jobs").get<int>();
      return c;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("run config: ") + e.what());
    }
  }
};

inline nlohmann::json make_report(const std::string& kind, const RunConfig& config,
                                  nlohmann::json result) {
  return {{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
          {"kind", kind},
          {"config", config.to_json()},
          {"seed", config.seed},
          {"result", std::move(result)}};
}

inline std::string dump_report(const nlohmann::json& report) {
  return report.dump(2) + "\n";
}

/// Writes to `path`, or to stdout for "-".
inline void emit_text(const std::string& text, const std::string& path) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_atomic(path, text);
  }
}

/// Throws FormatError unless `j` carries the envelope fields.
inline void validate_report(const nlohmann::json& j, const std::string& source = "report") {
  auto fail = [&](const std::string& what) {
    throw FormatError(source + ": not an inpx report (" + what + ")");
  };
  if (!j.is_object()) fail("not a JSON object");
  for (const char* key : {"tool", "kind", "config", "seed", "result"}) {
    if (!j.contains(key)) fail(std::string("missing '") + key + "'");
  }
  if (!j["kind"].is_string()) fail("'kind' is not a string");
  if (!j["tool"].is_object() || j["tool"].value("name", "") != kToolName) {
    fail("unknown tool");
  }
  RunConfig::from_json(j["config"]);
}

inline nlohmann::json read_report(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  validate_report(j, path.string());
  return j;
}

namespace detail {

// Parameters that may differ between mergeable reports of a kind.
inline std::vector<std::string> partition_keys(const std::string& kind) {
  if (kind == "strata") return {"manifest", "edges"};
  return {"manifest", "input_manifest", "input", "a", "b"};
}

inline nlohmann::json without_keys(nlohmann::json params, const std::vector<std::string>& keys) {
  for (const auto& k : keys) params.erase(k);
  return params;
}

}  // namespace detail

/// Merges validated reports. One input passes through unchanged. Several
/// inputs must share kind, seed, tool version and every non-partition
/// parameter; the non-empty bins of strata reports are unioned (overlapping
/// bins are refused), other kinds are listed in input order.
inline nlohmann::json merge_reports(const std::vector<nlohmann::json>& reports,
                                    const RunConfig& merge_config) {
  if (reports.empty()) throw ParameterError("no reports to merge");
  if (reports.size() == 1) return reports.front();
  const nlohmann::json& first = reports.front();
  const std::string kind = first["kind"];
  const auto keys = detail::partition_keys(kind);
  const auto base_params = detail::without_keys(first["config"]["parameters"], keys);
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const nlohmann::json& r = reports[i];
    const std::string where = "report " + std::to_string(i + 1);
    if (r["kind"] != first["kind"]) {
      throw FormatError(where + ": kind '" + r["kind"].get<std::string>() +
                        "' does not match '" + kind + "'");
    }
    if (r["tool"]["version"] != first["tool"]["version"]) {
      throw ParameterError(where + ": tool version differs; merge refused");
    }
    if (r["seed"] != first["seed"]) {
      throw ParameterError(where + ": seed differs; merge refused");
    }
    if (r["config"]["subcommand"] != first["config"]["subcommand"]) {
      throw ParameterError(where + ": subcommand differs; merge refused");
    }
    const auto params = detail::without_keys(r["config"]["parameters"], keys);
    if (params != base_params) {
      throw ParameterError(where + ": conflicting parameters " + params.dump() +
                           " vs " + base_params.dump() + "; merge refused");
    }
  }

  nlohmann::json sources = nlohmann::json::array();
  for (const auto& r : reports) sources.push_back(r["config"]);
  nlohmann::json result = {{"merged_kind", kind}, {"sources", sources}};

  if (kind == "strata") {
    std::vector<nlohmann::json> strata;
    for (const auto& r : reports) {
      if (!r["result"].is_array()) throw FormatError("strata report result is not an array");
      for (const auto& s : r["result"]) {
        const Stratum parsed = stratum_from_json(s);
        if (parsed.empty) continue;
        bool duplicate = false;
        for (const auto& other : strata) {
          const double lo = other["lower"], hi = other["upper"];
          if (lo == parsed.lower && hi == parsed.upper && other == s) {
            duplicate = true;
            break;
          }
          if (parsed.lower < hi && lo < parsed.upper) {
            throw ParameterError("strata bins overlap at [" + std::to_string(parsed.lower) +
                                 ", " + std::to_string(parsed.upper) + "); merge refused");
          }
        }
        if (!duplicate) strata.push_back(s);
      }
    }
    std::sort(strata.begin(), strata.end(), [](const auto& a, const auto& b) {
      return a["lower"].template get<double>() < b["lower"].template get<double>();
    });
    result["strata"] = strata;
  } else {
    nlohmann::json results = nlohmann::json::array();
    for (const auto& r : reports) results.push_back(r["result"]);
    result["results"] = results;
  }
  return make_report("merged", merge_config, std::move(result));
}

/// Accuracy-vs-mask-ratio table for external plotting.
inline std::string strata_csv(const nlohmann::json& strata) {
  std::ostringstream os;
  os.precision(17);
  os << "lower,upper,n,accuracy,auc\n";
  for (const auto& s : strata) {
    os << s.at("lower").get<double>() << ',' << s.at("upper").get<double>() << ','
       << s.at("n").get<std::int64_t>() << ',';
    if (!s.at("accuracy").is_null()) os << s["accuracy"].get<double>();
    os << ',';
    if (s.contains("report") && !s["report"].is_null()) os << s["report"]["auc"].get<double>();
    os << '\n';
  }
  return os.str();
}

/// The strata array inside a strata or merged-strata report, if any.
inline const nlohmann::json* find_strata(const nlohmann::json& report) {
  if (report["kind"] == "strata") return &report["result"];
  if (report["kind"] == "merged" && report["result"].contains("strata")) {
    return &report["result"]["strata"];
  }
  return nullptr;
}

}  // namespace inpx

#endif  // INPX_REPORT_HPP_
