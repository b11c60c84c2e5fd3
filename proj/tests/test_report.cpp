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

#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "inpx/manifest.hpp"
#include "inpx/parallel.hpp"
#include "inpx/report.hpp"

namespace inpx {
namespace {

using nlohmann::json;

json strata_report(const std::string& manifest, std::vector<json> strata) {
  RunConfig cfg;
  cfg.subcommand = "eval-strata";
  cfg.parameters = {{"manifest", manifest}, {"edges", "0,0.5,1"}, {"threshold", 0.5}};
  return make_report("strata", cfg, json(std::move(strata)));
}

json stratum(double lo, double hi, std::int64_t n, double acc) {
  Stratum s;
  s.lower = lo;
  s.upper = hi;
  s.n = n;
  s.empty = n == 0;
  if (n > 0) s.accuracy = acc;
  return to_json(s);
}

TEST(Envelope, RequiredFields) {
  RunConfig cfg;
  cfg.subcommand = "x";
  const json r = make_report("k", cfg, {{"v", 1}});
  EXPECT_NO_THROW(validate_report(r));
  EXPECT_EQ(r["tool"]["version"], kToolVersion);
  EXPECT_EQ(RunConfig::from_json(r["config"]).to_json(), cfg.to_json());
  json bad = r;
  bad.erase("seed");
  EXPECT_THROW(validate_report(bad), FormatError);
  bad = r;
  bad["tool"]["name"] = "other";
  EXPECT_THROW(validate_report(bad), FormatError);
  EXPECT_THROW(validate_report(json::array()), FormatError);
}

TEST(Merge, SingleInputPassesThrough) {
  const json a = strata_report("a.csv", {stratum(0, 0.5, 3, 1.0), stratum(0.5, 1, 0, 0)});
  EXPECT_EQ(merge_reports({a}, RunConfig{}), a);
  EXPECT_THROW(merge_reports({}, RunConfig{}), ParameterError);
}

TEST(Merge, StrataUnionSkipsEmptyAndSorts) {
  const json a = strata_report("a.csv", {stratum(0, 0.5, 0, 0), stratum(0.5, 1, 4, 0.75)});
  const json b = strata_report("b.csv", {stratum(0, 0.5, 2, 0.5), stratum(0.5, 1, 0, 0)});
  const json m = merge_reports({a, b}, RunConfig{"report"});
  EXPECT_EQ(m["kind"], "merged");
  ASSERT_EQ(m["result"]["strata"].size(), 2u);
  EXPECT_EQ(m["result"]["strata"][0]["lower"], 0.0);
  EXPECT_EQ(m["result"]["strata"][1]["n"], 4);
  EXPECT_EQ(m["result"]["sources"].size(), 2u);
  const auto csv = strata_csv(*find_strata(m));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lower,upper,n,accuracy,auc");

  // The same report twice is idempotent.
  EXPECT_EQ(merge_reports({a, a}, RunConfig{"report"})["result"]["strata"].size(), 1u);
}

TEST(Merge, Conflicts) {
  const json a = strata_report("a.csv", {stratum(0, 0.5, 2, 1.0)});
  const json b = strata_report("b.csv", {stratum(0, 0.5, 3, 0.0)});
  EXPECT_THROW(merge_reports({a, b}, RunConfig{}), ParameterError);  // overlap

  json c = strata_report("c.csv", {stratum(0.5, 1, 1, 1.0)});
  c["seed"] = 8;
  EXPECT_THROW(merge_reports({a, c}, RunConfig{}), ParameterError);
  c = strata_report("c.csv", {stratum(0.5, 1, 1, 1.0)});
  c["config"]["parameters"]["threshold"] = 0.7;
  EXPECT_THROW(merge_reports({a, c}, RunConfig{}), ParameterError);
  c = strata_report("c.csv", {stratum(0.5, 1, 1, 1.0)});
  c["tool"]["version"] = "9.9.9";
  EXPECT_THROW(merge_reports({a, c}, RunConfig{}), ParameterError);
  c["kind"] = "classification";
  EXPECT_THROW(merge_reports({a, c}, RunConfig{}), FormatError);
}

TEST(Merge, OtherKindsAreListed) {
  RunConfig cfg;
  cfg.subcommand = "eval-cls";
  cfg.parameters = {{"manifest", "a.csv"}, {"threshold", 0.5}};
  const json a = make_report("classification", cfg, {{"auc", 0.7}});
  cfg.parameters["manifest"] = "b.csv";
  const json b = make_report("classification", cfg, {{"auc", 0.9}});
  const json m = merge_reports({a, b}, RunConfig{"report"});
  EXPECT_EQ(m["result"]["merged_kind"], "classification");
  EXPECT_EQ(m["result"]["results"][1]["auc"], 0.9);
  EXPECT_EQ(find_strata(m), nullptr);
}

TEST(PathManifest, TripletColumns) {
  const auto rows = parse_path_manifest(
      parse_csv("item_id,original_path,generated_path,mask_path,dataset\n"
                "a,o/a.png,g/a.png,m/a.png,coco\nb,/o/b.png,g/b.png,m/b.png,\n"),
      "/d/man.csv", triplet_columns());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(*rows[0].path("original_path"), std::filesystem::path("/d/o/a.png"));
  EXPECT_EQ(*rows[1].path("original_path"), std::filesystem::path("/o/b.png"));
  EXPECT_EQ(rows[0].fields.at("dataset"), "coco");
  EXPECT_FALSE(rows[1].fields.count("dataset"));
  EXPECT_EQ(rows[0].path("nope"), nullptr);
}

TEST(PathManifest, Errors) {
  try {
    parse_path_manifest(parse_csv("item_id,original_path\na,x\n"), "m.csv", triplet_columns());
    FAIL();
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("generated_path"), std::string::npos);
    EXPECT_NE(msg.find("mask_path"), std::string::npos);
  }
  try {
    parse_path_manifest(parse_csv("item_id,original_path,generated_path,mask_path\n"
                                  "a,o,g,\na,o,g,m\n,o,g,m\nc,o\n"),
                        "m.csv", triplet_columns());
    FAIL();
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    for (const char* frag : {"line 2: empty mask_path", "line 3: duplicate", "line 4: empty item_id",
                             "line 5: expected 4 fields"})
      EXPECT_NE(msg.find(frag), std::string::npos) << frag << "\n" << msg;
  }
}

TEST(PathManifest, SafeStems) {
  EXPECT_TRUE(safe_file_stem("img_001"));
  EXPECT_FALSE(safe_file_stem(""));
  EXPECT_FALSE(safe_file_stem(".."));
  EXPECT_FALSE(safe_file_stem("a/b"));
}

TEST(Parallel, VisitsEveryIndexOnceAndRethrows) {
  for (int jobs : {1, 4}) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_THROW(parallel_for(50, jobs,
                              [](std::size_t i) {
                                if (i == 17) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

}  // namespace
}  // namespace inpx
