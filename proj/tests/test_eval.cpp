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

#include <random>
#include <vector>

#include "inpx/csv.hpp"
#include "inpx/eval.hpp"
#include "oracles.hpp"

namespace inpx {
namespace {

std::vector<DetectionRecord> random_records(std::mt19937_64& gen, int n) {
  std::uniform_int_distribution<int> level(0, 10);  // coarse scores force ties
  std::vector<DetectionRecord> r;
  for (int i = 0; i < n; ++i) {
    r.push_back({"r" + std::to_string(i), i % 2 ? Label::kFake : Label::kReal,
                 level(gen) / 10.0});
  }
  std::shuffle(r.begin(), r.end(), gen);
  return r;
}

TEST(Classification, MatchesAllPairsAucAndHandConfusion) {
  std::mt19937_64 gen(61);
  for (int t = 0; t < 20; ++t) {
    const auto recs = random_records(gen, 10);
    const double thr = 0.5;
    const auto rep = classification_metrics(recs, thr);
    EXPECT_NEAR(rep.auc, oracle::auc_all_pairs(recs), 1e-9);
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (const auto& r : recs) {
      const bool fake = r.label == Label::kFake;
      if (r.score >= thr) fake ? ++tp : ++fp;
      else fake ? ++fn : ++tn;
    }
    EXPECT_EQ(rep.tp, tp);
    EXPECT_EQ(rep.fp, fp);
    EXPECT_EQ(rep.tn, tn);
    EXPECT_EQ(rep.fn, fn);
    EXPECT_NEAR(rep.accuracy, (tp + tn) / 10.0, 1e-9);
    const double p = tp + fp ? double(tp) / (tp + fp) : 0.0;
    const double rc = tp + fn ? double(tp) / (tp + fn) : 0.0;
    EXPECT_NEAR(rep.precision, p, 1e-9);
    EXPECT_NEAR(rep.recall, rc, 1e-9);
    EXPECT_NEAR(rep.f1, p + rc > 0 ? 2 * p * rc / (p + rc) : 0.0, 1e-9);
    EXPECT_EQ(rep.n_pos, 5);
    EXPECT_EQ(rep.n_neg, 5);
  }
}

TEST(Classification, EdgeCases) {
  std::vector<DetectionRecord> one_class = {{"a", Label::kFake, 0.2}, {"b", Label::kFake, 0.9}};
  EXPECT_THROW(classification_metrics(one_class), UndefinedError);
  std::vector<DetectionRecord> bad = {{"a", Label::kFake, 1.2}, {"b", Label::kReal, 0.1}};
  EXPECT_THROW(classification_metrics(bad), ParameterError);
  std::vector<DetectionRecord> tied = {{"a", Label::kFake, 0.5}, {"b", Label::kReal, 0.5}};
  EXPECT_DOUBLE_EQ(classification_metrics(tied).auc, 0.5);
  std::vector<DetectionRecord> none = {{"a", Label::kFake, 0.1}, {"b", Label::kReal, 0.2}};
  const auto r = classification_metrics(none);
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.f1, 0.0);
  EXPECT_EQ(r.auc, 0.0);
}

TEST(Classification, BestAccuracy) {
  std::vector<DetectionRecord> recs = {{"a", Label::kReal, 0.1}, {"b", Label::kReal, 0.3},
                                       {"c", Label::kFake, 0.35}, {"d", Label::kFake, 0.8}};
  const auto [t, acc] = best_accuracy(recs);
  EXPECT_EQ(t, 0.35);
  EXPECT_EQ(acc, 1.0);
}

TEST(AveragePrecision, MatchesThresholdSweepOn4x4) {
  std::mt19937_64 gen(62);
  std::uniform_int_distribution<int> level(0, 5);
  std::bernoulli_distribution on(0.4);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> s(16);
    std::vector<std::uint8_t> l(16);
    for (int i = 0; i < 16; ++i) {
      s[i] = level(gen) / 5.0;
      l[i] = on(gen);
    }
    const auto ap = average_precision(s, l);
    if (std::count(l.begin(), l.end(), 1) == 0) {
      EXPECT_FALSE(ap);
      continue;
    }
    EXPECT_NEAR(*ap, oracle::ap_sweep(s, l), 1e-9);
  }
}

LocalizationItem loc_item(const std::string& id, const Plane& sal, const BinaryMask& m) {
  return {id, SaliencyMap(sal), m};
}

TEST(Localization, IouAndApOnSmallMaps) {
  Plane sal(4, 4, 0.0);
  BinaryMask m(4, 4);
  for (int x = 0; x < 2; ++x) {
    m.set(x, 0, true);
    sal.at(x, 0) = 0.9;
  }
  sal.at(3, 3) = 0.7;  // a false positive
  const std::vector<LocalizationItem> items = {loc_item("a", sal, m)};
  const auto rep = localization_metrics(items, {std::nullopt, 0.5});
  EXPECT_NEAR(rep.miou, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(*rep.map, 1.0, 1e-12);

  std::mt19937_64 gen(63);
  for (int t = 0; t < 20; ++t) {
    const Plane s = oracle::random_plane(gen, 4, 4);
    const BinaryMask mk = oracle::random_mask(gen, 4, 4, 0.5);
    if (mk.count() == 0) continue;
    const std::vector<LocalizationItem> one = {loc_item("r", s, mk)};
    std::vector<std::uint8_t> labels;
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) labels.push_back(mk.at(x, y));
    const auto r = localization_metrics(one, {std::nullopt, 0.5});
    EXPECT_NEAR(*r.map, oracle::ap_sweep({s.values().begin(), s.values().end()}, labels), 1e-9);
  }
}

TEST(Localization, EmptyMasksAndGrid) {
  const Plane zero(4, 4, 0.0);
  const std::vector<LocalizationItem> items = {loc_item("e", zero, BinaryMask(4, 4))};
  const auto rep = localization_metrics(items, {std::nullopt, 0.5});
  EXPECT_EQ(rep.miou, 1.0);  // both empty
  EXPECT_FALSE(rep.map);
  EXPECT_EQ(rep.ap_skipped, 1);

  const std::vector<LocalizationItem> mism = {loc_item("m", zero, BinaryMask(5, 4))};
  EXPECT_THROW(localization_metrics(mism, {std::nullopt, 0.5}), DimensionError);
  EXPECT_EQ(localization_metrics(mism, {8, 0.5}).items.size(), 1u);
  EXPECT_THROW(localization_metrics(std::vector<LocalizationItem>{}), ParameterError);
}

TEST(Strata, BinsAndEdgeRules) {
  std::vector<StratifiedRecord> recs = {
      {{"a", Label::kReal, 0.1}, 0.0},  {{"b", Label::kFake, 0.9}, 0.05},
      {{"c", Label::kFake, 0.2}, 0.1},  {{"d", Label::kReal, 0.6}, 0.3},
      {{"e", Label::kFake, 0.7}, 1.0},
  };
  const std::vector<double> edges = {0.0, 0.1, 0.5, 1.0};
  const auto s = stratify_by_mask_ratio(recs, edges);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].n, 2);
  EXPECT_EQ(*s[0].accuracy, 1.0);
  ASSERT_TRUE(s[0].report);
  EXPECT_EQ(s[1].n, 2);  // 0.1 goes to the upper bin
  EXPECT_EQ(*s[1].accuracy, 0.0);
  EXPECT_EQ(s[2].n, 1);  // 1.0 belongs to the last bin
  EXPECT_FALSE(s[2].report);  // one class only
  EXPECT_EQ(*s[2].accuracy, 1.0);

  const std::vector<double> bad1 = {0.0, 0.5, 0.5, 1.0}, bad2 = {0.1, 1.0};
  EXPECT_THROW(stratify_by_mask_ratio(recs, bad1), ParameterError);
  EXPECT_THROW(stratify_by_mask_ratio(recs, bad2), ParameterError);
  const std::vector<double> e2 = {0.0, 0.5, 1.0};
  const auto empty = stratify_by_mask_ratio(std::span<const StratifiedRecord>{}, e2);
  EXPECT_TRUE(empty[0].empty);
  EXPECT_FALSE(empty[0].accuracy);
}

TEST(Manifest, ParsesAndCollectsErrors) {
  const auto ok = parse_manifest(
      parse_csv("item_id,label,score,mask_path,mask_ratio\n"
                "a,real,0.1,,\nb,1,0.9,m/b.png,0.25\n"),
      "/x/man.csv");
  ASSERT_EQ(ok.size(), 2u);
  EXPECT_EQ(ok[1].record.label, Label::kFake);
  EXPECT_EQ(*ok[1].mask_path, std::filesystem::path("/x/m/b.png"));
  EXPECT_EQ(*ok[1].mask_ratio, 0.25);
  EXPECT_FALSE(ok[0].mask_path);

  try {
    parse_manifest(parse_csv("item_id,label,score\na,2,0.1\na,0,x\nc,0,1.5\n,0,0.2\nd,0\n"),
                   "m.csv");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    for (const char* frag : {"line 2", "line 3", "line 4", "line 5", "line 6"}) {
      EXPECT_NE(msg.find(frag), std::string::npos) << frag;
    }
  }
  EXPECT_THROW(parse_manifest(parse_csv("id,label,score\na,0,0.1\n"), "m.csv"), FormatError);
  EXPECT_THROW(parse_manifest(parse_csv("item_id,label,score\na,0,0.1\na,1,0.2\n"), "m.csv"),
               FormatError);
}

}  // namespace
}  // namespace inpx
