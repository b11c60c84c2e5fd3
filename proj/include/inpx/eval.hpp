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

// Detector evaluation from ingested scores and saliency maps.
//
// Classification: accuracy / precision / recall / F1 at a threshold
// (predict fake iff score >= threshold) and threshold-free ROC AUC from the
// Mann-Whitney rank statistic, ties credited 1/2.
//
// Localization: saliency and ground-truth mask are brought to a common grid
// (224 x 224 by default; saliency bilinear, mask nearest). IoU uses the
// saliency thresholded at 0.5, with IoU = 1 when both sets are empty. AP is
// the step-wise area under the pixel precision-recall curve of the
// continuous saliency; images with an empty mask have no AP and are counted.

#ifndef INPX_EVAL_HPP_
#define INPX_EVAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "inpx/csv.hpp"
#include "inpx/error.hpp"
#include "inpx/filter.hpp"
#include "inpx/image.hpp"
#include "inpx/stats.hpp"

namespace inpx {

enum class Label : int { kReal = 0, kFake = 1 };

struct DetectionRecord {
  std::string item_id;
  Label label = Label::kReal;
  double score = 0.0;  // detector's probability of "fake"

  void validate() const {
    if (!(score >= 0.0 && score <= 1.0)) {
      throw ParameterError("score must lie in [0,1] for " + item_id);
    }
  }
};

struct ClassificationReport {
  double accuracy = 0.0;
  double auc = 0.0;
  double precision = 0.0;  // 0 when nothing is predicted fake
  double recall = 0.0;
  double f1 = 0.0;         // 0 when precision + recall = 0
  double threshold = 0.5;
  std::int64_t n_pos = 0;
  std::int64_t n_neg = 0;
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

inline nlohmann::json to_json(const ClassificationReport& r) {
  return {{"accuracy", r.accuracy}, {"auc", r.auc},
          {"precision", r.precision}, {"recall", r.recall},
          {"f1", r.f1}, {"threshold", r.threshold},
          {"n_pos", r.n_pos}, {"n_neg", r.n_neg},
          {"confusion", {{"tp", r.tp}, {"fp", r.fp}, {"tn", r.tn}, {"fn", r.fn}}}};
}

namespace detail {

struct Confusion {
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

inline Confusion confusion(std::span<const DetectionRecord> records, double threshold) {
  Confusion c;
  for (const auto& r : records) {
    const bool predicted_fake = r.score >= threshold;
    if (r.label == Label::kFake) {
      predicted_fake ? ++c.tp : ++c.fn;
    } else {
      predicted_fake ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

inline void fill_threshold_metrics(ClassificationReport& r, const Confusion& c) {
  r.tp = c.tp;
  r.fp = c.fp;
  r.tn = c.tn;
  r.fn = c.fn;
  const double n = static_cast<double>(c.tp + c.fp + c.tn + c.fn);
  r.accuracy = n > 0 ? static_cast<double>(c.tp + c.tn) / n : 0.0;
  r.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
  r.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
  r.f1 = r.precision + r.recall > 0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
}

}  // namespace detail

/// ROC AUC via the rank-sum statistic. Throws UndefinedError unless both
/// classes are present.
inline double roc_auc(std::span<const DetectionRecord> records) {
  std::vector<double> scores;
  std::int64_t n_pos = 0;
  for (const auto& r : records) {
    scores.push_back(r.score);
    if (r.label == Label::kFake) ++n_pos;
  }
  const std::int64_t n_neg = static_cast<std::int64_t>(records.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw UndefinedError("AUC needs both real and fake records");
  }
  const auto ranks = average_ranks(scores);
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].label == Label::kFake) pos_rank_sum += ranks[i];
  }
  const double u = pos_rank_sum - 0.5 * static_cast<double>(n_pos) * (n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

inline ClassificationReport classification_metrics(std::span<const DetectionRecord> records,
                                                   double threshold = 0.5) {
  ClassificationReport r;
  r.threshold = threshold;
  for (const auto& rec : records) {
    rec.validate();
    rec.label == Label::kFake ? ++r.n_pos : ++r.n_neg;
  }
  r.auc = roc_auc(records);
  detail::fill_threshold_metrics(r, detail::confusion(records, threshold));
  return r;
}

/// Threshold (among observed scores and +inf) maximizing accuracy.
inline std::pair<double, double> best_accuracy(std::span<const DetectionRecord> records) {
  std::vector<double> candidates;
  for (const auto& r : records) candidates.push_back(r.score);
  candidates.push_back(std::numeric_limits<double>::infinity());
  double best_t = candidates.back();
  double best_acc = -1.0;
  for (double t : candidates) {
    ClassificationReport tmp;
    detail::fill_threshold_metrics(tmp, detail::confusion(records, t));
    if (tmp.accuracy > best_acc) {
      best_acc = tmp.accuracy;
      best_t = t;
    }
  }
  return {best_t, best_acc};
}

// ---------------------------------------------------------------- localization

/// Average precision of scores against binary labels, using the step-wise
/// sum over distinct score thresholds (descending) of
/// (recall_k - recall_{k-1}) * precision_k. nullopt without positives.
inline std::optional<double> average_precision(std::span<const double> scores,
                                               std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw DimensionError("AP: length mismatch");
  const auto positives = std::count_if(labels.begin(), labels.end(),
                                       [](std::uint8_t l) { return l != 0; });
  if (positives == 0) return std::nullopt;
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double ap = 0.0;
  double prev_recall = 0.0;
  std::int64_t tp = 0, seen = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]] != 0) ++tp;
      ++seen;
      ++j;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(positives);
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

struct LocalizationItem {
  std::string item_id;
  SaliencyMap saliency;
  BinaryMask mask;
};

struct LocalizationOptions {
  std::optional<int> grid_size = 224;  // nullopt: compare at native size
  double threshold = 0.5;
};

struct LocalizationReport {
  struct Item {
    std::string item_id;
    double iou = 0.0;
    std::optional<double> ap;
  };
  double miou = 0.0;
  std::optional<double> map;
  std::int64_t ap_skipped = 0;  // items with an empty ground-truth mask
  std::vector<Item> items;
};

inline nlohmann::json to_json(const LocalizationReport& r) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : r.items) {
    items.push_back({{"item_id", it.item_id},
                     {"iou", it.iou},
                     {"ap", it.ap ? nlohmann::json(*it.ap) : nlohmann::json(nullptr)}});
  }
  return {{"miou", r.miou},
          {"map", r.map ? nlohmann::json(*r.map) : nlohmann::json(nullptr)},
          {"ap_skipped", r.ap_skipped},
          {"items", items}};
}

inline LocalizationReport localization_metrics(std::span<const LocalizationItem> items,
                                               const LocalizationOptions& opt = {}) {
  if (items.empty()) throw ParameterError("localization needs at least one item");
  LocalizationReport report;
  double iou_sum = 0.0;
  double ap_sum = 0.0;
  std::int64_t ap_count = 0;
  for (const auto& item : items) {
    Plane sal = item.saliency.plane();
    BinaryMask mask = item.mask;
    if (opt.grid_size) {
      sal = resize_bilinear(sal, *opt.grid_size, *opt.grid_size);
      mask = resize_nearest(mask, *opt.grid_size, *opt.grid_size);
    } else {
      detail::require_same_extent(sal, mask, "saliency and mask differ in size");
    }
    std::int64_t inter = 0, uni = 0;
    std::vector<std::uint8_t> labels(mask.pixel_count());
    for (int y = 0; y < mask.height(); ++y) {
      for (int x = 0; x < mask.width(); ++x) {
        const bool s = sal.at(x, y) >= opt.threshold;
        const bool m = mask.at(x, y);
        inter += s && m;
        uni += s || m;
        labels[static_cast<std::size_t>(y) * mask.width() + x] = m ? 1 : 0;
      }
    }
    LocalizationReport::Item out;
    out.item_id = item.item_id;
    out.iou = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
    out.ap = average_precision(sal.values(), labels);
    iou_sum += out.iou;
    if (out.ap) {
      ap_sum += *out.ap;
      ++ap_count;
    } else {
      ++report.ap_skipped;
    }
    report.items.push_back(std::move(out));
  }
  report.miou = iou_sum / static_cast<double>(items.size());
  if (ap_count > 0) report.map = ap_sum / static_cast<double>(ap_count);
  return report;
}

// ---------------------------------------------------------------- strata

struct StratifiedRecord {
  DetectionRecord record;
  double mask_ratio = 0.0;
};

struct Stratum {
  double lower = 0.0;
  double upper = 0.0;
  std::int64_t n = 0;
  bool empty = true;
  std::optional<double> accuracy;               // whenever n > 0
  std::optional<ClassificationReport> report;   // when both classes present
};

inline nlohmann::json to_json(const Stratum& s) {
  nlohmann::json j = {{"lower", s.lower}, {"upper", s.upper}, {"n", s.n},
                      {"empty", s.empty}};
  j["accuracy"] = s.accuracy ? nlohmann::json(*s.accuracy) : nlohmann::json(nullptr);
  j["report"] = s.report ? to_json(*s.report) : nlohmann::json(nullptr);
  return j;
}

inline Stratum stratum_from_json(const nlohmann::json& j) {
  Stratum s;
  s.lower = j.at("lower").get<double>();
  s.upper = j.at("upper").get<double>();
  s.n = j.at("n").get<std::int64_t>();
  s.empty = j.at("empty").get<bool>();
  if (!j.at("accuracy").is_null()) s.accuracy = j.at("accuracy").get<double>();
  return s;
}

/// Bins are [e_i, e_{i+1}); the last bin also includes its upper edge.
/// Edges must increase strictly from 0 to 1.
inline std::vector<Stratum> stratify_by_mask_ratio(std::span<const StratifiedRecord> records,
                                                   std::span<const double> edges,
                                                   double threshold = 0.5) {
  if (edges.size() < 2) throw ParameterError("need at least two bin edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw ParameterError("bin edges must be strictly increasing");
    }
  }
  if (edges.front() != 0.0 || edges.back() != 1.0) {
    throw ParameterError("bin edges must cover [0,1]");
  }
  const std::size_t nb = edges.size() - 1;
  std::vector<std::vector<DetectionRecord>> buckets(nb);
  for (const auto& sr : records) {
    sr.record.validate();
    if (!(sr.mask_ratio >= 0.0 && sr.mask_ratio <= 1.0)) {
      throw ParameterError("mask ratio outside [0,1] for " + sr.record.item_id);
    }
    std::size_t b = static_cast<std::size_t>(
        std::upper_bound(edges.begin(), edges.end(), sr.mask_ratio) - edges.begin());
    b = b == 0 ? 0 : std::min(b - 1, nb - 1);
    buckets[b].push_back(sr.record);
  }
  std::vector<Stratum> out;
  for (std::size_t b = 0; b < nb; ++b) {
    Stratum s;
    s.lower = edges[b];
    s.upper = edges[b + 1];
    s.n = static_cast<std::int64_t>(buckets[b].size());
    s.empty = buckets[b].empty();
    if (!s.empty) {
      ClassificationReport tmp;
      detail::fill_threshold_metrics(tmp, detail::confusion(buckets[b], threshold));
      s.accuracy = tmp.accuracy;
      try {
        s.report = classification_metrics(buckets[b], threshold);
      } catch (const UndefinedError&) {
      }
    }
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------- manifest

/// Score manifest row: item_id,label,score[,mask_path][,saliency_path][,mask_ratio].
struct ManifestEntry {
  int line = 0;
  DetectionRecord record;
  std::optional<std::filesystem::path> mask_path;
  std::optional<std::filesystem::path> saliency_path;
  std::optional<double> mask_ratio;
};

inline std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

/// Parses and validates a score manifest. Row problems are collected and
/// reported together, each with its line number. Referenced files are not
/// opened here.
inline std::vector<ManifestEntry> parse_manifest(const CsvTable& table,
                                                 const std::filesystem::path& manifest_path) {
  const auto c_id = table.column("item_id");
  const auto c_label = table.column("label");
  const auto c_score = table.column("score");
  if (!c_id || !c_label || !c_score) {
    throw FormatError(manifest_path.string() +
                      ": missing header (need item_id,label,score)");
  }
  const auto c_mask = table.column("mask_path");
  const auto c_sal = table.column("saliency_path");
  const auto c_ratio = table.column("mask_ratio");

  std::vector<ManifestEntry> out;
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
    ManifestEntry e;
    e.line = row.line;
    e.record.item_id = row.fields[*c_id];
    if (e.record.item_id.empty()) {
      err("empty item_id");
      continue;
    }
    if (!seen.insert(e.record.item_id).second) {
      err("duplicate item_id '" + e.record.item_id + "'");
      continue;
    }
    const std::string& lab = row.fields[*c_label];
    if (lab == "0" || lab == "real") {
      e.record.label = Label::kReal;
    } else if (lab == "1" || lab == "fake") {
      e.record.label = Label::kFake;
    } else {
      err("label must be 0/1 (or real/fake), got '" + lab + "'");
      continue;
    }
    const auto score = parse_double(row.fields[*c_score]);
    if (!score) {
      err("score is not a number: '" + row.fields[*c_score] + "'");
      continue;
    }
    if (!(*score >= 0.0 && *score <= 1.0)) {
      err("score " + row.fields[*c_score] + " outside [0,1]");
      continue;
    }
    e.record.score = *score;
    if (c_mask && !row.fields[*c_mask].empty()) {
      e.mask_path = resolve_manifest_path(manifest_path, row.fields[*c_mask]);
    }
    if (c_sal && !row.fields[*c_sal].empty()) {
      e.saliency_path = resolve_manifest_path(manifest_path, row.fields[*c_sal]);
    }
    if (c_ratio && !row.fields[*c_ratio].empty()) {
      const auto r = parse_double(row.fields[*c_ratio]);
      if (!r || !(*r >= 0.0 && *r <= 1.0)) {
        err("mask_ratio must be a number in [0,1]");
        continue;
      }
      e.mask_ratio = *r;
    }
    out.push_back(std::move(e));
  }
  if (!errors.empty()) {
    std::string msg = manifest_path.string() + ": invalid rows";
    for (const auto& e : errors) msg += "\n  " + e;
    throw FormatError(msg);
  }
  return out;
}

inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_csv(path), path);
}

inline std::vector<DetectionRecord> records_of(std::span<const ManifestEntry> entries) {
  std::vector<DetectionRecord> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.record);
  return out;
}

}  // namespace inpx

#endif  // INPX_EVAL_HPP_
