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

// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "inpx/inpx.hpp"
#include "oracles.hpp"

namespace {

using namespace inpx;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome exchange_exactness() {
  std::mt19937_64 gen(7);
  const auto t0 = Clock::now();
  bool exact = true;
  for (int i = 0; i < 1000; ++i) {
    const auto orig = oracle::random_image(gen, 64, 64, 3);
    const auto fake = oracle::random_image(gen, 64, 64, 3);
    const auto mask = oracle::random_mask(gen, 64, 64, 0.05 + 0.9 * (i % 10) / 10.0);
    const auto d = diff_map(orig, exchange(orig, fake, mask));
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x)
        if (!mask.at(x, y) && d.at(x, y) != 0.0) exact = false;
  }
  const double secs = seconds_since(t0);
  return {exact && secs < 5.0, fmt("1000 triplets at 64x64, background exact=%g, %.2fs (<5s)",
                                   exact, secs)};
}

Outcome spectral_oracle() {
  std::mt19937_64 gen(7);
  const auto img = oracle::random_image(gen, 8, 8, 1);
  const auto fp = fingerprint(std::vector<RasterImage>{img}, std::nullopt);
  const Plane ref = oracle::fingerprint({img.channel(0)});
  double max_err = 0.0;
  for (int y = 0; y < ref.height(); ++y)
    for (int x = 0; x < ref.width(); ++x)
      max_err = std::max(max_err, std::abs(fp.magnitude.at(x, y) - ref.at(x, y)));
  Plane constant(8, 8, 0.4), ramp(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) ramp.at(x, y) = (3 * x + 5 * y + 8) / 64.0;
  double cd_max = 0.0;
  for (const Plane* p : {&constant, &ramp}) {
    const Plane cd = cross_difference(*p);
    for (double v : cd.values()) cd_max = std::max(cd_max, v);
  }
  return {max_err <= 1e-6 && cd_max == 0.0,
          fmt("max |fingerprint - naive DFT| = %.3g (<=1e-6), max cross diff = %.3g",
              max_err, cd_max)};
}

Outcome contraction() {
  const auto t0 = Clock::now();
  const NoisyImageModel model{128, 0.05, RngSeed{7}, SemanticBase::kSmooth};
  const auto rep = check_variance_contraction(model, {8, BottleneckMode::kBox}, 32,
                                              {16, 0.5, default_jobs()});
  const double secs = seconds_since(t0);
  const double ratio = rep.metrics["mean_high_ratio"].get<double>();
  return {rep.flags.at("high_band_contracted") && ratio < 0.5 && secs < 10.0,
          fmt("all high bins contracted=%g, mean high ratio %.4f (<0.5), %.2fs (<10s)",
              rep.flags.at("high_band_contracted"), ratio, secs)};
}

Outcome wavelet() {
  const NoisyImageModel white{128, 0.1, RngSeed{7}, SemanticBase::kFlat};
  const auto box = check_wavelet_decay(white, {4, BottleneckMode::kBox}, 8, {default_jobs()});
  const auto ideal =
      check_wavelet_decay(white, {4, BottleneckMode::kIdealLowpass}, 8, {default_jobs()});
  const bool near = box.flags.at("near_fine_ratios_at_most_cutoff_ratio");
  const double fine = ideal.metrics["max_fine_output_energy"].get<double>();
  return {near && ideal.flags.at("ideal_fine_energy_zero") && fine == 0.0,
          fmt("box r=4: ratios at j_c+1, j_c+2 <= ratio at j_c: %g; ideal fine energy = %g",
              near, fine)};
}

struct GapResult {
  TheoremReport rep;
  double secs = 0.0;
};

const GapResult& gap_run() {
  static const GapResult g = [] {
    const auto t0 = Clock::now();
    GapOptions opt;
    opt.jobs = default_jobs();
    GapResult r{detectability_gap_demo(NoisyImageModel{128, 0.05, RngSeed{7}},
                                       {8, BottleneckMode::kBox}, 0.1, 100, opt)};
    r.secs = seconds_since(t0);
    return r;
  }();
  return g;
}

Outcome gap() {
  const auto& g = gap_run();
  const double s = g.rep.metrics["auc_standard"], e = g.rep.metrics["auc_exchanged"];
  return {s - e >= 0.25 && e <= 0.65 && g.secs < 60.0,
          fmt("AUC std %.4f, AUC ex %.4f (gap >=0.25, ex <=0.65), %.2fs (<60s)", s, e, g.secs)};
}

Outcome metric_oracles() {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> level(0, 10);
  double worst = 0.0;
  bool counts = true;
  for (int t = 0; t < 20; ++t) {
    std::vector<DetectionRecord> recs;
    for (int i = 0; i < 10; ++i)
      recs.push_back({"r" + std::to_string(i), i % 2 ? Label::kFake : Label::kReal,
                      level(gen) / 10.0});
    const auto rep = classification_metrics(recs, 0.5);
    worst = std::max(worst, std::abs(rep.auc - oracle::auc_all_pairs(recs)));
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (const auto& r : recs) {
      const bool fake = r.label == Label::kFake;
      if (r.score >= 0.5) fake ? ++tp : ++fp;
      else fake ? ++fn : ++tn;
    }
    counts = counts && rep.tp == tp && rep.fp == fp && rep.tn == tn && rep.fn == fn;
    worst = std::max(worst, std::abs(rep.accuracy - (tp + tn) / 10.0));
  }
  std::uniform_int_distribution<int> slevel(0, 5);
  std::bernoulli_distribution on(0.4);
  int ap_cases = 0;
  while (ap_cases < 20) {
    Plane sal(4, 4);
    BinaryMask mask(4, 4);
    std::vector<std::uint8_t> labels;
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) {
        sal.at(x, y) = slevel(gen) / 5.0;
        mask.set(x, y, on(gen));
        labels.push_back(mask.at(x, y));
      }
    if (mask.count() == 0) continue;
    const std::vector<LocalizationItem> items = {{"m", SaliencyMap(sal), mask}};
    const auto rep = localization_metrics(items, {std::nullopt, 0.5});
    const auto v = sal.values();
    worst = std::max(worst, std::abs(*rep.map - oracle::ap_sweep({v.begin(), v.end()}, labels)));
    ++ap_cases;
  }
  return {counts && worst <= 1e-9,
          fmt("20 record sets + 20 4x4 maps, confusion match=%g, max deviation %.3g (<=1e-9)",
              counts, worst)};
}

Outcome correlation_oracles() {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(10), y(10);
    for (int i = 0; i < 10; ++i) {
      x[i] = nd(gen);
      y[i] = 0.5 * x[i] + nd(gen);
    }
    worst = std::max(worst, std::abs(pearson(x, y) - oracle::pearson(x, y)));
    worst = std::max(worst, std::abs(spearman(x, y) - oracle::spearman(x, y)));
  }
  std::uniform_int_distribution<int> d(-20, 20);
  bool invariant = true;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(10), y(10), fx(10), gy(10);
    for (int i = 0; i < 10; ++i) {
      x[i] = d(gen);
      y[i] = d(gen);
      fx[i] = x[i] * x[i] * x[i] + 7;
      gy[i] = std::exp(y[i] / 5.0);
    }
    try {
      invariant = invariant && spearman(x, y) == spearman(fx, gy);
    } catch (const UndefinedError&) {
    }
  }
  return {worst <= 1e-9 && invariant,
          fmt("max deviation %.3g (<=1e-9), Spearman monotone invariance exact=%g", worst,
              invariant)};
}

Outcome trend() {
  TrendOptions opt;
  opt.jobs = default_jobs();
  const auto rep = mask_ratio_trend(NoisyImageModel{128, 0.05, RngSeed{7}},
                                    {8, BottleneckMode::kBox}, 300, opt);
  std::string acc;
  for (const auto& s : rep.metrics["strata"]) {
    if (s["accuracy"].is_null()) continue;
    acc += (acc.empty() ? "" : ", ") + fmt("%.3f", s["accuracy"].get<double>());
  }
  return {rep.flags.at("accuracy_nondecreasing"),
          "exchanged-corpus accuracy by mask-ratio bin [" + acc + "] non-decreasing"};
}

Outcome corruption_determinism() {
  std::mt19937_64 gen(7);
  const auto img = oracle::random_image(gen, 96, 64, 3);
  const auto l1 = light_spot_random(img, 30, 1.5, RngSeed{7}).first.to_bytes();
  const auto l2 = light_spot_random(img, 30, 1.5, RngSeed{7}).first.to_bytes();
  const auto j1 = encode_jpeg(img, 80), j2 = encode_jpeg(img, 80);
  const auto d1 = jpeg_compress(img, 80).to_bytes(), d2 = jpeg_compress(img, 80).to_bytes();
  bool constant = true;
  for (double level : {0.0, from_u8(77), 1.0}) {
    const RasterImage c(33, 17, 3, level);
    for (double sigma : {0.5, 1.0, 2.5}) constant = constant && gaussian_blur(c, sigma) == c;
  }
  const bool same = l1 == l2 && j1 == j2 && d1 == d2;
  return {same && constant,
          fmt("light/jpeg byte-identical=%g, blur preserves constants=%g", same, constant)};
}

Outcome spectral_mse_ordering() {
  const auto& g = gap_run();
  const double s = g.rep.metrics["spectral_mse_standard"];
  const double e = g.rep.metrics["spectral_mse_exchanged"];
  return {s > 0.0 && s >= 5.0 * e,
          fmt("spectral MSE std %.4g vs ex %.4g, ratio %.2f (>=5)", s, e, e > 0 ? s / e : 0.0)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exchange exactness", exchange_exactness},
      {"spectral pipeline oracle", spectral_oracle},
      {"variance contraction", contraction},
      {"wavelet decay", wavelet},
      {"detectability gap", gap},
      {"metric oracles", metric_oracles},
      {"correlation oracles", correlation_oracles},
      {"mask-ratio trend", trend},
      {"corruption determinism", corruption_determinism},
      {"spectral-MSE ordering", spectral_mse_ordering},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
