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

// Pearson / Spearman correlation between reconstruction error, inpainting
// difference and high-frequency content, at image and pixel level.

#ifndef INPX_STATS_HPP_
#define INPX_STATS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "inpx/error.hpp"
#include "inpx/exchange.hpp"
#include "inpx/image.hpp"
#include "inpx/spectra.hpp"

namespace inpx {

/// Sample Pearson correlation. Throws UndefinedError when either input has
/// zero variance.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("pearson: length mismatch");
  if (x.size() < 2) throw ParameterError("pearson: need at least 2 samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
  };
  if (sxx <= 0.0 || syy <= 0.0 || constant(x) || constant(y)) {
    throw UndefinedError("pearson: correlation undefined for constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of i+1..j
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("spearman: length mismatch");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

// ---------------------------------------------------------------- signals

/// The three signals compared by the reconstruction-artifact analysis.
enum class Signal { kVaeLoss, kInpaintDiff, kHighFreq };

enum class SignalPair { kVaeInpaint, kVaeHighFreq, kInpaintHighFreq };

inline constexpr std::array<SignalPair, 3> kSignalPairs = {
    SignalPair::kVaeInpaint, SignalPair::kVaeHighFreq,
    SignalPair::kInpaintHighFreq};

inline const char* pair_name(SignalPair p) {
  switch (p) {
    case SignalPair::kVaeInpaint: return "vae_inpaint";
    case SignalPair::kVaeHighFreq: return "vae_highfreq";
    case SignalPair::kInpaintHighFreq: return "inpaint_highfreq";
  }
  return "?";
}

/// Image-level means of the three signals.
struct SignalSample {
  double vae_loss = 0.0;
  double inpaint_diff = 0.0;
  double high_freq = 0.0;
};

/// Aligned per-pixel maps of the three signals for one image. The optional
/// edit mask enables background-only analysis.
struct SignalMaps {
  Plane vae_loss;
  Plane inpaint_diff;
  Plane high_freq;
  std::optional<BinaryMask> edit_mask;

  void validate() const {
    if (!vae_loss.same_shape(inpaint_diff) || !vae_loss.same_shape(high_freq)) {
      throw DimensionError("signal maps differ in shape");
    }
    if (edit_mask) detail::require_same_extent(vae_loss, *edit_mask, "signal mask");
  }

  SignalSample means() const {
    auto mean = [](const Plane& p) {
      return std::accumulate(p.values().begin(), p.values().end(), 0.0) /
             static_cast<double>(p.pixel_count());
    };
    return {mean(vae_loss), mean(inpaint_diff), mean(high_freq)};
  }
};

/// Builds the signal maps from an original x, its standard inpainting x~
/// and its pure reconstruction T(x):
///   vae_loss = |x - T(x)|, inpaint_diff = |x~ - x| (channel means),
///   high_freq = cross difference of the luma of x.
/// All maps are cropped to the (W-1) x (H-1) cross-difference grid.
inline SignalMaps make_signal_maps(const RasterImage& original,
                                   const RasterImage& inpainted,
                                   const RasterImage& reconstructed,
                                   std::optional<BinaryMask> edit_mask = std::nullopt) {
  auto crop = [](const Plane& p) {
    Plane out(p.width() - 1, p.height() - 1);
    for (int y = 0; y < out.height(); ++y)
      for (int x = 0; x < out.width(); ++x) out.at(x, y) = p.at(x, y);
    return out;
  };
  SignalMaps maps;
  maps.vae_loss = crop(diff_map(original, reconstructed).plane());
  maps.inpaint_diff = crop(diff_map(inpainted, original).plane());
  maps.high_freq = cross_difference(to_luma(original));
  if (edit_mask) {
    detail::require_same_extent(original, *edit_mask, "signal mask");
    BinaryMask m(maps.vae_loss.width(), maps.vae_loss.height());
    for (int y = 0; y < m.height(); ++y)
      for (int x = 0; x < m.width(); ++x) m.set(x, y, edit_mask->at(x, y));
    maps.edit_mask = std::move(m);
  }
  return maps;
}

// ---------------------------------------------------------------- reports

/// Streaming mean / population standard deviation.
struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  void merge(const Moments& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
  }
  std::optional<double> mean() const {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  }
  std::optional<double> stddev() const {
    if (count == 0) return std::nullopt;
    const double m = sum / static_cast<double>(count);
    return std::sqrt(std::max(0.0, sum_sq / static_cast<double>(count) - m * m));
  }
};

struct PairCorrelation {
  SignalPair pair = SignalPair::kVaeInpaint;
  std::optional<double> pearson;
  std::optional<double> spearman;
  // Pixel level only: spread across images.
  std::optional<double> pearson_std;
  std::optional<double> spearman_std;
  std::int64_t n = 0;        // images (pixel level) or samples (image level)
  std::int64_t skipped = 0;  // degenerate images left out
};

enum class CorrelationLevel { kImage, kPixel };
enum class Region { kFull, kBackground };

struct CorrelationReport {
  CorrelationLevel level = CorrelationLevel::kImage;
  Region region = Region::kFull;
  std::int64_t n = 0;
  std::array<PairCorrelation, 3> pairs{};

  const PairCorrelation& get(SignalPair p) const {
    return pairs[static_cast<std::size_t>(p)];
  }
};

inline nlohmann::json to_json(const CorrelationReport& r) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json pairs = nlohmann::json::object();
  for (const auto& p : r.pairs) {
    nlohmann::json j = {{"pearson", opt(p.pearson)},
                        {"spearman", opt(p.spearman)},
                        {"n", p.n},
                        {"skipped", p.skipped}};
    if (r.level == CorrelationLevel::kPixel) {
      j["pearson_std"] = opt(p.pearson_std);
      j["spearman_std"] = opt(p.spearman_std);
    }
    pairs[pair_name(p.pair)] = j;
  }
  return {{"level", r.level == CorrelationLevel::kImage ? "image" : "pixel"},
          {"region", r.region == Region::kFull ? "full" : "background"},
          {"n", r.n},
          {"pairs", pairs}};
}

inline CorrelationReport correlation_report_from_json(const nlohmann::json& j) {
  auto opt = [](const nlohmann::json& v) -> std::optional<double> {
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
  };
  try {
    CorrelationReport r;
    r.level = j.at("level").get<std::string>() == "image" ? CorrelationLevel::kImage
                                                           : CorrelationLevel::kPixel;
    r.region = j.at("region").get<std::string>() == "full" ? Region::kFull
                                                            : Region::kBackground;
    r.n = j.at("n").get<std::int64_t>();
    for (SignalPair p : kSignalPairs) {
      const auto& e = j.at("pairs").at(pair_name(p));
      auto& out = r.pairs[static_cast<std::size_t>(p)];
      out.pair = p;
      out.pearson = opt(e.at("pearson"));
      out.spearman = opt(e.at("spearman"));
      out.n = e.at("n").get<std::int64_t>();
      out.skipped = e.at("skipped").get<std::int64_t>();
      if (e.contains("pearson_std")) out.pearson_std = opt(e.at("pearson_std"));
      if (e.contains("spearman_std")) out.spearman_std = opt(e.at("spearman_std"));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("correlation report json: ") + e.what());
  }
}

namespace detail {

inline std::pair<Signal, Signal> pair_signals(SignalPair p) {
  switch (p) {
    case SignalPair::kVaeInpaint: return {Signal::kVaeLoss, Signal::kInpaintDiff};
    case SignalPair::kVaeHighFreq: return {Signal::kVaeLoss, Signal::kHighFreq};
    case SignalPair::kInpaintHighFreq: return {Signal::kInpaintDiff, Signal::kHighFreq};
  }
  return {Signal::kVaeLoss, Signal::kVaeLoss};
}

inline double pick(const SignalSample& s, Signal which) {
  switch (which) {
    case Signal::kVaeLoss: return s.vae_loss;
    case Signal::kInpaintDiff: return s.inpaint_diff;
    case Signal::kHighFreq: return s.high_freq;
  }
  return 0.0;
}

inline const Plane& pick(const SignalMaps& m, Signal which) {
  switch (which) {
    case Signal::kVaeLoss: return m.vae_loss;
    case Signal::kInpaintDiff: return m.inpaint_diff;
    case Signal::kHighFreq: return m.high_freq;
  }
  return m.vae_loss;
}

}  // namespace detail

/// Pearson and Spearman of each signal pair over per-image means.
inline CorrelationReport image_level_correlations(std::span<const SignalSample> samples) {
  if (samples.size() < 3) {
    throw ParameterError("image-level correlation needs at least 3 images");
  }
  CorrelationReport report;
  report.level = CorrelationLevel::kImage;
  report.n = static_cast<std::int64_t>(samples.size());
  for (SignalPair p : kSignalPairs) {
    const auto [a, b] = detail::pair_signals(p);
    std::vector<double> xs, ys;
    for (const auto& s : samples) {
      xs.push_back(detail::pick(s, a));
      ys.push_back(detail::pick(s, b));
    }
    auto& out = report.pairs[static_cast<std::size_t>(p)];
    out.pair = p;
    out.n = report.n;
    try {
      out.pearson = pearson(xs, ys);
      out.spearman = spearman(xs, ys);
    } catch (const UndefinedError&) {
      out.skipped = report.n;
    }
  }
  return report;
}

/// Minimum number of pixels an image must contribute to a pixel-level
/// correlation.
inline constexpr std::size_t kMinPixelsPerImage = 16;

/// Per-image correlations over pixels, summarized as mean +- std across
/// images. Images whose selected pixels are too few or constant in either
/// signal are skipped and counted.
inline CorrelationReport pixel_level_correlations(std::span<const SignalMaps> images,
                                                  Region region = Region::kFull) {
  CorrelationReport report;
  report.level = CorrelationLevel::kPixel;
  report.region = region;
  report.n = static_cast<std::int64_t>(images.size());
  std::array<Moments, 3> pm{}, sm{};
  std::array<std::int64_t, 3> skipped{};
  for (const SignalMaps& maps : images) {
    maps.validate();
    if (region == Region::kBackground && !maps.edit_mask) {
      throw ParameterError("background region requested but no mask supplied");
    }
    for (SignalPair p : kSignalPairs) {
      const auto idx = static_cast<std::size_t>(p);
      const auto [a, b] = detail::pair_signals(p);
      const Plane& pa = detail::pick(maps, a);
      const Plane& pb = detail::pick(maps, b);
      std::vector<double> xs, ys;
      xs.reserve(pa.pixel_count());
      ys.reserve(pa.pixel_count());
      for (int y = 0; y < pa.height(); ++y) {
        for (int x = 0; x < pa.width(); ++x) {
          if (region == Region::kBackground && maps.edit_mask->at(x, y)) continue;
          xs.push_back(pa.at(x, y));
          ys.push_back(pb.at(x, y));
        }
      }
      if (xs.size() < kMinPixelsPerImage) {
        ++skipped[idx];
        continue;
      }
      try {
        const double r = pearson(xs, ys);
        const double rho = spearman(xs, ys);
        pm[idx].add(r);
        sm[idx].add(rho);
      } catch (const UndefinedError&) {
        ++skipped[idx];
      }
    }
  }
  for (SignalPair p : kSignalPairs) {
    const auto idx = static_cast<std::size_t>(p);
    auto& out = report.pairs[idx];
    out.pair = p;
    out.pearson = pm[idx].mean();
    out.pearson_std = pm[idx].stddev();
    out.spearman = sm[idx].mean();
    out.spearman_std = sm[idx].stddev();
    out.n = pm[idx].count;
    out.skipped = skipped[idx];
  }
  return report;
}

}  // namespace inpx

#endif  // INPX_STATS_HPP_
