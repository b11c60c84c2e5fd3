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

// Simulated encode/decode bottleneck and the checks run against it.
//
// The bottleneck T maps an N x N plane through a grid r times coarser:
//   box:    block means on the coarse grid, bilinear back up;
//   ideal:  zero every Fourier bin with radial frequency above 0.5 / r.
// The wavelet check uses the Haar form of the ideal filter instead
// (block mean replicated over each r x r block), which removes exactly
// the detail subbands finer than the coarse grid.
//
// Synthetic images are x = clamp(s + n) with s a few low-frequency
// cosines plus a gradient and n white Gaussian noise.

#ifndef INPX_THEORY_HPP_
#define INPX_THEORY_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "inpx/error.hpp"
#include "inpx/eval.hpp"
#include "inpx/exchange.hpp"
#include "inpx/fft.hpp"
#include "inpx/filter.hpp"
#include "inpx/image.hpp"
#include "inpx/parallel.hpp"
#include "inpx/rng.hpp"
#include "inpx/spectra.hpp"
#include "inpx/stats.hpp"

namespace inpx {

// ---------------------------------------------------------------- bottleneck

enum class BottleneckMode { kBox, kIdealLowpass };

inline const char* mode_name(BottleneckMode m) {
  return m == BottleneckMode::kBox ? "box" : "ideal-lowpass";
}

inline BottleneckMode parse_mode(const std::string& s) {
  if (s == "box") return BottleneckMode::kBox;
  if (s == "ideal-lowpass" || s == "ideal") return BottleneckMode::kIdealLowpass;
  throw ParameterError("unknown bottleneck mode '" + s + "'");
}

struct BottleneckSim {
  int factor = 8;
  BottleneckMode mode = BottleneckMode::kBox;

  void validate() const {
    if (factor != 2 && factor != 4 && factor != 8 && factor != 16) {
      throw ParameterError("bottleneck factor must be one of 2, 4, 8, 16");
    }
  }

  int factor_log2() const { return std::countr_zero(static_cast<unsigned>(factor)); }

  nlohmann::json to_json() const { return {{"factor", factor}, {"mode", mode_name(mode)}}; }
};

namespace detail {

inline void check_divisible(int width, int height, int factor) {
  if (width % factor != 0 || height % factor != 0) {
    throw DimensionError("image " + std::to_string(width) + "x" + std::to_string(height) +
                         " is not divisible by bottleneck factor " +
                         std::to_string(factor));
  }
}

// Block means, accumulated as deviations from the block's first sample.
inline Plane block_means(const Plane& src, int r) {
  Plane out(src.width() / r, src.height() / r);
  const double inv = 1.0 / static_cast<double>(r * r);
  for (int by = 0; by < out.height(); ++by) {
    for (int bx = 0; bx < out.width(); ++bx) {
      const double c = src.at(bx * r, by * r);
      double acc = 0.0;
      for (int y = 0; y < r; ++y)
        for (int x = 0; x < r; ++x) acc += src.at(bx * r + x, by * r + y) - c;
      out.at(bx, by) = c + acc * inv;
    }
  }
  return out;
}

}  // namespace detail

/// Haar projection onto the coarse grid: every r x r block is replaced by
/// its mean.
inline Plane haar_lowpass(const Plane& src, int factor) {
  detail::check_divisible(src.width(), src.height(), factor);
  const Plane means = detail::block_means(src, factor);
  Plane out(src.width(), src.height());
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) out.at(x, y) = means.at(x / factor, y / factor);
  return out;
}

/// Radial brick-wall filter keeping |f| <= 0.5 / factor.
inline Plane ideal_lowpass(const Plane& src, int factor) {
  Spectrum s = fft2d(src);
  const double cutoff = 0.5 / factor;
  for (int v = 0; v < s.height; ++v) {
    const double fy = bin_frequency(v, s.height);
    for (int u = 0; u < s.width; ++u) {
      if (std::hypot(bin_frequency(u, s.width), fy) > cutoff + 1e-12) s.at(u, v) = 0.0;
    }
  }
  return ifft2d_real(std::move(s));
}

/// T applied to an unbounded plane; no clamping.
inline Plane reconstruct(const Plane& src, const BottleneckSim& sim) {
  sim.validate();
  detail::check_divisible(src.width(), src.height(), sim.factor);
  if (sim.mode == BottleneckMode::kIdealLowpass) return ideal_lowpass(src, sim.factor);
  return resize_bilinear(detail::block_means(src, sim.factor), src.width(), src.height());
}

/// T applied per channel, clamped back to [0,1].
inline RasterImage bottleneck_reconstruct(const RasterImage& img, const BottleneckSim& sim) {
  std::vector<Plane> planes;
  for (const Plane& p : img.planes()) planes.push_back(reconstruct(p, sim));
  return RasterImage::from_planes(planes);
}

// ---------------------------------------------------------------- image model

enum class SemanticBase { kSmooth, kFlat };

/// Seed streams, so each corpus role draws independent images.
enum class SimStream : std::uint64_t {
  kReal = 1,
  kFake = 2,
  kMask = 3,
  kCalibration = 4,
  kSignal = 5,
};

struct NoisyImageModel {
  int size = 128;
  double sigma_n = 0.05;
  RngSeed seed{7};
  SemanticBase base = SemanticBase::kSmooth;

  void validate() const {
    if (size < 2) throw ParameterError("model image size must be >= 2");
    if (!(sigma_n >= 0.0)) throw ParameterError("noise sigma must be >= 0");
  }

  nlohmann::json to_json() const {
    return {{"size", size},
            {"sigma_n", sigma_n},
            {"seed", seed.value},
            {"base", base == SemanticBase::kSmooth ? "smooth" : "flat"}};
  }

  /// Smooth semantic image: 0.5 + 3..5 cosines of integer frequency 0..3
  /// cycles per side + a linear gradient.
  Plane semantic(Rng& rng) const {
    Plane s(size, size, 0.5);
    if (base == SemanticBase::kFlat) return s;
    const int terms = rng.integer(3, 5);
    struct Wave {
      int fx, fy;
      double amp, phase;
    };
    std::vector<Wave> waves;
    for (int t = 0; t < terms; ++t) {
      Wave w{rng.integer(0, 3), rng.integer(0, 3), 0.0, 0.0};
      if (w.fx == 0 && w.fy == 0) w.fy = 1;
      w.amp = rng.uniform(0.03, 0.1);
      w.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      waves.push_back(w);
    }
    const double gx = rng.uniform(-0.1, 0.1);
    const double gy = rng.uniform(-0.1, 0.1);
    const double n = static_cast<double>(size);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const double u = x / n, v = y / n;
        double val = 0.5 + gx * (u - 0.5) + gy * (v - 0.5);
        for (const Wave& w : waves) {
          val += w.amp * std::cos(2.0 * std::numbers::pi * (w.fx * u + w.fy * v) + w.phase);
        }
        s.at(x, y) = val;
      }
    }
    return s;
  }

  /// Image `index` of `stream` with noise amplitude `sigma`.
  Plane draw(SimStream stream, std::uint64_t index, double sigma) const {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(stream), index));
    Plane x = semantic(rng);
    for (double& v : x.values()) {
      const double noise = sigma > 0.0 ? sigma * rng.normal() : 0.0;
      v = std::clamp(v + noise, 0.0, 1.0);
    }
    return x;
  }

  Plane draw(SimStream stream, std::uint64_t index) const {
    return draw(stream, index, sigma_n);
  }
};

// ---------------------------------------------------------------- reports

struct BandRow {
  std::string kind;  // "radial" or "scale"
  int index = 0;     // radial bin or Haar scale j
  double lower = 0.0, upper = 0.0;  // radial band edges; unused for scales
  double input = 0.0;
  double output = 0.0;
  std::optional<double> ratio;  // output / input when input is non-negligible
  std::optional<bool> pass;     // set on rows an inequality is asserted for
};

struct TheoremReport {
  std::string check;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<BandRow> rows;
  std::map<std::string, bool> flags;
  nlohmann::json metrics = nlohmann::json::object();

  bool passed() const {
    return std::all_of(flags.begin(), flags.end(), [](const auto& f) { return f.second; });
  }

  nlohmann::json to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const BandRow& r : rows) {
      nlohmann::json j = {{"kind", r.kind}, {"index", r.index},
                          {"input", r.input}, {"output", r.output}};
      if (r.kind == "radial") {
        j["lower"] = r.lower;
        j["upper"] = r.upper;
      }
      j["ratio"] = r.ratio ? nlohmann::json(*r.ratio) : nlohmann::json(nullptr);
      j["pass"] = r.pass ? nlohmann::json(*r.pass) : nlohmann::json(nullptr);
      rows_json.push_back(std::move(j));
    }
    return {{"check", check}, {"parameters", parameters}, {"rows", rows_json},
            {"flags", flags}, {"metrics", metrics}, {"passed", passed()}};
  }
};

namespace detail {

inline constexpr double kRelTolerance = 1e-9;
inline constexpr double kFloorScale = 1e-15;  // of the input's total power
inline constexpr double kZeroScale = 1e-20;   // "exactly zero" after FFT round-off

inline bool not_above(double out, double in, double floor) {
  return out <= in * (1.0 + kRelTolerance) + floor;
}

inline std::optional<double> safe_ratio(double out, double in, double floor) {
  if (in > floor) return out / in;
  return std::nullopt;
}

inline nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace detail

// ---------------------------------------------------------------- contraction

struct ContractionOptions {
  int n_bins = 16;
  double ratio_threshold = 0.5;  // from pilot runs at sigma_n = 0.05, r = 8
  int jobs = 1;
};

/// Mean radial power of x and T(x) over `n_images` draws; asserts
/// S_T(x) <= S_x in every radial bin above kHighBandCutoff.
inline TheoremReport check_variance_contraction(const NoisyImageModel& model,
                                                const BottleneckSim& sim, int n_images,
                                                const ContractionOptions& opt = {}) {
  model.validate();
  sim.validate();
  if (n_images < 8) throw ParameterError("contraction check needs n_images >= 8");
  detail::check_divisible(model.size, model.size, sim.factor);

  std::vector<RadialPSD> in_psd(n_images), out_psd(n_images);
  parallel_for(static_cast<std::size_t>(n_images), opt.jobs, [&](std::size_t i) {
    const Plane x = model.draw(SimStream::kReal, i);
    in_psd[i] = radial_psd(x, opt.n_bins);
    out_psd[i] = radial_psd(reconstruct(x, sim), opt.n_bins);
  });
  std::vector<double> in(opt.n_bins, 0.0), out(opt.n_bins, 0.0);
  for (int i = 0; i < n_images; ++i) {
    for (int b = 0; b < opt.n_bins; ++b) {
      in[b] += in_psd[i].power[b] / n_images;
      out[b] += out_psd[i].power[b] / n_images;
    }
  }
  double total_in = 0.0;
  for (double v : in) total_in += v;
  const double floor = detail::kFloorScale * total_in;
  const auto high = in_psd.front().bins_above(kHighBandCutoff);
  const auto& edges = in_psd.front().edges;

  TheoremReport rep;
  rep.check = "contraction";
  rep.parameters = {{"model", model.to_json()}, {"sim", sim.to_json()},
                    {"n_images", n_images}, {"n_bins", opt.n_bins},
                    {"high_band_cutoff", kHighBandCutoff},
                    {"ratio_threshold", opt.ratio_threshold}};
  bool contracted = true, ideal_zero = true;
  double ratio_sum = 0.0, max_high_out = 0.0;
  int ratio_n = 0;
  for (int b = 0; b < opt.n_bins; ++b) {
    BandRow row{"radial", b, edges[b], edges[b + 1], in[b], out[b],
                detail::safe_ratio(out[b], in[b], floor), std::nullopt};
    if (std::find(high.begin(), high.end(), static_cast<std::size_t>(b)) != high.end()) {
      row.pass = detail::not_above(out[b], in[b], floor);
      contracted = contracted && *row.pass;
      if (row.ratio) {
        ratio_sum += *row.ratio;
        ++ratio_n;
      }
      max_high_out = std::max(max_high_out, out[b]);
      ideal_zero = ideal_zero && out[b] <= detail::kZeroScale * total_in;
    }
    rep.rows.push_back(row);
  }
  const bool has_ratio = ratio_n > 0;
  const double mean_ratio = has_ratio ? ratio_sum / ratio_n : 0.0;
  rep.flags["high_band_contracted"] = contracted;
  rep.flags["mean_high_ratio_below_threshold"] =
      !has_ratio || mean_ratio < opt.ratio_threshold;
  if (sim.mode == BottleneckMode::kIdealLowpass && 0.5 / sim.factor <= kHighBandCutoff) {
    rep.flags["ideal_high_band_zero"] = ideal_zero;
  }
  rep.metrics = {{"mean_high_ratio", has_ratio ? nlohmann::json(mean_ratio) : nlohmann::json(nullptr)},
                 {"max_high_output_power", max_high_out},
                 {"high_bins", high.size()},
                 {"input_total_power", total_in}};
  return rep;
}

// ---------------------------------------------------------------- wavelets

struct WaveletOptions {
  int jobs = 1;
};

/// Haar detail energies of x and T(x), scale j = k - level + 1 for a
/// 2^k image, cutoff scale j_c = k - log2 r. Box mode uses the Fourier-free
/// box bottleneck; ideal mode uses haar_lowpass.
inline TheoremReport check_wavelet_decay(const NoisyImageModel& model,
                                         const BottleneckSim& sim, int n_images,
                                         const WaveletOptions& opt = {}) {
  model.validate();
  sim.validate();
  if (n_images < 1) throw ParameterError("wavelet check needs n_images >= 1");
  if (!is_power_of_two(model.size)) {
    throw DimensionError("wavelet check needs a power-of-two image side");
  }
  const int k = std::countr_zero(static_cast<unsigned>(model.size));
  if (k <= sim.factor_log2() + 2) {
    throw DimensionError("image side 2^" + std::to_string(k) +
                         " is too shallow for factor " + std::to_string(sim.factor) +
                         " (need k > log2 r + 2)");
  }
  const int jc = k - sim.factor_log2();

  std::vector<WaveletEnergyProfile> in_prof(n_images), out_prof(n_images);
  parallel_for(static_cast<std::size_t>(n_images), opt.jobs, [&](std::size_t i) {
    const Plane x = model.draw(SimStream::kReal, i);
    const Plane t = sim.mode == BottleneckMode::kBox ? reconstruct(x, sim)
                                                     : haar_lowpass(x, sim.factor);
    in_prof[i] = haar_energies(x, k);
    out_prof[i] = haar_energies(t, k);
  });
  std::vector<double> in(k, 0.0), out(k, 0.0);  // by level - 1
  double total_in = 0.0;
  for (int i = 0; i < n_images; ++i) {
    for (int l = 0; l < k; ++l) {
      in[l] += in_prof[i].levels[l].energy / n_images;
      out[l] += out_prof[i].levels[l].energy / n_images;
    }
    total_in += in_prof[i].total() / n_images;
  }
  const double floor = detail::kFloorScale * total_in;

  TheoremReport rep;
  rep.check = "wavelet";
  rep.parameters = {{"model", model.to_json()}, {"sim", sim.to_json()},
                    {"n_images", n_images}, {"size_log2", k}, {"cutoff_scale", jc}};
  std::map<int, std::optional<double>> ratio_at;
  bool attenuated = true, ideal_zero = true;
  double max_fine_out = 0.0;
  for (int l = 0; l < k; ++l) {
    const int j = k - l;
    BandRow row{"scale", j, 0.0, 0.0, in[l], out[l],
                detail::safe_ratio(out[l], in[l], floor), std::nullopt};
    ratio_at[j] = row.ratio;
    if (j > jc) {
      row.pass = detail::not_above(out[l], in[l], floor);
      attenuated = attenuated && *row.pass;
      max_fine_out = std::max(max_fine_out, out[l]);
      ideal_zero = ideal_zero && out[l] == 0.0;
    }
    rep.rows.push_back(row);
  }
  bool monotone = true;
  for (int j = jc; j < k; ++j) {
    if (ratio_at[j] && ratio_at[j + 1]) {
      monotone = monotone && *ratio_at[j + 1] <= *ratio_at[j] + detail::kRelTolerance;
    }
  }
  bool near_fine = true;
  for (int j = jc + 1; j <= std::min(k, jc + 2); ++j) {
    if (ratio_at[jc] && ratio_at[j]) {
      near_fine = near_fine && *ratio_at[j] <= *ratio_at[jc] + detail::kRelTolerance;
    }
  }
  rep.flags["fine_scales_attenuated"] = attenuated;
  rep.flags["ratio_nonincreasing_past_cutoff"] = monotone;
  rep.flags["near_fine_ratios_at_most_cutoff_ratio"] = near_fine;
  if (sim.mode == BottleneckMode::kIdealLowpass) {
    rep.flags["ideal_fine_energy_zero"] = ideal_zero;
  }

  // Least-squares slope of ln(ratio) against j over j >= j_c.
  std::vector<std::pair<double, double>> pts;
  for (int j = jc; j <= k; ++j) {
    if (ratio_at[j] && *ratio_at[j] > 0.0) pts.emplace_back(j, std::log(*ratio_at[j]));
  }
  std::optional<double> slope;
  if (pts.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (auto [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= pts.size();
    my /= pts.size();
    double sxy = 0.0, sxx = 0.0;
    for (auto [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    slope = sxy / sxx;
  }
  rep.metrics = {{"cutoff_scale", jc},
                 {"fitted_log_ratio_slope", detail::opt_json(slope)},
                 {"predicted_log_ratio_slope", -std::log(4.0)},
                 {"max_fine_output_energy", max_fine_out}};
  return rep;
}

// ---------------------------------------------------------------- detector

/// Fraction of non-DC spectral power at radial frequency >= kHighBandCutoff.
inline double high_band_fraction(const Plane& img) {
  const Spectrum s = fft2d(img);
  double high = 0.0, total = 0.0;
  for (int v = 0; v < s.height; ++v) {
    const double fy = bin_frequency(v, s.height);
    for (int u = 0; u < s.width; ++u) {
      if (u == 0 && v == 0) continue;
      const double p = std::norm(s.at(u, v));
      total += p;
      if (std::hypot(bin_frequency(u, s.width), fy) >= kHighBandCutoff) high += p;
    }
  }
  return total > 0.0 ? high / total : 0.0;
}

/// Scores 1 - h / (2 q05), clamped to [0,1], where h is the high-band
/// fraction and q05 its 5th percentile over held-out real images. Images
/// below the real 5th percentile score above 0.5.
class FrequencyOracle {
 public:
  FrequencyOracle() = default;

  static FrequencyOracle calibrate(std::vector<double> real_fractions) {
    if (real_fractions.empty()) throw ParameterError("oracle calibration set is empty");
    std::sort(real_fractions.begin(), real_fractions.end());
    const double pos = 0.05 * static_cast<double>(real_fractions.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, real_fractions.size() - 1);
    FrequencyOracle o;
    o.q05_ = std::lerp(real_fractions[lo], real_fractions[hi], pos - lo);
    return o;
  }

  double q05() const { return q05_; }

  double score(double fraction) const {
    if (!(q05_ > 0.0)) return 0.5;
    return std::clamp(1.0 - fraction / (2.0 * q05_), 0.0, 1.0);
  }

 private:
  double q05_ = 0.0;
};

// ---------------------------------------------------------------- corpora

struct CorpusOptions {
  int n = 100;
  int n_calibration = 100;
  double ratio_lo = 0.1;  // mask ratio drawn uniformly from [lo, hi]
  double ratio_hi = 0.1;
  bool fingerprints = false;
  int jobs = 1;
};

struct CorpusItem {
  double mask_ratio = 0.0;
  double hf_real = 0.0;
  double hf_standard = 0.0;
  double hf_exchanged = 0.0;
  bool background_exact = false;
};

enum class CorpusVariant { kStandard, kExchanged };

struct ExchangeCorpus {
  FrequencyOracle oracle;
  std::vector<CorpusItem> items;
  std::optional<SpectralFingerprint> fp_real, fp_standard, fp_exchanged;

  /// Real records followed by the chosen fake variant.
  std::vector<DetectionRecord> records(CorpusVariant v) const {
    std::vector<DetectionRecord> out;
    for (const auto& s : stratified(v)) out.push_back(s.record);
    return out;
  }

  /// As records(), each carrying the mask ratio of its triplet.
  std::vector<StratifiedRecord> stratified(CorpusVariant v) const {
    std::vector<StratifiedRecord> out;
    const char* tag = v == CorpusVariant::kStandard ? "std-" : "ex-";
    for (std::size_t i = 0; i < items.size(); ++i) {
      out.push_back({{"real-" + std::to_string(i), Label::kReal,
                      oracle.score(items[i].hf_real)},
                     items[i].mask_ratio});
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      const double hf = v == CorpusVariant::kStandard ? items[i].hf_standard
                                                      : items[i].hf_exchanged;
      out.push_back({{tag + std::to_string(i), Label::kFake, oracle.score(hf)},
                     items[i].mask_ratio});
    }
    return out;
  }

  bool background_exact() const {
    return std::all_of(items.begin(), items.end(),
                       [](const CorpusItem& c) { return c.background_exact; });
  }
};

/// Axis-aligned square mask of side round(sqrt(ratio) N) at a random
/// position.
inline BinaryMask random_square_mask(int size, double ratio, Rng& rng) {
  const int side = std::clamp(
      static_cast<int>(std::lround(std::sqrt(ratio) * size)), 1, size);
  const int x0 = rng.integer(0, size - side);
  const int y0 = rng.integer(0, size - side);
  BinaryMask m(size, size);
  for (int y = y0; y < y0 + side; ++y)
    for (int x = x0; x < x0 + side; ++x) m.set(x, y, true);
  return m;
}

/// Triplet i: real x; standard inpaint T(exchange(x, x', M)) with x' an
/// independent draw; exchanged exchange(x, standard, M).
inline ExchangeCorpus simulate_exchange_corpus(const NoisyImageModel& model,
                                               const BottleneckSim& sim,
                                               const CorpusOptions& opt) {
  model.validate();
  sim.validate();
  detail::check_divisible(model.size, model.size, sim.factor);
  if (opt.n < 1 || opt.n_calibration < 1) {
    throw ParameterError("corpus and calibration sizes must be positive");
  }
  if (!(opt.ratio_lo > 0.0 && opt.ratio_lo <= opt.ratio_hi && opt.ratio_hi <= 1.0)) {
    throw ParameterError("mask ratio range must satisfy 0 < lo <= hi <= 1");
  }

  std::vector<double> cal(opt.n_calibration);
  parallel_for(cal.size(), opt.jobs, [&](std::size_t i) {
    cal[i] = high_band_fraction(model.draw(SimStream::kCalibration, i));
  });

  ExchangeCorpus corpus;
  corpus.oracle = FrequencyOracle::calibrate(cal);
  corpus.items.resize(opt.n);
  FingerprintAccumulator acc_real(std::nullopt), acc_std(std::nullopt),
      acc_ex(std::nullopt);

  // Batches bound memory while keeping fingerprint sums in index order.
  constexpr std::size_t kBatch = 32;
  struct Images {
    RasterImage real, standard, exchanged;
  };
  for (std::size_t start = 0; start < corpus.items.size(); start += kBatch) {
    const std::size_t count = std::min(kBatch, corpus.items.size() - start);
    std::vector<Images> batch(opt.fingerprints ? count : 0);
    parallel_for(count, opt.jobs, [&](std::size_t b) {
      const std::size_t i = start + b;
      Rng mask_rng(derive_seed(model.seed, static_cast<std::uint64_t>(SimStream::kMask), i));
      const double ratio = opt.ratio_lo == opt.ratio_hi
                               ? opt.ratio_lo
                               : mask_rng.uniform(opt.ratio_lo, opt.ratio_hi);
      const BinaryMask mask = random_square_mask(model.size, ratio, mask_rng);
      const auto real = RasterImage::from_plane(model.draw(SimStream::kReal, i));
      const auto fake = RasterImage::from_plane(model.draw(SimStream::kFake, i));
      const RasterImage standard = bottleneck_reconstruct(exchange(real, fake, mask), sim);
      const RasterImage exchanged = exchange(real, standard, mask);

      CorpusItem& item = corpus.items[i];
      item.mask_ratio = mask_ratio(mask);
      item.hf_real = high_band_fraction(real.channel(0));
      item.hf_standard = high_band_fraction(standard.channel(0));
      item.hf_exchanged = high_band_fraction(exchanged.channel(0));
      item.background_exact = true;
      for (int y = 0; y < model.size; ++y)
        for (int x = 0; x < model.size; ++x)
          if (!mask.at(x, y) && exchanged.at(x, y) != real.at(x, y)) {
            item.background_exact = false;
          }
      if (opt.fingerprints) batch[b] = {real, standard, exchanged};
    });
    for (const Images& im : batch) {
      acc_real.add(im.real);
      acc_std.add(im.standard);
      acc_ex.add(im.exchanged);
    }
  }
  if (opt.fingerprints) {
    corpus.fp_real = acc_real.result();
    corpus.fp_standard = acc_std.result();
    corpus.fp_exchanged = acc_ex.result();
  }
  return corpus;
}

struct GapOptions {
  double min_gap = 0.25;       // AUC_std - AUC_ex
  double max_exchanged_auc = 0.65;
  double min_mse_ratio = 5.0;  // spectral_mse(real, std) / spectral_mse(real, ex)
  int jobs = 1;
};

/// Frequency-oracle detection on real vs standard and real vs exchanged
/// corpora; the calibration split is n fresh real draws.
inline TheoremReport detectability_gap_demo(const NoisyImageModel& model,
                                            const BottleneckSim& sim, double mask_ratio,
                                            int n, const GapOptions& opt = {}) {
  if (n < 50) throw ParameterError("detectability demo needs n >= 50 per class");
  if (!(mask_ratio > 0.0 && mask_ratio < 0.5)) {
    throw ParameterError("mask ratio must lie in (0, 0.5)");
  }
  CorpusOptions copt;
  copt.n = n;
  copt.n_calibration = n;
  copt.ratio_lo = copt.ratio_hi = mask_ratio;
  copt.fingerprints = true;
  copt.jobs = opt.jobs;
  const ExchangeCorpus corpus = simulate_exchange_corpus(model, sim, copt);

  const auto std_records = corpus.records(CorpusVariant::kStandard);
  const auto ex_records = corpus.records(CorpusVariant::kExchanged);
  const ClassificationReport std_rep = classification_metrics(std_records);
  const ClassificationReport ex_rep = classification_metrics(ex_records);
  const double mse_std = spectral_mse(*corpus.fp_real, *corpus.fp_standard);
  const double mse_ex = spectral_mse(*corpus.fp_real, *corpus.fp_exchanged);
  const bool has_mse_ratio = mse_ex > 0.0;
  const double mse_ratio = has_mse_ratio ? mse_std / mse_ex : 0.0;

  TheoremReport rep;
  rep.check = "gap";
  rep.parameters = {{"model", model.to_json()}, {"sim", sim.to_json()},
                    {"mask_ratio", mask_ratio}, {"n", n},
                    {"calibration_n", n},
                    {"min_gap", opt.min_gap},
                    {"max_exchanged_auc", opt.max_exchanged_auc},
                    {"min_mse_ratio", opt.min_mse_ratio}};
  rep.flags["background_exact"] = corpus.background_exact();
  rep.flags["auc_gap_at_least_min"] = std_rep.auc - ex_rep.auc >= opt.min_gap;
  rep.flags["auc_exchanged_at_most_max"] = ex_rep.auc <= opt.max_exchanged_auc;
  rep.flags["spectral_mse_ordering"] =
      has_mse_ratio ? mse_ratio >= opt.min_mse_ratio : mse_std > 0.0;
  rep.metrics = {{"auc_standard", std_rep.auc},
                 {"auc_exchanged", ex_rep.auc},
                 {"auc_gap", std_rep.auc - ex_rep.auc},
                 {"accuracy_standard", std_rep.accuracy},
                 {"accuracy_exchanged", ex_rep.accuracy},
                 {"oracle_q05", corpus.oracle.q05()},
                 {"spectral_mse_standard", mse_std},
                 {"spectral_mse_exchanged", mse_ex},
                 {"spectral_mse_ratio",
                  has_mse_ratio ? nlohmann::json(mse_ratio) : nlohmann::json(nullptr)}};
  return rep;
}

struct TrendOptions {
  std::vector<double> edges{0.0, 0.1, 0.25, 0.5, 1.0};
  double ratio_lo = 0.01;
  double ratio_hi = 0.5;
  int n_calibration = 100;
  int jobs = 1;
};

/// Oracle accuracy on real vs exchanged, stratified by mask ratio; asserts
/// it does not decrease across the non-empty bins.
inline TheoremReport mask_ratio_trend(const NoisyImageModel& model, const BottleneckSim& sim,
                                      int n, const TrendOptions& opt = {}) {
  if (n < 50) throw ParameterError("trend check needs n >= 50");
  CorpusOptions copt;
  copt.n = n;
  copt.n_calibration = opt.n_calibration;
  copt.ratio_lo = opt.ratio_lo;
  copt.ratio_hi = opt.ratio_hi;
  copt.jobs = opt.jobs;
  const ExchangeCorpus corpus = simulate_exchange_corpus(model, sim, copt);
  const auto records = corpus.stratified(CorpusVariant::kExchanged);
  const auto strata = stratify_by_mask_ratio(records, opt.edges);

  TheoremReport rep;
  rep.check = "trend";
  rep.parameters = {{"model", model.to_json()}, {"sim", sim.to_json()}, {"n", n},
                    {"edges", opt.edges}, {"ratio_lo", opt.ratio_lo},
                    {"ratio_hi", opt.ratio_hi}, {"calibration_n", opt.n_calibration}};
  nlohmann::json strata_json = nlohmann::json::array();
  std::optional<double> prev;
  bool nondecreasing = true;
  for (const Stratum& s : strata) {
    strata_json.push_back(to_json(s));
    if (!s.accuracy) continue;
    if (prev && *s.accuracy < *prev) nondecreasing = false;
    prev = s.accuracy;
  }
  rep.flags["accuracy_nondecreasing"] = nondecreasing;
  rep.flags["background_exact"] = corpus.background_exact();
  rep.metrics = {{"strata", strata_json}, {"oracle_q05", corpus.oracle.q05()}};
  return rep;
}

// ---------------------------------------------------------------- signals

struct SignalSimOptions {
  double sigma_lo = 0.01;  // per-image noise drawn uniformly from [lo, hi]
  double sigma_hi = 0.08;
  double mask_ratio = 0.1;
  int jobs = 1;
};

/// Per-pixel signal maps for `n` simulated images with varying noise:
/// x, its standard inpaint T(exchange(x, x', M)) and its reconstruction T(x).
inline std::vector<SignalMaps> simulate_signal_maps(const NoisyImageModel& model,
                                                    const BottleneckSim& sim, int n,
                                                    const SignalSimOptions& opt = {}) {
  model.validate();
  sim.validate();
  if (n < 1) throw ParameterError("signal simulation needs n >= 1");
  if (!(opt.sigma_lo >= 0.0 && opt.sigma_lo <= opt.sigma_hi)) {
    throw ParameterError("noise range must satisfy 0 <= lo <= hi");
  }
  std::vector<SignalMaps> out(n);
  parallel_for(static_cast<std::size_t>(n), opt.jobs, [&](std::size_t i) {
    Rng rng(derive_seed(model.seed, static_cast<std::uint64_t>(SimStream::kSignal), i));
    const double sigma = rng.uniform(opt.sigma_lo, opt.sigma_hi);
    const BinaryMask mask = random_square_mask(model.size, opt.mask_ratio, rng);
    const auto x = RasterImage::from_plane(model.draw(SimStream::kReal, i, sigma));
    const auto fake = RasterImage::from_plane(model.draw(SimStream::kFake, i, sigma));
    const RasterImage inpainted = bottleneck_reconstruct(exchange(x, fake, mask), sim);
    out[i] = make_signal_maps(x, inpainted, bottleneck_reconstruct(x, sim), mask);
  });
  return out;
}

}  // namespace inpx

#endif  // INPX_THEORY_HPP_
