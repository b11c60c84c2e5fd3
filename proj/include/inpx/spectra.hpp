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

// Frequency-domain diagnostics.
//
//  * cross_difference   second-difference high-pass that removes scene
//                       content before spectral analysis
//  * fingerprint        corpus-averaged, per-image normalized magnitude
//                       spectrum of the cross-difference residual
//  * spectral_mse       x1000 mean squared distance between fingerprints
//  * radial_psd         power averaged over annuli of radial frequency
//  * haar_energies      per-scale detail energy of an orthonormal 2-D Haar
//                       decomposition

#ifndef INPX_SPECTRA_HPP_
#define INPX_SPECTRA_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "inpx/error.hpp"
#include "inpx/fft.hpp"
#include "inpx/filter.hpp"
#include "inpx/image.hpp"

namespace inpx {

/// Rec.601 luma; single-channel input passes through unchanged.
inline Plane to_luma(const RasterImage& img) {
  if (img.channels() == 1) return img.channel(0);
  Plane out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      out.at(x, y) = 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) +
                     0.114 * img.at(x, y, 2);
    }
  }
  return out;
}

/// |I(i,j) - I(i+1,j) - I(i,j+1) + I(i+1,j+1)|, shrinking each side by one.
/// Values are not clamped (a 0/1 checkerboard maps to 2).
inline Plane cross_difference(const Plane& img) {
  if (img.width() < 2 || img.height() < 2) {
    throw DimensionError("cross difference needs at least 2x2 pixels");
  }
  Plane out(img.width() - 1, img.height() - 1);
  for (int y = 0; y + 1 < img.height(); ++y) {
    for (int x = 0; x + 1 < img.width(); ++x) {
      out.at(x, y) = std::abs(img.at(x, y) - img.at(x + 1, y) -
                              img.at(x, y + 1) + img.at(x + 1, y + 1));
    }
  }
  return out;
}

/// |FFT| divided by its own total, so every image carries unit mass.
/// An all-zero input yields an all-zero spectrum. Bins are unshifted.
inline Plane normalized_magnitude(const Plane& residual) {
  const Spectrum s = fft2d(residual);
  Plane mag(s.width, s.height);
  auto m = mag.values();
  double total = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = std::abs(s.bins[i]);
    total += m[i];
  }
  if (total > 0.0) {
    for (double& v : m) v /= total;
  }
  return mag;
}

// ---------------------------------------------------------------- fingerprint

/// Mean normalized magnitude spectrum of a corpus, DC at the centre.
struct SpectralFingerprint {
  Plane magnitude;
  std::int64_t count = 0;

  int width() const { return magnitude.width(); }
  int height() const { return magnitude.height(); }

  nlohmann::json to_json() const {
    return {{"width", width()},
            {"height", height()},
            {"count", count},
            {"magnitude", std::vector<double>(magnitude.values().begin(),
                                              magnitude.values().end())}};
  }

  static SpectralFingerprint from_json(const nlohmann::json& j) {
    try {
      const int w = j.at("width").get<int>();
      const int h = j.at("height").get<int>();
      auto values = j.at("magnitude").get<std::vector<double>>();
      SpectralFingerprint fp{Plane(w, h, std::move(values)),
                             j.at("count").get<std::int64_t>()};
      if (fp.count < 1) throw FormatError("fingerprint count must be >= 1");
      for (double v : fp.magnitude.values()) {
        if (!std::isfinite(v) || v < 0.0) {
          throw FormatError("fingerprint magnitudes must be finite and >= 0");
        }
      }
      return fp;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("fingerprint json: ") + e.what());
    } catch (const DimensionError& e) {
      throw FormatError(std::string("fingerprint json: ") + e.what());
    }
  }
};

/// Running (sum, count) over per-image normalized spectra. Accumulators
/// merge associatively, so partial corpora can be reduced in any order.
class FingerprintAccumulator {
 public:
  static constexpr int kDefaultSize = 512;

  /// `resize_to` = nullopt analyses images at native resolution.
  explicit FingerprintAccumulator(std::optional<int> resize_to = kDefaultSize)
      : resize_to_(resize_to) {
    if (resize_to_ && *resize_to_ < 2) {
      throw ParameterError("fingerprint resize target must be >= 2");
    }
  }

  void add(const RasterImage& img) {
    Plane luma = to_luma(img);
    if (resize_to_) luma = resize_bilinear(luma, *resize_to_, *resize_to_);
    add_residual(cross_difference(luma));
  }

  /// Adds an already high-passed residual.
  void add_residual(const Plane& residual) {
    Plane mag = normalized_magnitude(residual);
    if (count_ == 0) {
      sum_ = std::move(mag);
    } else {
      if (!sum_.same_shape(mag)) {
        throw DimensionError("images in a fingerprint must share a size");
      }
      auto s = sum_.values();
      auto m = mag.values();
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += m[i];
    }
    ++count_;
  }

  void merge(const FingerprintAccumulator& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      sum_ = other.sum_;
      count_ = other.count_;
      return;
    }
    if (!sum_.same_shape(other.sum_)) {
      throw DimensionError("cannot merge fingerprints of different sizes");
    }
    auto s = sum_.values();
    auto o = other.sum_.values();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += o[i];
    count_ += other.count_;
  }

  std::int64_t count() const { return count_; }

  SpectralFingerprint result() const {
    if (count_ == 0) throw ParameterError("fingerprint of an empty stream");
    Plane mean = sum_;
    for (double& v : mean.values()) v /= static_cast<double>(count_);
    return SpectralFingerprint{fftshift(mean), count_};
  }

 private:
  std::optional<int> resize_to_;
  Plane sum_;
  std::int64_t count_ = 0;
};

/// Fingerprint of any range of RasterImage.
template <typename Range>
SpectralFingerprint fingerprint(const Range& images,
                                std::optional<int> resize_to =
                                    FingerprintAccumulator::kDefaultSize) {
  FingerprintAccumulator acc(resize_to);
  for (const RasterImage& img : images) acc.add(img);
  return acc.result();
}

/// Mean squared per-bin difference, scaled by 1000.
inline double spectral_mse(const SpectralFingerprint& a,
                           const SpectralFingerprint& b) {
  if (!a.magnitude.same_shape(b.magnitude)) {
    throw DimensionError("fingerprints differ in size");
  }
  auto va = a.magnitude.values();
  auto vb = b.magnitude.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = va[i] - vb[i];
    acc += d * d;
  }
  return 1000.0 * acc / static_cast<double>(va.size());
}

/// Log-scaled 8-bit rendering for inspection only.
inline RasterImage fingerprint_heatmap(const SpectralFingerprint& fp) {
  const auto v = fp.magnitude.values();
  const double peak = *std::max_element(v.begin(), v.end());
  Plane out(fp.width(), fp.height());
  auto o = out.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    o[i] = peak > 0.0 ? std::log1p(1000.0 * v[i] / peak) / std::log1p(1000.0) : 0.0;
  }
  return RasterImage::from_plane(out);
}

// ---------------------------------------------------------------- radial PSD

/// Lower edge of the band treated as noise-dominated, cycles per pixel.
inline constexpr double kHighBandCutoff = 0.25;

struct RadialPSD {
  std::vector<double> edges;        // n_bins + 1 edges from 0 to 0.5
  std::vector<double> power;        // mean |F|^2 per annulus
  std::vector<std::int64_t> counts; // frequency samples per annulus

  std::size_t size() const { return power.size(); }

  /// Bins lying entirely above `cutoff`.
  std::vector<std::size_t> bins_above(double cutoff = kHighBandCutoff) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < power.size(); ++b) {
      if (edges[b] >= cutoff - 1e-12) out.push_back(b);
    }
    return out;
  }
};

/// |FFT|^2 averaged over equal-width annuli of radial frequency in
/// [0, 0.5] cycles/pixel. DC falls in bin 0; corner frequencies beyond
/// Nyquist radius are folded into the last bin.
inline RadialPSD radial_psd(const Plane& img, int n_bins) {
  if (n_bins < 2) throw ParameterError("radial PSD needs at least 2 bins");
  if (img.width() < 2 || img.height() < 2) {
    throw DimensionError("radial PSD needs at least 2x2 pixels");
  }
  const Spectrum s = fft2d(img);
  RadialPSD psd;
  psd.edges.resize(n_bins + 1);
  for (int b = 0; b <= n_bins; ++b) psd.edges[b] = 0.5 * b / n_bins;
  psd.power.assign(n_bins, 0.0);
  psd.counts.assign(n_bins, 0);
  for (int v = 0; v < s.height; ++v) {
    const double fy = bin_frequency(v, s.height);
    for (int u = 0; u < s.width; ++u) {
      const double fx = bin_frequency(u, s.width);
      const double r = std::hypot(fx, fy);
      const int b = std::min(static_cast<int>(r / 0.5 * n_bins), n_bins - 1);
      psd.power[b] += std::norm(s.at(u, v));
      ++psd.counts[b];
    }
  }
  for (int b = 0; b < n_bins; ++b) {
    if (psd.counts[b] > 0) psd.power[b] /= static_cast<double>(psd.counts[b]);
  }
  return psd;
}

// ---------------------------------------------------------------- wavelets

/// Detail energy per decomposition level of an orthonormal Haar transform.
///
/// `level` counts from the finest (1) toward coarser subbands. `scale` is
/// the resolution index k - level + 1 for a 2^k x 2^k image: it grows toward
/// finer detail, and W_scale is the detail lost when going from resolution
/// 2^scale to 2^(scale-1).
struct WaveletEnergyProfile {
  struct Level {
    int level = 0;
    int scale = 0;
    double energy = 0.0;
  };

  int size_log2 = 0;
  std::vector<Level> levels;  // finest first
  double approx_energy = 0.0;

  double total() const {
    double t = approx_energy;
    for (const Level& l : levels) t += l.energy;
    return t;
  }

  const Level* find_scale(int scale) const {
    for (const Level& l : levels)
      if (l.scale == scale) return &l;
    return nullptr;
  }
};

inline bool is_power_of_two(int n) {
  return n > 0 && std::has_single_bit(static_cast<unsigned>(n));
}

inline WaveletEnergyProfile haar_energies(const Plane& img, int levels) {
  const int n = img.width();
  if (n != img.height() || !is_power_of_two(n)) {
    throw DimensionError("Haar analysis needs a square power-of-two image");
  }
  const int k = std::countr_zero(static_cast<unsigned>(n));
  if (levels < 0 || levels > k) {
    throw ParameterError("Haar depth " + std::to_string(levels) +
                         " exceeds log2(size) = " + std::to_string(k));
  }
  WaveletEnergyProfile profile;
  profile.size_log2 = k;
  Plane approx = img;
  for (int level = 1; level <= levels; ++level) {
    const int half = approx.width() / 2;
    Plane next(half, half);
    double energy = 0.0;
    for (int y = 0; y < half; ++y) {
      for (int x = 0; x < half; ++x) {
        const double a = approx.at(2 * x, 2 * y);
        const double b = approx.at(2 * x + 1, 2 * y);
        const double c = approx.at(2 * x, 2 * y + 1);
        const double d = approx.at(2 * x + 1, 2 * y + 1);
        const double lh = 0.5 * (a - b + c - d);
        const double hl = 0.5 * (a + b - c - d);
        const double hh = 0.5 * (a - b - c + d);
        next.at(x, y) = 0.5 * (a + b + c + d);
        energy += lh * lh + hl * hl + hh * hh;
      }
    }
    profile.levels.push_back({level, k - level + 1, energy});
    approx = std::move(next);
  }
  for (double v : approx.values()) profile.approx_energy += v * v;
  return profile;
}

/// Largest centred power-of-two square crop. `cropped` reports whether any
/// pixels were dropped.
inline Plane center_crop_pow2(const Plane& img, bool* cropped = nullptr) {
  const int side = static_cast<int>(
      std::bit_floor(static_cast<unsigned>(std::min(img.width(), img.height()))));
  if (cropped) *cropped = side != img.width() || side != img.height();
  if (side == img.width() && side == img.height()) return img;
  const int x0 = (img.width() - side) / 2;
  const int y0 = (img.height() - side) / 2;
  Plane out(side, side);
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) out.at(x, y) = img.at(x0 + x, y0 + y);
  return out;
}

}  // namespace inpx

#endif  // INPX_SPECTRA_HPP_
