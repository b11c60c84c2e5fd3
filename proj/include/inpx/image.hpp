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

// Pixel containers shared by every module.
//
// RasterImage holds interleaved samples in [0,1] that originate from 8-bit
// storage (v / 255). Plane is an unconstrained real field used by the
// spectral and simulation code, where intermediate values (cross
// differences, Fourier-filtered reconstructions) leave the unit interval.
// AlphaMatte, DiffMap and SaliencyMap are unit-range planes that differ only
// in meaning.

#ifndef INPX_IMAGE_HPP_
#define INPX_IMAGE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "inpx/error.hpp"

namespace inpx {

/// Maps a unit-range sample onto the 8-bit grid, rounding half up.
inline std::uint8_t to_u8(double v) {
  if (!(v > 0.0)) return 0;  // also catches NaN
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

inline double from_u8(std::uint8_t b) { return static_cast<double>(b) / 255.0; }

/// Snaps a unit-range sample to the nearest representable 8-bit level.
inline double snap_u8(double v) { return from_u8(to_u8(v)); }

namespace detail {

inline void check_extent(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw DimensionError("image dimensions must be positive, got " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace detail

/// Row-major single-channel field.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    detail::check_extent(width, height);
    values_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  Grid(int width, int height, std::vector<T> values)
      : width_(width), height_(height), values_(std::move(values)) {
    detail::check_extent(width, height);
    if (values_.size() != static_cast<std::size_t>(width) * height) {
      throw DimensionError("grid value count does not match " +
                           std::to_string(width) + "x" +
                           std::to_string(height));
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  T& at(int x, int y) { return values_[index(x, y)]; }
  const T& at(int x, int y) const { return values_[index(x, y)]; }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid& a, const Grid& b) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
};

using Plane = Grid<double>;

/// Plane whose values are confined to [0,1]. The tag distinguishes the
/// meaning (blend weight, difference magnitude, detector attention).
template <typename Tag>
class UnitPlane {
 public:
  UnitPlane() = default;

  explicit UnitPlane(Plane plane) : plane_(std::move(plane)) {
    for (double v : plane_.values()) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ParameterError(std::string(Tag::kName) +
                             " values must lie in [0,1]");
      }
    }
  }

  UnitPlane(int width, int height) : plane_(width, height, 0.0) {}

  int width() const { return plane_.width(); }
  int height() const { return plane_.height(); }
  double at(int x, int y) const { return plane_.at(x, y); }
  std::span<const double> values() const { return plane_.values(); }
  const Plane& plane() const { return plane_; }

 private:
  Plane plane_;
};

struct AlphaTag {
  static constexpr const char* kName = "alpha matte";
};
struct DiffTag {
  static constexpr const char* kName = "difference map";
};
struct SaliencyTag {
  static constexpr const char* kName = "saliency map";
};

/// Soft blend weight produced around a mask boundary.
using AlphaMatte = UnitPlane<AlphaTag>;
/// Per-pixel mean absolute channel difference between two images.
using DiffMap = UnitPlane<DiffTag>;
/// Continuous localization heatmap emitted by an attribution tool.
using SaliencyMap = UnitPlane<SaliencyTag>;

/// Edit-region indicator; true (M = 1) marks pixels to be synthesized.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false)
      : bits_(width, height, fill ? 1 : 0) {}

  int width() const { return bits_.width(); }
  int height() const { return bits_.height(); }
  std::size_t pixel_count() const { return bits_.pixel_count(); }

  bool at(int x, int y) const { return bits_.at(x, y) != 0; }
  void set(int x, int y, bool on) { bits_.at(x, y) = on ? 1 : 0; }

  std::size_t count() const {
    return static_cast<std::size_t>(
        std::count(bits_.values().begin(), bits_.values().end(), 1));
  }

  /// Complement (M -> 1 - M).
  BinaryMask inverted() const {
    BinaryMask out(width(), height());
    for (int y = 0; y < height(); ++y)
      for (int x = 0; x < width(); ++x) out.set(x, y, !at(x, y));
    return out;
  }

  friend bool operator==(const BinaryMask& a, const BinaryMask& b) = default;

 private:
  Grid<std::uint8_t> bits_;
};

/// Interleaved H x W x C image with samples in [0,1]; C is 1 or 3.
class RasterImage {
 public:
  RasterImage() = default;

  RasterImage(int width, int height, int channels, double fill = 0.0)
      : width_(width), height_(height), channels_(channels) {
    detail::check_extent(width, height);
    check_channels(channels);
    if (!(fill >= 0.0 && fill <= 1.0)) {
      throw ParameterError("fill value must lie in [0,1]");
    }
    samples_.assign(sample_count(), fill);
  }

  RasterImage(int width, int height, int channels, std::vector<double> samples)
      : width_(width), height_(height), channels_(channels),
        samples_(std::move(samples)) {
    detail::check_extent(width, height);
    check_channels(channels);
    if (samples_.size() != sample_count()) {
      throw DimensionError("sample count does not match image shape");
    }
    for (double v : samples_) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ParameterError("image samples must lie in [0,1]");
      }
    }
  }

  /// Builds an image from 8-bit samples (v / 255).
  static RasterImage from_bytes(int width, int height, int channels,
                                std::span<const std::uint8_t> bytes) {
    std::vector<double> s(bytes.size());
    std::transform(bytes.begin(), bytes.end(), s.begin(), from_u8);
    return RasterImage(width, height, channels, std::move(s));
  }

  /// Stacks 1 or 3 planes; values are clamped to [0,1].
  static RasterImage from_planes(std::span<const Plane> planes) {
    if (planes.empty()) throw ParameterError("no planes given");
    const int w = planes[0].width();
    const int h = planes[0].height();
    const int c = static_cast<int>(planes.size());
    for (const Plane& p : planes) {
      if (!p.same_shape(planes[0])) {
        throw DimensionError("planes differ in shape");
      }
    }
    std::vector<double> s(static_cast<std::size_t>(w) * h * c);
    for (int ch = 0; ch < c; ++ch) {
      auto v = planes[ch].values();
      for (std::size_t i = 0; i < v.size(); ++i) {
        s[i * c + ch] = std::clamp(v[i], 0.0, 1.0);
      }
    }
    return RasterImage(w, h, c, std::move(s));
  }

  static RasterImage from_plane(const Plane& plane) {
    return from_planes(std::span<const Plane>(&plane, 1));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }
  bool empty() const { return samples_.empty(); }

  double at(int x, int y, int c = 0) const {
    return samples_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<const double> samples() const { return samples_; }

  Plane channel(int c) const {
    Plane p(width_, height_);
    auto out = p.values();
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = samples_[i * channels_ + c];
    }
    return p;
  }

  std::vector<Plane> planes() const {
    std::vector<Plane> out;
    out.reserve(channels_);
    for (int c = 0; c < channels_; ++c) out.push_back(channel(c));
    return out;
  }

  /// 8-bit representation, round-half-up.
  std::vector<std::uint8_t> to_bytes() const {
    std::vector<std::uint8_t> b(samples_.size());
    std::transform(samples_.begin(), samples_.end(), b.begin(), to_u8);
    return b;
  }

  /// Copy with every sample snapped to the 8-bit grid.
  RasterImage quantized() const {
    auto b = to_bytes();
    return from_bytes(width_, height_, channels_, b);
  }

  bool same_shape(const RasterImage& o) const {
    return width_ == o.width_ && height_ == o.height_ &&
           channels_ == o.channels_;
  }

  template <typename Other>
  bool same_extent(const Other& o) const {
    return width_ == o.width() && height_ == o.height();
  }

  friend bool operator==(const RasterImage& a, const RasterImage& b) = default;

 private:
  static void check_channels(int channels) {
    if (channels != 1 && channels != 3) {
      throw ParameterError("images carry 1 or 3 channels, got " +
                           std::to_string(channels));
    }
  }

  std::size_t sample_count() const {
    return static_cast<std::size_t>(width_) * height_ * channels_;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> samples_;
};

namespace detail {

template <typename A, typename B>
void require_same_extent(const A& a, const B& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError(std::string(what) + ": " + std::to_string(a.width()) +
                         "x" + std::to_string(a.height()) + " vs " +
                         std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
  }
}

}  // namespace detail

}  // namespace inpx

#endif  // INPX_IMAGE_HPP_
