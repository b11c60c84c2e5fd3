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

// Inpainting exchange: keep generated pixels inside the edit mask, restore
// the original everywhere else. A soft variant feathers the seam with a
// Gaussian alpha matte confined to a band around the mask boundary.

#ifndef INPX_EXCHANGE_HPP_
#define INPX_EXCHANGE_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "inpx/error.hpp"
#include "inpx/filter.hpp"
#include "inpx/image.hpp"

namespace inpx {

namespace detail {

inline void check_triplet(const RasterImage& original,
                          const RasterImage& generated,
                          const BinaryMask& mask) {
  if (!original.same_shape(generated)) {
    throw DimensionError("original and generated images differ in shape");
  }
  require_same_extent(original, mask, "mask does not match image");
}

}  // namespace detail

/// Copies `generated` where the mask is set and `original` elsewhere.
/// Samples are copied, never recomputed, so the background is bit-identical
/// to the original.
inline RasterImage exchange(const RasterImage& original,
                            const RasterImage& generated,
                            const BinaryMask& mask) {
  detail::check_triplet(original, generated, mask);
  const int c = original.channels();
  auto orig = original.samples();
  auto gen = generated.samples();
  std::vector<double> out(orig.begin(), orig.end());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      const std::size_t base =
          (static_cast<std::size_t>(y) * mask.width() + x) * c;
      for (int k = 0; k < c; ++k) out[base + k] = gen[base + k];
    }
  }
  return RasterImage(original.width(), original.height(), c, std::move(out));
}

/// Band of pixels within `band_width` dilations of the mask boundary.
/// A width of zero yields an empty band.
inline BinaryMask edge_band(const BinaryMask& mask, int band_width) {
  if (band_width < 0) throw ParameterError("band width must be >= 0");
  if (band_width == 0) return BinaryMask(mask.width(), mask.height());
  return dilate(mask_boundary(mask), band_width);
}

/// Gaussian-blurred edge band, zeroed outside the band.
inline AlphaMatte edge_matte(const BinaryMask& mask, int band_width,
                             int kernel_size) {
  if (kernel_size < 3 || kernel_size % 2 == 0) {
    throw ParameterError("blur kernel must be odd and >= 3");
  }
  const BinaryMask band = edge_band(mask, band_width);
  Plane indicator(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      indicator.at(x, y) = band.at(x, y) ? 1.0 : 0.0;
  const auto kernel = gaussian_kernel(kernel_size / 2,
                                      sigma_for_kernel_size(kernel_size));
  Plane alpha = convolve_separable(indicator, kernel);
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      alpha.at(x, y) = band.at(x, y) ? std::clamp(alpha.at(x, y), 0.0, 1.0) : 0.0;
  return AlphaMatte(std::move(alpha));
}

/// Hard exchange followed by seam feathering:
/// out = hard * (1 - alpha) + blur(hard) * alpha, evaluated on 8-bit levels.
/// Pixels where alpha is zero keep the hard-exchange value exactly.
inline RasterImage soft_exchange(const RasterImage& original,
                                 const RasterImage& generated,
                                 const BinaryMask& mask, int band_width = 2,
                                 int kernel_size = 5) {
  detail::check_triplet(original, generated, mask);
  const AlphaMatte alpha = edge_matte(mask, band_width, kernel_size);
  const RasterImage hard = exchange(original, generated, mask).quantized();
  if (band_width == 0) return hard;

  const auto kernel = gaussian_kernel(kernel_size / 2,
                                      sigma_for_kernel_size(kernel_size));
  const int c = hard.channels();
  std::vector<Plane> blurred;
  for (const Plane& p : hard.planes()) blurred.push_back(convolve_separable(p, kernel));

  const auto src = hard.samples();
  std::vector<double> out(src.begin(), src.end());
  for (int y = 0; y < hard.height(); ++y) {
    for (int x = 0; x < hard.width(); ++x) {
      const double a = alpha.at(x, y);
      if (a == 0.0) continue;
      const std::size_t base = (static_cast<std::size_t>(y) * hard.width() + x) * c;
      for (int k = 0; k < c; ++k) {
        const double v = src[base + k] * (1.0 - a) + blurred[k].at(x, y) * a;
        out[base + k] = snap_u8(v);
      }
    }
  }
  return RasterImage(hard.width(), hard.height(), c, std::move(out));
}

/// Per-pixel mean over channels of |a - b|.
inline DiffMap diff_map(const RasterImage& a, const RasterImage& b) {
  if (!a.same_shape(b)) throw DimensionError("diff_map operands differ in shape");
  const int c = a.channels();
  Plane d(a.width(), a.height());
  auto sa = a.samples();
  auto sb = b.samples();
  auto out = d.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (int k = 0; k < c; ++k) acc += std::abs(sa[i * c + k] - sb[i * c + k]);
    out[i] = acc / c;
  }
  return DiffMap(std::move(d));
}

/// Fraction of pixels inside the edit region.
inline double mask_ratio(const BinaryMask& mask) {
  if (mask.pixel_count() == 0) throw ParameterError("empty mask");
  return static_cast<double>(mask.count()) /
         static_cast<double>(mask.pixel_count());
}

}  // namespace inpx

#endif  // INPX_EXCHANGE_HPP_
