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

// Spatial filtering primitives: Gaussian kernels, separable convolution with
// mirrored borders, resampling and binary morphology.

#ifndef INPX_FILTER_HPP_
#define INPX_FILTER_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "inpx/error.hpp"
#include "inpx/image.hpp"

namespace inpx {

/// Mirror index without repeating the edge sample (`dcb|abcd|cba`), folded
/// as often as needed for kernels wider than the signal.
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

/// Sampled, normalized Gaussian of `2 * radius + 1` taps.
inline std::vector<double> gaussian_kernel(int radius, double sigma) {
  if (radius < 0) throw ParameterError("kernel radius must be >= 0");
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  std::vector<double> k(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  }
  const double sum = std::accumulate(k.begin(), k.end(), 0.0);
  for (double& w : k) w /= sum;
  return k;
}

/// Sigma implied by an odd kernel size when none is given explicitly.
inline double sigma_for_kernel_size(int size) {
  return 0.3 * ((size - 1) * 0.5 - 1.0) + 0.8;
}

/// Separable convolution of `src` with the same 1-D kernel along both axes.
///
/// Each output accumulates weighted deviations from the centre tap, so a
/// constant field is reproduced bit-exactly regardless of kernel rounding.
inline Plane convolve_separable(const Plane& src, std::span<const double> kernel) {
  if (kernel.empty() || kernel.size() % 2 == 0) {
    throw ParameterError("kernel length must be odd");
  }
  const int r = static_cast<int>(kernel.size() / 2);
  const int w = src.width();
  const int h = src.height();
  Plane tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = src.at(x, y);
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        acc += kernel[k + r] * (src.at(reflect_index(x + k, w), y) - c);
      }
      tmp.at(x, y) = c + acc;
    }
  }
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = tmp.at(x, y);
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        acc += kernel[k + r] * (tmp.at(x, reflect_index(y + k, h)) - c);
      }
      out.at(x, y) = c + acc;
    }
  }
  return out;
}

/// Bilinear resampling with pixel-centre alignment and clamped borders.
inline Plane resize_bilinear(const Plane& src, int width, int height) {
  detail::check_extent(width, height);
  if (src.width() == width && src.height() == height) return src;
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  std::vector<int> x0(width), x1(width);
  std::vector<double> tx(width);
  for (int x = 0; x < width; ++x) {
    double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0,
                           static_cast<double>(src.width() - 1));
    x0[x] = static_cast<int>(std::floor(fx));
    x1[x] = std::min(x0[x] + 1, src.width() - 1);
    tx[x] = fx - x0[x];
  }
  Plane out(width, height);
  for (int y = 0; y < height; ++y) {
    double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0,
                           static_cast<double>(src.height() - 1));
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, src.height() - 1);
    const double ty = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double top = std::lerp(src.at(x0[x], y0), src.at(x1[x], y0), tx[x]);
      const double bot = std::lerp(src.at(x0[x], y1), src.at(x1[x], y1), tx[x]);
      out.at(x, y) = std::lerp(top, bot, ty);
    }
  }
  return out;
}

inline RasterImage resize_bilinear(const RasterImage& src, int width, int height) {
  if (src.width() == width && src.height() == height) return src;
  std::vector<Plane> planes;
  for (const Plane& p : src.planes()) planes.push_back(resize_bilinear(p, width, height));
  return RasterImage::from_planes(planes);
}

/// Nearest-neighbour resampling, sampling the source pixel under each
/// destination pixel centre.
inline BinaryMask resize_nearest(const BinaryMask& src, int width, int height) {
  detail::check_extent(width, height);
  BinaryMask out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(
        static_cast<int>((y + 0.5) * src.height() / height), src.height() - 1);
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(
          static_cast<int>((x + 0.5) * src.width() / width), src.width() - 1);
      out.set(x, y, src.at(sx, sy));
    }
  }
  return out;
}

/// Pixels with at least one 8-neighbour of the opposite mask value; both
/// sides of the edge are included.
inline BinaryMask mask_boundary(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool v = mask.at(x, y);
      bool edge = false;
      for (int dy = -1; dy <= 1 && !edge; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (mask.at(nx, ny) != v) {
            edge = true;
            break;
          }
        }
      }
      out.set(x, y, edge);
    }
  }
  return out;
}

/// 3x3 binary dilation applied `iterations` times.
inline BinaryMask dilate(const BinaryMask& mask, int iterations) {
  BinaryMask cur = mask;
  const int w = mask.width();
  const int h = mask.height();
  for (int it = 0; it < iterations; ++it) {
    BinaryMask next(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        bool on = false;
        for (int dy = -1; dy <= 1 && !on; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            if (cur.at(nx, ny)) {
              on = true;
              break;
            }
          }
        }
        next.set(x, y, on);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace inpx

#endif  // INPX_FILTER_HPP_
