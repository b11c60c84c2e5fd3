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

// Comparison corruptions: Gaussian blur, Gaussian light spot, JPEG round trip.

#ifndef INPX_CORRUPT_HPP_
#define INPX_CORRUPT_HPP_

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "inpx/error.hpp"
#include "inpx/filter.hpp"
#include "inpx/image.hpp"
#include "inpx/io.hpp"
#include "inpx/rng.hpp"

namespace inpx {

/// Separable Gaussian blur, kernel truncated at ceil(3 sigma), mirrored
/// borders, output clamped to [0,1].
inline RasterImage gaussian_blur(const RasterImage& img, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("blur sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  const auto kernel = gaussian_kernel(radius, sigma);
  std::vector<Plane> planes;
  for (const Plane& p : img.planes()) planes.push_back(convolve_separable(p, kernel));
  return RasterImage::from_planes(planes);
}

struct LightSpotParams {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 120.0;
  double gain = 1.5;  // peak multiplier A

  void validate() const {
    if (!(radius > 0.0)) throw ParameterError("light spot radius must be > 0");
    if (!(gain >= 1.0)) throw ParameterError("light spot gain must be >= 1");
  }

  /// Multiplier at distance `d` from the centre.
  double gain_at(double d) const {
    return 1.0 + (gain - 1.0) * std::exp(-(d * d) / (2.0 * radius * radius));
  }
};

/// Multiplies every channel by 1 + (A - 1) exp(-d^2 / 2r^2) and clamps.
inline RasterImage light_spot(const RasterImage& img, const LightSpotParams& p) {
  p.validate();
  if (p.center_x < 0.0 || p.center_y < 0.0 || p.center_x > img.width() - 1 ||
      p.center_y > img.height() - 1) {
    throw ParameterError("light spot centre lies outside the image");
  }
  const int c = img.channels();
  auto src = img.samples();
  std::vector<double> out(src.size());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double g = p.gain_at(std::hypot(x - p.center_x, y - p.center_y));
      const std::size_t base = (static_cast<std::size_t>(y) * img.width() + x) * c;
      for (int k = 0; k < c; ++k) {
        out[base + k] = std::min(1.0, src[base + k] * g);
      }
    }
  }
  return RasterImage(img.width(), img.height(), c, std::move(out));
}

/// Light spot at a pixel drawn uniformly from the image grid. The drawn
/// parameters are returned so the corruption can be replayed.
inline std::pair<RasterImage, LightSpotParams> light_spot_random(
    const RasterImage& img, double radius, double gain, RngSeed seed) {
  Rng rng(seed);
  LightSpotParams p;
  p.center_x = static_cast<double>(rng.index(static_cast<std::uint64_t>(img.width())));
  p.center_y = static_cast<double>(rng.index(static_cast<std::uint64_t>(img.height())));
  p.radius = radius;
  p.gain = gain;
  return {light_spot(img, p), p};
}

/// Encode as baseline JPEG at `quality` and decode back.
inline RasterImage jpeg_compress(const RasterImage& img, int quality) {
  return decode_jpeg(encode_jpeg(img, quality));
}

}  // namespace inpx

#endif  // INPX_CORRUPT_HPP_
