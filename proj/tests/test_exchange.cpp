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

#include <cmath>
#include <random>

#include "inpx/exchange.hpp"
#include "inpx/io.hpp"
#include "oracles.hpp"

namespace inpx {
namespace {

TEST(Exchange, CopiesSamplesBySupport) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int c = trial % 2 ? 3 : 1;
    const auto orig = oracle::random_image(gen, 12, 10, c);
    const auto fake = oracle::random_image(gen, 12, 10, c);
    const auto mask = oracle::random_mask(gen, 12, 10, 0.4);
    const auto out = exchange(orig, fake, mask);
    for (int y = 0; y < 10; ++y)
      for (int x = 0; x < 12; ++x)
        for (int k = 0; k < c; ++k)
          EXPECT_EQ(out.at(x, y, k), mask.at(x, y) ? fake.at(x, y, k) : orig.at(x, y, k));
  }
}

TEST(Exchange, DegenerateMasks) {
  std::mt19937_64 gen(22);
  const auto orig = oracle::random_image(gen, 8, 8, 3);
  const auto fake = oracle::random_image(gen, 8, 8, 3);
  EXPECT_EQ(exchange(orig, fake, BinaryMask(8, 8, false)), orig);
  EXPECT_EQ(exchange(orig, fake, BinaryMask(8, 8, true)), fake);
}

TEST(Exchange, IdempotentAndInvolutiveOnComplement) {
  std::mt19937_64 gen(23);
  const auto orig = oracle::random_image(gen, 9, 7, 3);
  const auto fake = oracle::random_image(gen, 9, 7, 3);
  const auto mask = oracle::random_mask(gen, 9, 7);
  const auto once = exchange(orig, fake, mask);
  EXPECT_EQ(exchange(orig, once, mask), once);
  EXPECT_EQ(exchange(once, orig, mask), orig);
}

TEST(Exchange, ShapeMismatch) {
  RasterImage a(4, 4, 3), b(4, 4, 1), c(5, 4, 3);
  BinaryMask m(4, 4), m2(4, 5);
  EXPECT_THROW(exchange(a, b, m), DimensionError);
  EXPECT_THROW(exchange(a, c, m), DimensionError);
  EXPECT_THROW(exchange(a, a, m2), DimensionError);
}

TEST(Exchange, BackgroundDiffIsZeroAt8Bit) {
  std::mt19937_64 gen(24);
  const auto orig = oracle::random_image(gen, 16, 16, 3);
  const auto fake = oracle::random_image(gen, 16, 16, 3);
  const auto mask = oracle::random_mask(gen, 16, 16);
  const auto out = exchange(orig, fake, mask);
  const auto d = diff_map(orig, out);
  const auto ob = orig.to_bytes(), eb = out.to_bytes();
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x)
      if (!mask.at(x, y)) {
        EXPECT_EQ(d.at(x, y), 0.0);
        for (int k = 0; k < 3; ++k) EXPECT_EQ(ob[(y * 16 + x) * 3 + k], eb[(y * 16 + x) * 3 + k]);
      }
}

TEST(DiffMap, ChannelMeanOfAbsoluteDifference) {
  const RasterImage a(1, 1, 3, std::vector<double>{0.0, 0.5, 1.0});
  const RasterImage b(1, 1, 3, std::vector<double>{0.3, 0.5, 0.4});
  EXPECT_NEAR(diff_map(a, b).at(0, 0), (0.3 + 0.0 + 0.6) / 3.0, 1e-15);
  EXPECT_THROW(diff_map(a, RasterImage(1, 1, 1)), DimensionError);
}

TEST(MaskRatio, Fraction) {
  BinaryMask m(4, 5);
  m.set(0, 0, true);
  m.set(1, 0, true);
  EXPECT_DOUBLE_EQ(mask_ratio(m), 0.1);
  EXPECT_THROW(mask_ratio(BinaryMask()), ParameterError);
}

TEST(EdgeMatte, SupportedOnBandOnly) {
  BinaryMask m(20, 20);
  for (int y = 6; y < 14; ++y)
    for (int x = 6; x < 14; ++x) m.set(x, y, true);
  const auto band = edge_band(m, 2);
  const auto alpha = edge_matte(m, 2, 5);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) {
      if (!band.at(x, y)) EXPECT_EQ(alpha.at(x, y), 0.0);
      else EXPECT_GT(alpha.at(x, y), 0.0);
    }
  EXPECT_EQ(edge_band(m, 0).count(), 0u);
  EXPECT_THROW(edge_matte(m, 2, 4), ParameterError);
  EXPECT_THROW(edge_band(m, -1), ParameterError);
}

// Straight per-pixel reference for the feathered blend, written without the
// library's separable convolution.
RasterImage soft_reference(const RasterImage& orig, const RasterImage& fake,
                           const BinaryMask& mask, int band_width, int ksize) {
  const int w = orig.width(), h = orig.height(), c = orig.channels();
  const int r = ksize / 2;
  const double sigma = 0.3 * ((ksize - 1) * 0.5 - 1.0) + 0.8;
  std::vector<double> k1(ksize);
  double ks = 0.0;
  for (int i = -r; i <= r; ++i) ks += k1[i + r] = std::exp(-i * i / (2 * sigma * sigma));
  for (double& v : k1) v /= ks;
  auto refl = [](int i, int n) {
    while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
    return i;
  };
  const auto band = edge_band(mask, band_width);
  auto hard = exchange(orig, fake, mask);
  std::vector<double> out(hard.samples().begin(), hard.samples().end());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!band.at(x, y)) continue;
      double a = 0.0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          a += k1[dx + r] * k1[dy + r] * (band.at(refl(x + dx, w), refl(y + dy, h)) ? 1.0 : 0.0);
      for (int ch = 0; ch < c; ++ch) {
        double b = 0.0;
        for (int dy = -r; dy <= r; ++dy)
          for (int dx = -r; dx <= r; ++dx)
            b += k1[dx + r] * k1[dy + r] * hard.at(refl(x + dx, w), refl(y + dy, h), ch);
        out[(y * w + x) * c + ch] = hard.at(x, y, ch) * (1 - a) + b * a;
      }
    }
  return RasterImage(w, h, c, out);
}

TEST(SoftExchange, MatchesDirectReferenceWithinOneLevel) {
  std::mt19937_64 gen(25);
  for (int trial = 0; trial < 5; ++trial) {
    const auto orig = oracle::random_image(gen, 24, 20, 3);
    const auto fake = oracle::random_image(gen, 24, 20, 3);
    BinaryMask m(24, 20);
    for (int y = 5; y < 15; ++y)
      for (int x = 4 + trial; x < 18; ++x) m.set(x, y, true);
    const auto got = soft_exchange(orig, fake, m, 2, 5);
    const auto ref = soft_reference(orig, fake, m, 2, 5);
    for (std::size_t i = 0; i < got.samples().size(); ++i)
      EXPECT_LE(std::abs(got.samples()[i] - ref.samples()[i]), 1.0 / 255.0 + 1e-12);
  }
}

TEST(SoftExchange, ExactOutsideBandAndZeroWidthIsHard) {
  std::mt19937_64 gen(26);
  const auto orig = oracle::random_image(gen, 20, 20, 1);
  const auto fake = oracle::random_image(gen, 20, 20, 1);
  BinaryMask m(20, 20);
  for (int y = 8; y < 12; ++y)
    for (int x = 8; x < 12; ++x) m.set(x, y, true);
  EXPECT_EQ(soft_exchange(orig, fake, m, 0, 5), exchange(orig, fake, m));
  const auto soft = soft_exchange(orig, fake, m);
  const auto band = edge_band(m, 2);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x)
      if (!band.at(x, y)) {
        EXPECT_EQ(soft.at(x, y), m.at(x, y) ? fake.at(x, y) : orig.at(x, y));
      }
  for (double v : soft.samples()) EXPECT_EQ(v, snap_u8(v));
}

}  // namespace
}  // namespace inpx
