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

#include <png.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include "inpx/csv.hpp"
#include "inpx/io.hpp"
#include "oracles.hpp"

namespace inpx {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("inpx_io_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST(Png, RoundTripIsLossless) {
  std::mt19937_64 gen(11);
  for (int c : {1, 3}) {
    const auto img = oracle::random_image(gen, 13, 9, c);
    const auto back = decode_png(encode_png(img));
    EXPECT_EQ(back, img);
  }
}

TEST(Png, AlphaFlattenedOntoWhite) {
  // 2x1 gray+alpha: opaque black, fully transparent black.
  std::vector<std::uint8_t> ga = {0, 255, 0, 0};
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = 2;
  img.height = 1;
  img.format = PNG_FORMAT_GA;
  png_alloc_size_t size = 0;
  ASSERT_TRUE(png_image_write_to_memory(&img, nullptr, &size, 0, ga.data(), 0, nullptr));
  std::vector<std::uint8_t> bytes(size);
  ASSERT_TRUE(png_image_write_to_memory(&img, bytes.data(), &size, 0, ga.data(), 0, nullptr));
  const auto decoded = decode_png(bytes);
  ASSERT_EQ(decoded.channels(), 1);
  EXPECT_EQ(decoded.at(0, 0), 0.0);
  EXPECT_EQ(decoded.at(1, 0), 1.0);
}

TEST(Jpeg, RoundTripIsClose) {
  RasterImage img(32, 32, 3, 0.0);
  std::vector<double> s(32 * 32 * 3);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x)
      for (int c = 0; c < 3; ++c) s[(y * 32 + x) * 3 + c] = snap_u8((x + y + 10 * c) / 100.0);
  img = RasterImage(32, 32, 3, s);
  const auto back = decode_jpeg(encode_jpeg(img, 95));
  ASSERT_TRUE(back.same_shape(img));
  double max_err = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    max_err = std::max(max_err, std::abs(back.samples()[i] - s[i]));
  EXPECT_LT(max_err, 8.0 / 255.0);
}

TEST(Jpeg, QualityOrdersError) {
  std::mt19937_64 gen(12);
  const auto img = oracle::random_image(gen, 32, 32, 1);
  auto err = [&](int q) {
    const auto back = decode_jpeg(encode_jpeg(img, q));
    double e = 0.0;
    for (std::size_t i = 0; i < img.samples().size(); ++i) {
      const double d = back.samples()[i] - img.samples()[i];
      e += d * d;
    }
    return e;
  };
  EXPECT_LT(err(95), err(50));
  EXPECT_LT(err(50), err(10));
}

TEST(Jpeg, RejectsBadQualityAndTruncation) {
  RasterImage img(16, 16, 1, 0.5);
  EXPECT_THROW(encode_jpeg(img, 0), ParameterError);
  EXPECT_THROW(encode_jpeg(img, 101), ParameterError);
  auto bytes = encode_jpeg(img, 80);
  bytes.resize(bytes.size() / 2);
  EXPECT_THROW(decode_jpeg(bytes), FormatError);
}

TEST(Decode, DetectsFormatByMagic) {
  RasterImage img(4, 4, 1, 0.2);
  EXPECT_EQ(decode_image(encode_png(img)), img);
  EXPECT_EQ(decode_image(encode_jpeg(img, 90)).width(), 4);
  const std::vector<std::uint8_t> junk = {'B', 'M', 0, 0, 0};
  EXPECT_THROW(decode_image(junk), FormatError);
  EXPECT_THROW(decode_image(std::vector<std::uint8_t>{}), FormatError);
}

TEST(Mask, ThresholdAt128) {
  std::vector<std::uint8_t> b = {0, 127, 128, 255};
  const auto m = mask_from_image(RasterImage::from_bytes(4, 1, 1, b));
  EXPECT_FALSE(m.at(0, 0));
  EXPECT_FALSE(m.at(1, 0));
  EXPECT_TRUE(m.at(2, 0));
  EXPECT_TRUE(m.at(3, 0));
}

TEST(Mask, ColourMasksUseLuma) {
  // Pure red has luma 0.299 * 255 = 76 -> off; white -> on.
  std::vector<std::uint8_t> b = {255, 0, 0, 255, 255, 255};
  const auto m = mask_from_image(RasterImage::from_bytes(2, 1, 3, b));
  EXPECT_FALSE(m.at(0, 0));
  EXPECT_TRUE(m.at(1, 0));
}

TEST_F(TempDir, FilesRoundTripAndNoTempLeftBehind) {
  std::mt19937_64 gen(13);
  const auto img = oracle::random_image(gen, 10, 6, 3);
  const auto png = dir_ / "a.png";
  save_image(img, png);
  EXPECT_EQ(load_image(png), img);

  const auto mask = oracle::random_mask(gen, 10, 6);
  save_mask(mask, dir_ / "m.png");
  EXPECT_EQ(load_mask(dir_ / "m.png"), mask);

  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir_)) {
    ++entries;
    EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos);
  }
  EXPECT_EQ(entries, 2);
}

TEST_F(TempDir, MissingFileIsIoError) {
  EXPECT_THROW(load_image(dir_ / "nope.png"), IoError);
  EXPECT_THROW(write_text_atomic(dir_ / "no_such_dir" / "x.json", "{}"), IoError);
}

TEST_F(TempDir, SaliencyLoadsAsUnitPlane) {
  std::vector<std::uint8_t> b = {0, 51, 255, 128};
  save_image(RasterImage::from_bytes(2, 2, 1, b), dir_ / "s.png");
  const auto s = load_saliency(dir_ / "s.png");
  EXPECT_DOUBLE_EQ(s.at(1, 0), 0.2);
  EXPECT_DOUBLE_EQ(s.at(0, 1), 1.0);
}

TEST(Csv, QuotedFieldsAndCrlf) {
  const auto t = parse_csv("a,b,c\r\n1,\"x,y\",\"he said \"\"hi\"\"\"\r\n\r\n2,,3\n");
  ASSERT_EQ(t.header.size(), 3u);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0].fields[1], "x,y");
  EXPECT_EQ(t.rows[0].fields[2], "he said \"hi\"");
  EXPECT_EQ(t.rows[1].fields[1], "");
  EXPECT_EQ(t.rows[1].line, 4);
  EXPECT_EQ(*t.column("c"), 2u);
  EXPECT_FALSE(t.column("d"));
}

TEST(Csv, Malformed) {
  EXPECT_THROW(parse_csv(""), FormatError);
  EXPECT_THROW(parse_csv("a,b\n\"open,1\n"), FormatError);
}

TEST(Csv, RelativePathsResolveAgainstManifest) {
  EXPECT_EQ(resolve_manifest_path("/data/set/m.csv", "img/a.png"),
            fs::path("/data/set/img/a.png"));
  EXPECT_EQ(resolve_manifest_path("/data/set/m.csv", "/abs/a.png"), fs::path("/abs/a.png"));
}

}  // namespace
}  // namespace inpx
