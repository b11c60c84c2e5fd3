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

// PNG / baseline JPEG codecs over RasterImage, plus mask and map export.
//
// Decoding and encoding go through memory buffers so that files are always
// written with write-temp-then-rename and never left half written.

#ifndef INPX_IO_HPP_
#define INPX_IO_HPP_

#include <algorithm>
#include <csetjmp>
#include <cstdlib>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>
#include <unistd.h>

#include "inpx/error.hpp"
#include "inpx/image.hpp"

namespace inpx {

enum class ImageFormat { kPng, kJpeg };

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path.string());
  return bytes;
}

/// Writes `bytes` to a sibling temporary and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path,
                              std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failure on " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

inline void write_text_atomic(const std::filesystem::path& path,
                              const std::string& text) {
  write_file_atomic(path, std::span<const std::uint8_t>(
                              reinterpret_cast<const std::uint8_t*>(text.data()),
                              text.size()));
}

// ---------------------------------------------------------------- PNG

inline RasterImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    std::string msg = img.message;
    png_image_free(&img);
    throw FormatError("png: " + msg);
  }
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  if (img.width == 0 || img.height == 0) {
    png_image_free(&img);
    throw FormatError("png: zero-dimension image");
  }
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  // Transparent pixels are flattened onto white.
  png_color white{255, 255, 255};
  if (!png_image_finish_read(&img, &white, buf.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw FormatError("png: " + msg);
  }
  return RasterImage::from_bytes(static_cast<int>(img.width),
                                 static_cast<int>(img.height), channels, buf);
}

inline std::vector<std::uint8_t> encode_png(const RasterImage& image) {
  if (image.empty()) throw ParameterError("cannot encode an empty image");
  auto bytes = image.to_bytes();
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, bytes.data(), 0,
                                 nullptr)) {
    throw FormatError(std::string("png: ") + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, bytes.data(), 0,
                                 nullptr)) {
    throw FormatError(std::string("png: ") + img.message);
  }
  out.resize(size);
  return out;
}

// ---------------------------------------------------------------- JPEG

namespace detail {

struct JpegErrorManager {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Corrupt-data warnings (level -1), e.g. a truncated stream that libjpeg
// would otherwise pad with gray, are promoted to errors.
inline void jpeg_strict_message(j_common_ptr cinfo, int level) {
  if (level < 0) cinfo->err->error_exit(cinfo);
}

inline void check_quality(int quality) {
  if (quality < 1 || quality > 100) {
    throw ParameterError("jpeg quality must be in 1..100, got " +
                         std::to_string(quality));
  }
}

}  // namespace detail

// libjpeg reports errors by longjmp; no C++ frame with live destructors sits
// between the libjpeg calls below and their setjmp target.

inline RasterImage decode_jpeg(std::span<const std::uint8_t> bytes) {
  jpeg_decompress_struct cinfo{};
  detail::JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = detail::jpeg_error_exit;
  err.pub.emit_message = detail::jpeg_strict_message;
  std::vector<std::uint8_t> buf;
  int width = 0, height = 0, channels = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw FormatError(std::string("jpeg: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space =
      cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  cinfo.dct_method = JDCT_ISLOW;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  channels = cinfo.output_components;
  buf.resize(static_cast<std::size_t>(width) * height * channels);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = buf.data() + static_cast<std::size_t>(cinfo.output_scanline) *
                                    width * channels;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  if (width == 0 || height == 0) throw FormatError("jpeg: zero-dimension image");
  return RasterImage::from_bytes(width, height, channels, buf);
}

/// Baseline JPEG with IJG quality scaling of the Annex K tables. Colour
/// images use the library default 2x2 luma sampling (4:2:0).
inline std::vector<std::uint8_t> encode_jpeg(const RasterImage& image,
                                             int quality) {
  detail::check_quality(quality);
  if (image.empty()) throw ParameterError("cannot encode an empty image");
  const auto bytes = image.to_bytes();
  jpeg_compress_struct cinfo{};
  detail::JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = detail::jpeg_error_exit;
  err.pub.emit_message = detail::jpeg_strict_message;
  unsigned char* mem = nullptr;
  unsigned long mem_size = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(mem);
    throw FormatError(std::string("jpeg: ") + err.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &mem, &mem_size);
  cinfo.image_width = static_cast<JDIMENSION>(image.width());
  cinfo.image_height = static_cast<JDIMENSION>(image.height());
  cinfo.input_components = image.channels();
  cinfo.in_color_space = image.channels() == 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  cinfo.dct_method = JDCT_ISLOW;
  cinfo.optimize_coding = FALSE;
  jpeg_start_compress(&cinfo, TRUE);
  const std::size_t stride =
      static_cast<std::size_t>(image.width()) * image.channels();
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(bytes.data() +
                                        cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  std::vector<std::uint8_t> out(mem, mem + mem_size);
  std::free(mem);
  return out;
}

// ---------------------------------------------------------------- files

inline RasterImage decode_image(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kPngMagic[] = {0x89, 'P', 'N', 'G'};
  if (bytes.size() >= 4 && std::equal(std::begin(kPngMagic),
                                      std::end(kPngMagic), bytes.begin())) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 &&
      bytes[2] == 0xFF) {
    return decode_jpeg(bytes);
  }
  throw FormatError("unsupported image format (expected PNG or JPEG)");
}

inline RasterImage load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline void save_image(const RasterImage& image,
                       const std::filesystem::path& path,
                       ImageFormat format = ImageFormat::kPng,
                       int quality = 95) {
  if (format == ImageFormat::kJpeg) {
    detail::check_quality(quality);
    write_file_atomic(path, encode_jpeg(image, quality));
  } else {
    write_file_atomic(path, encode_png(image));
  }
}

/// Grayscale level at or above which a mask pixel counts as edited.
inline constexpr std::uint8_t kMaskThreshold = 128;

/// Binarizes a decoded image into a mask. Colour masks are reduced with
/// the Rec.601 luma weights before thresholding.
inline BinaryMask mask_from_image(const RasterImage& image) {
  BinaryMask mask(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      double v = image.at(x, y, 0);
      if (image.channels() == 3) {
        v = 0.299 * image.at(x, y, 0) + 0.587 * image.at(x, y, 1) +
            0.114 * image.at(x, y, 2);
      }
      mask.set(x, y, to_u8(v) >= kMaskThreshold);
    }
  }
  return mask;
}

inline RasterImage mask_to_image(const BinaryMask& mask) {
  std::vector<double> s(mask.pixel_count());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      s[static_cast<std::size_t>(y) * mask.width() + x] = mask.at(x, y) ? 1.0 : 0.0;
  return RasterImage(mask.width(), mask.height(), 1, std::move(s));
}

inline BinaryMask load_mask(const std::filesystem::path& path) {
  return mask_from_image(load_image(path));
}

inline void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  save_image(mask_to_image(mask), path);
}

/// Writes any unit-range plane (diff map, matte, saliency) as 8-bit gray.
template <typename Tag>
void save_unit_plane(const UnitPlane<Tag>& plane,
                     const std::filesystem::path& path) {
  save_image(RasterImage::from_plane(plane.plane()), path);
}

inline SaliencyMap load_saliency(const std::filesystem::path& path) {
  const RasterImage img = load_image(path);
  return SaliencyMap(img.channel(0));
}

}  // namespace inpx

#endif  // INPX_IO_HPP_
