// Copyright (c) the hvpf authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hvpf/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hvpf/error.hpp"

namespace hvpf {

namespace {

std::vector<unsigned char> read_all_bytes(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot open " + file.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

struct PngMemReader {
  const unsigned char* data;
  size_t size;
  size_t pos;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t len) {
  auto* r = static_cast<PngMemReader*>(png_get_io_ptr(png));
  if (r->pos + len > r->size) png_error(png, "truncated PNG stream");
  std::memcpy(out, r->data + r->pos, len);
  r->pos += len;
}

void png_mem_write(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void png_mem_flush(png_structp) {}

Raster8 decode_png(const std::vector<unsigned char>& bytes, const std::string& name) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw FormatError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw FormatError("libpng init failed");
  }
  std::vector<png_bytep> rows;
  Raster8 raster;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("malformed PNG: " + name);
  }
  PngMemReader reader{bytes.data(), bytes.size(), 0};
  png_set_read_fn(png, &reader, png_mem_read);
  png_read_info(png, info);

  png_uint_32 w = png_get_image_width(png, info);
  png_uint_32 h = png_get_image_height(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  int color_type = png_get_color_type(png, info);

  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  color_type = png_get_color_type(png, info);
  int channels = (color_type == PNG_COLOR_TYPE_GRAY) ? 1 : 3;

  raster.width = static_cast<int>(w);
  raster.height = static_cast<int>(h);
  raster.channels = channels;
  raster.data.resize(static_cast<size_t>(w) * h * channels);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y)
    rows[y] = raster.data.data() + static_cast<size_t>(y) * w * channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return raster;
}

// PGM: binary P5 and ascii P2, maxval <= 255.
Raster8 decode_pgm(const std::vector<unsigned char>& bytes, const std::string& name) {
  size_t pos = 0;
  auto fail = [&](const char* why) -> void {
    throw FormatError("malformed PGM " + name + ": " + why);
  };
  auto next_token = [&]() -> std::string {
    for (;;) {
      while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    size_t start = pos;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) ++pos;
    if (start == pos) fail("truncated header");
    return std::string(bytes.begin() + start, bytes.begin() + pos);
  };

  auto next_int = [&]() -> int {
    try {
      return std::stoi(next_token());
    } catch (const std::logic_error&) {
      fail("bad header number");
      return 0;
    }
  };

  std::string magic = next_token();
  bool binary = magic == "P5";
  if (!binary && magic != "P2") fail("bad magic");
  int w = next_int();
  int h = next_int();
  int maxval = next_int();
  if (w <= 0 || h <= 0) fail("bad dimensions");
  if (maxval <= 0 || maxval > 255) fail("maxval out of range");

  Raster8 raster;
  raster.width = w;
  raster.height = h;
  raster.channels = 1;
  raster.data.resize(static_cast<size_t>(w) * h);
  if (binary) {
    ++pos;  // single whitespace byte after maxval
    if (pos + raster.data.size() > bytes.size()) fail("truncated payload");
    std::memcpy(raster.data.data(), bytes.data() + pos, raster.data.size());
  } else {
    for (size_t i = 0; i < raster.data.size(); ++i) {
      int v = next_int();
      if (v < 0 || v > maxval) fail("sample out of range");
      raster.data[i] = static_cast<uint8_t>(v);
    }
  }
  if (maxval != 255)
    for (auto& v : raster.data)
      v = static_cast<uint8_t>(v * 255 / maxval);
  return raster;
}

}  // namespace

Raster8 read_raster(const std::filesystem::path& file) {
  std::vector<unsigned char> bytes = read_all_bytes(file);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0)
    return decode_png(bytes, file.string());
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '2'))
    return decode_pgm(bytes, file.string());
  throw FormatError("unsupported image format: " + file.string());
}

std::vector<unsigned char> encode_gray_png(const Raster8& gray) {
  if (gray.channels != 1) throw InputError("encode_gray_png: expected 1 channel");
  if (gray.width <= 0 || gray.height <= 0) throw InputError("encode_gray_png: empty image");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw FormatError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw FormatError("libpng init failed");
  }
  std::vector<unsigned char> out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw FormatError("PNG encode failed");
  }
  png_set_write_fn(png, &out, png_mem_write, png_mem_flush);
  png_set_IHDR(png, info, gray.width, gray.height, 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < gray.height; ++y)
    png_write_row(png, const_cast<png_bytep>(gray.data.data() +
                                             static_cast<size_t>(y) * gray.width));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

namespace {

std::vector<unsigned char> encode_rgb_png(const Raster8& rgb) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw FormatError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw FormatError("libpng init failed");
  }
  std::vector<unsigned char> out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw FormatError("PNG encode failed");
  }
  png_set_write_fn(png, &out, png_mem_write, png_mem_flush);
  png_set_IHDR(png, info, rgb.width, rgb.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < rgb.height; ++y)
    png_write_row(png, const_cast<png_bytep>(rgb.data.data() +
                                             static_cast<size_t>(y) * rgb.width * 3));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace

void write_raster(const std::filesystem::path& file, const Raster8& raster) {
  std::string ext = file.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(c));
  if (ext == ".png") {
    std::vector<unsigned char> bytes =
        raster.channels == 1 ? encode_gray_png(raster) : encode_rgb_png(raster);
    write_file_atomic(file, bytes.data(), bytes.size());
    return;
  }
  if (ext == ".pgm") {
    if (raster.channels != 1) throw InputError("PGM output requires a gray raster");
    std::ostringstream header;
    header << "P5\n" << raster.width << " " << raster.height << "\n255\n";
    std::string head = header.str();
    std::vector<unsigned char> bytes(head.begin(), head.end());
    bytes.insert(bytes.end(), raster.data.begin(), raster.data.end());
    write_file_atomic(file, bytes.data(), bytes.size());
    return;
  }
  throw InputError("unsupported output extension: " + file.string());
}

void write_file_atomic(const std::filesystem::path& file, const void* bytes, size_t size) {
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out.write(static_cast<const char*>(bytes), static_cast<std::streamsize>(size));
    if (!out) throw InputError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

void write_file_atomic(const std::filesystem::path& file, const std::string& text) {
  write_file_atomic(file, text.data(), text.size());
}

}  // namespace hvpf
