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

#ifndef HVPF_IMAGE_HPP_
#define HVPF_IMAGE_HPP_

#include <algorithm>
#include <cstdint>
#include <vector>

namespace hvpf {

// Dense row-major double-precision image plane.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

  // Edge-replicated access.
  double at_clamped(int x, int y) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return at(x, y);
  }

  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
  bool empty() const { return width <= 0 || height <= 0; }
};

// An Image whose samples are luminance in cd/m^2, inside the display's
// [black_level, peak_luminance] range.
using LuminanceImage = Image;

// 8-bit raster as decoded from PNG/PGM. channels is 1 (gray) or 3 (RGB).
struct Raster8 {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<uint8_t> data;  // row-major, interleaved

  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

}  // namespace hvpf

#endif  // HVPF_IMAGE_HPP_
