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

#ifndef HVPF_MOTION_HPP_
#define HVPF_MOTION_HPP_

#include <filesystem>

#include "hvpf/image.hpp"

namespace hvpf {

/// Displacement field in pixels/frame. cell_size is the spacing of the
/// samples on the source raster: 1 for per-pixel fields, the block size
/// for block-matched fields. Sample (i, j) sits at the center of its cell.
struct FlowField {
  int width = 0;   // samples per row
  int height = 0;  // sample rows
  int cell_size = 1;
  std::vector<double> u, v;  // row-major

  size_t sample_count() const { return static_cast<size_t>(width) * height; }
  // Raster extent covered by the field.
  int raster_width() const { return width * cell_size; }
  int raster_height() const { return height * cell_size; }
};

/// Coarse SAD block matcher. Per block, the displacement in
/// [-radius, radius]^2 minimizing the sum of absolute differences between
/// the block in `next` and the shifted block in `prev`; ties break toward
/// the smaller displacement magnitude. Requires block >= 4, radius >= 1,
/// equal frame sizes.
FlowField block_match(const Image& prev, const Image& next, int block, int radius);

/// Mean displacement magnitude over the flow samples whose centers fall in
/// the patch rectangle; nearest sample when none do.
double patch_mean_speed(const FlowField& flow, int x0, int y0, int w, int h);

/// Reads a flow file: the binary ".flo" layout (magic float 202021.25,
/// int32 width/height, interleaved float32 u,v) or a CSV fallback with
/// columns x, y, u, v.
FlowField load_flow(const std::filesystem::path& file);

/// Writes the binary ".flo" layout.
void write_flo(const std::filesystem::path& file, const FlowField& flow);

}  // namespace hvpf

#endif  // HVPF_MOTION_HPP_
