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

#include "hvpf/motion.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "hvpf/error.hpp"
#include "hvpf/parallel.hpp"

namespace hvpf {

namespace {
constexpr float kFloMagic = 202021.25f;
}

FlowField block_match(const Image& prev, const Image& next, int block, int radius) {
  if (prev.width != next.width || prev.height != next.height)
    throw InputError("block_match: frame size mismatch");
  if (block < 4) throw InputError("block_match: block must be >= 4");
  if (radius < 1) throw InputError("block_match: radius must be >= 1");

  FlowField flow;
  flow.cell_size = block;
  flow.width = (next.width + block - 1) / block;
  flow.height = (next.height + block - 1) / block;
  flow.u.assign(flow.sample_count(), 0.0);
  flow.v.assign(flow.sample_count(), 0.0);

  parallel_for(static_cast<size_t>(flow.height), [&](size_t row) {
    int by = static_cast<int>(row);
    int y0 = by * block;
    int y1 = std::min(y0 + block, next.height);
    for (int bx = 0; bx < flow.width; ++bx) {
      int x0 = bx * block;
      int x1 = std::min(x0 + block, next.width);

      double best_sad = std::numeric_limits<double>::infinity();
      int best_dx = 0, best_dy = 0;
      long best_mag2 = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          double sad = 0.0;
          for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x)
              sad += std::fabs(next.at(x, y) - prev.at_clamped(x - dx, y - dy));
          long mag2 = static_cast<long>(dx) * dx + static_cast<long>(dy) * dy;
          bool better = sad < best_sad ||
                        (sad == best_sad &&
                         (mag2 < best_mag2 ||
                          (mag2 == best_mag2 &&
                           (dy < best_dy || (dy == best_dy && dx < best_dx)))));
          if (better) {
            best_sad = sad;
            best_dx = dx;
            best_dy = dy;
            best_mag2 = mag2;
          }
        }
      }
      flow.u[row * flow.width + bx] = best_dx;
      flow.v[row * flow.width + bx] = best_dy;
    }
  });
  return flow;
}

double patch_mean_speed(const FlowField& flow, int x0, int y0, int w, int h) {
  if (flow.sample_count() == 0) throw InputError("patch_mean_speed: empty flow");
  double sum = 0.0;
  long count = 0;
  for (int j = 0; j < flow.height; ++j) {
    double cy = (j + 0.5) * flow.cell_size;
    if (cy < y0 || cy >= y0 + h) continue;
    for (int i = 0; i < flow.width; ++i) {
      double cx = (i + 0.5) * flow.cell_size;
      if (cx < x0 || cx >= x0 + w) continue;
      size_t idx = static_cast<size_t>(j) * flow.width + i;
      sum += std::hypot(flow.u[idx], flow.v[idx]);
      count += 1;
    }
  }
  if (count > 0) return sum / count;

  // Patch smaller than a flow cell: use the nearest sample.
  double px = x0 + w / 2.0, py = y0 + h / 2.0;
  int i = std::clamp(static_cast<int>(px / flow.cell_size), 0, flow.width - 1);
  int j = std::clamp(static_cast<int>(py / flow.cell_size), 0, flow.height - 1);
  size_t idx = static_cast<size_t>(j) * flow.width + i;
  return std::hypot(flow.u[idx], flow.v[idx]);
}

namespace {

FlowField load_flow_binary(std::ifstream& in, const std::string& name) {
  float magic = 0.0f;
  int32_t w = 0, h = 0;
  in.read(reinterpret_cast<char*>(&magic), sizeof magic);
  if (!in || magic != kFloMagic)
    throw FormatError("flow file " + name + ": bad magic");
  in.read(reinterpret_cast<char*>(&w), sizeof w);
  in.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!in || w <= 0 || h <= 0)
    throw FormatError("flow file " + name + ": bad dimensions");

  FlowField flow;
  flow.width = w;
  flow.height = h;
  flow.cell_size = 1;
  flow.u.resize(flow.sample_count());
  flow.v.resize(flow.sample_count());
  std::vector<float> interleaved(flow.sample_count() * 2);
  in.read(reinterpret_cast<char*>(interleaved.data()),
          static_cast<std::streamsize>(interleaved.size() * sizeof(float)));
  if (!in) throw FormatError("flow file " + name + ": truncated payload");
  for (size_t i = 0; i < flow.sample_count(); ++i) {
    flow.u[i] = interleaved[2 * i];
    flow.v[i] = interleaved[2 * i + 1];
    if (!std::isfinite(flow.u[i]) || !std::isfinite(flow.v[i]))
      throw FormatError("flow file " + name + ": non-finite component");
  }
  return flow;
}

FlowField load_flow_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file.string());
  std::string line;
  struct Row {
    int x, y;
    double u, v;
  };
  std::vector<Row> rows;
  int line_no = 0;
  int max_x = -1, max_y = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line_no == 1 && line.find_first_not_of("xyuv, \t\r") == std::string::npos)
      continue;  // header
    Row r;
    char comma;
    std::istringstream ls(line);
    if (!(ls >> r.x >> comma >> r.y >> comma >> r.u >> comma >> r.v))
      throw FormatError("flow CSV " + file.string() + ": bad row at line " +
                        std::to_string(line_no));
    if (r.x < 0 || r.y < 0)
      throw FormatError("flow CSV " + file.string() + ": negative coordinate at line " +
                        std::to_string(line_no));
    max_x = std::max(max_x, r.x);
    max_y = std::max(max_y, r.y);
    rows.push_back(r);
  }
  if (rows.empty()) throw FormatError("flow CSV " + file.string() + ": no rows");

  FlowField flow;
  flow.width = max_x + 1;
  flow.height = max_y + 1;
  flow.cell_size = 1;
  flow.u.assign(flow.sample_count(), std::numeric_limits<double>::quiet_NaN());
  flow.v.assign(flow.sample_count(), std::numeric_limits<double>::quiet_NaN());
  for (const Row& r : rows) {
    size_t idx = static_cast<size_t>(r.y) * flow.width + r.x;
    flow.u[idx] = r.u;
    flow.v[idx] = r.v;
  }
  for (size_t i = 0; i < flow.sample_count(); ++i)
    if (std::isnan(flow.u[i]) || std::isnan(flow.v[i]))
      throw FormatError("flow CSV " + file.string() + ": incomplete grid");
  return flow;
}

}  // namespace

FlowField load_flow(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot open " + file.string());
  float magic = 0.0f;
  in.read(reinterpret_cast<char*>(&magic), sizeof magic);
  if (in && magic == kFloMagic) {
    in.seekg(0);
    return load_flow_binary(in, file.string());
  }
  return load_flow_csv(file);
}

void write_flo(const std::filesystem::path& file, const FlowField& flow) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + file.string());
  int32_t w = flow.width, h = flow.height;
  out.write(reinterpret_cast<const char*>(&kFloMagic), sizeof kFloMagic);
  out.write(reinterpret_cast<const char*>(&w), sizeof w);
  out.write(reinterpret_cast<const char*>(&h), sizeof h);
  for (size_t i = 0; i < flow.sample_count(); ++i) {
    float u = static_cast<float>(flow.u[i]);
    float v = static_cast<float>(flow.v[i]);
    out.write(reinterpret_cast<const char*>(&u), sizeof u);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  if (!out) throw InputError("short write to " + file.string());
}

}  // namespace hvpf
