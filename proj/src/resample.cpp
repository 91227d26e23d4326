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

#include "hvpf/resample.hpp"

#include <cmath>
#include <vector>

#include "hvpf/error.hpp"

namespace hvpf {

namespace {

// Horizontal pass helper: convolves rows of src with kernel, writes transposed
// so two passes give the full separable filter.
Image convolve_rows_transpose(const Image& src, const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size()) / 2;
  Image out(src.height, src.width);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t)
        acc += kernel[t + radius] * src.at_clamped(x + t, y);
      out.at(y, x) = acc;
    }
  }
  return out;
}

// Catmull-Rom kernel (bicubic with a = -0.5).
double catmull_rom(double x) {
  x = std::fabs(x);
  if (x < 1.0) return 1.5 * x * x * x - 2.5 * x * x + 1.0;
  if (x < 2.0) return -0.5 * x * x * x + 2.5 * x * x - 4.0 * x + 2.0;
  return 0.0;
}

// One resize axis: out length n_out from n_in with kernel scaling on
// downscale. Returns per-output-sample taps (index + weight).
struct Tap {
  int first;
  std::vector<double> weights;
};

std::vector<Tap> make_taps(int n_in, int n_out) {
  std::vector<Tap> taps(n_out);
  double scale = static_cast<double>(n_in) / n_out;
  double support_scale = std::max(1.0, scale);  // widen when minifying
  double support = 2.0 * support_scale;
  for (int o = 0; o < n_out; ++o) {
    double center = (o + 0.5) * scale - 0.5;
    int first = static_cast<int>(std::ceil(center - support));
    int last = static_cast<int>(std::floor(center + support));
    Tap& t = taps[o];
    t.first = first;
    t.weights.resize(last - first + 1);
    double sum = 0.0;
    for (int i = first; i <= last; ++i) {
      double w = catmull_rom((i - center) / support_scale);
      t.weights[i - first] = w;
      sum += w;
    }
    for (double& w : t.weights) w /= sum;
  }
  return taps;
}

Image resize_axis_transpose(const Image& src, int n_out) {
  std::vector<Tap> taps = make_taps(src.width, n_out);
  Image out(src.height, n_out);
  for (int y = 0; y < src.height; ++y) {
    for (int o = 0; o < n_out; ++o) {
      const Tap& t = taps[o];
      double acc = 0.0;
      for (size_t i = 0; i < t.weights.size(); ++i)
        acc += t.weights[i] * src.at_clamped(t.first + static_cast<int>(i), y);
      out.at(y, o) = acc;
    }
  }
  return out;
}

}  // namespace

Image gaussian_blur(const Image& img, double sigma_px) {
  if (!(sigma_px > 0.0)) throw InputError("gaussian_blur: sigma must be positive");
  int radius = std::max(1, static_cast<int>(std::ceil(5.0 * sigma_px)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double w = std::exp(-0.5 * (i * i) / (sigma_px * sigma_px));
    kernel[i + radius] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;
  return convolve_rows_transpose(convolve_rows_transpose(img, kernel), kernel);
}

Image resize_bicubic(const Image& img, int out_w, int out_h) {
  if (img.empty()) throw InputError("resize_bicubic: empty image");
  if (out_w <= 0 || out_h <= 0) throw InputError("resize_bicubic: bad output size");
  return resize_axis_transpose(resize_axis_transpose(img, out_w), out_h);
}

Image box_downscale(const Image& img, int k) {
  if (k <= 0) throw InputError("box_downscale: bad factor");
  int ow = (img.width + k - 1) / k;
  int oh = (img.height + k - 1) / k;
  Image out(ow, oh);
  for (int oy = 0; oy < oh; ++oy) {
    for (int ox = 0; ox < ow; ++ox) {
      int x0 = ox * k, y0 = oy * k;
      int x1 = std::min(x0 + k, img.width), y1 = std::min(y0 + k, img.height);
      double acc = 0.0;
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) acc += img.at(x, y);
      out.at(ox, oy) = acc / ((x1 - x0) * (y1 - y0));
    }
  }
  return out;
}

Image replicate_upscale(const Image& img, int out_w, int out_h) {
  Image out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    int sy = std::min(y * img.height / out_h, img.height - 1);
    for (int x = 0; x < out_w; ++x) {
      int sx = std::min(x * img.width / out_w, img.width - 1);
      out.at(x, y) = img.at(sx, sy);
    }
  }
  return out;
}

SurrogateOperator SurrogateOperator::identity() { return {}; }

SurrogateOperator SurrogateOperator::blur(double sigma_px) {
  SurrogateOperator op;
  op.kind = Kind::gaussian_blur;
  op.sigma_px = sigma_px;
  op.validate();
  return op;
}

SurrogateOperator SurrogateOperator::bicubic(int k) {
  SurrogateOperator op;
  op.kind = Kind::bicubic_down_up;
  op.k = k;
  op.validate();
  return op;
}

SurrogateOperator SurrogateOperator::box(int k) {
  SurrogateOperator op;
  op.kind = Kind::box_down_up;
  op.k = k;
  op.validate();
  return op;
}

SurrogateOperator SurrogateOperator::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (head == "identity" && arg.empty()) return identity();
    if (head == "blur") return blur(std::stod(arg));
    if (head == "bicubic") return bicubic(std::stoi(arg));
    if (head == "box") return box(std::stoi(arg));
  } catch (const std::logic_error&) {
    throw InputError("bad operator argument in '" + text + "'");
  }
  throw InputError("unknown operator '" + text +
                   "' (expected identity|blur:SIGMA|bicubic:K|box:K)");
}

void SurrogateOperator::validate() const {
  if (kind == Kind::gaussian_blur && !(sigma_px > 0.0))
    throw InputError("surrogate: blur sigma must be positive");
  if ((kind == Kind::bicubic_down_up || kind == Kind::box_down_up) &&
      k != 2 && k != 4 && k != 8)
    throw InputError("surrogate: k must be one of {2, 4, 8}");
}

int SurrogateOperator::scale_factor() const {
  return (kind == Kind::bicubic_down_up || kind == Kind::box_down_up) ? k : 1;
}

Image apply_surrogate(const SurrogateOperator& op, const Image& img) {
  switch (op.kind) {
    case SurrogateOperator::Kind::identity:
      return img;
    case SurrogateOperator::Kind::gaussian_blur:
      return gaussian_blur(img, op.sigma_px);
    case SurrogateOperator::Kind::bicubic_down_up: {
      int dw = (img.width + op.k - 1) / op.k;
      int dh = (img.height + op.k - 1) / op.k;
      return resize_bicubic(resize_bicubic(img, dw, dh), img.width, img.height);
    }
    case SurrogateOperator::Kind::box_down_up:
      return replicate_upscale(box_downscale(img, op.k), img.width, img.height);
  }
  throw InputError("apply_surrogate: unreachable");
}

}  // namespace hvpf
