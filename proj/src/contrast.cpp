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

#include "hvpf/contrast.hpp"

#include <cmath>

#include "hvpf/error.hpp"

namespace hvpf {

namespace {

// 5-tap binomial smoothing written as center + weighted deviations, so a
// constant signal passes through bit-exactly.
inline double smooth5(double m2, double m1, double c, double p1, double p2) {
  return c + ((m2 - c) + 4.0 * (m1 - c) + 4.0 * (p1 - c) + (p2 - c)) / 16.0;
}

Image reduce_rows_transpose(const Image& src) {
  const int out_w = (src.width + 1) / 2;
  Image out(src.height, out_w);
  for (int y = 0; y < src.height; ++y) {
    for (int ox = 0; ox < out_w; ++ox) {
      int x = 2 * ox;
      out.at(y, ox) = smooth5(src.at_clamped(x - 2, y), src.at_clamped(x - 1, y),
                              src.at(x, y), src.at_clamped(x + 1, y),
                              src.at_clamped(x + 2, y));
    }
  }
  return out;
}

Image expand_rows_transpose(const Image& src, int out_w) {
  Image out(src.height, out_w);
  const int n = src.width;
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < out_w; ++x) {
      int m = x / 2;
      if ((x & 1) == 0) {
        double c = src.at(m, y);
        double l = src.at_clamped(m - 1, y);
        double r = src.at_clamped(m + 1, y);
        out.at(y, x) = c + ((l - c) + (r - c)) / 8.0;
      } else {
        double c = src.at(m, y);
        double r = src.at_clamped(std::min(m + 1, n - 1), y);
        out.at(y, x) = c + (r - c) / 2.0;
      }
    }
  }
  return out;
}

}  // namespace

Image pyramid_reduce(const Image& img) {
  return reduce_rows_transpose(reduce_rows_transpose(img));
}

Image pyramid_expand(const Image& img, int out_w, int out_h) {
  return expand_rows_transpose(expand_rows_transpose(img, out_w), out_h);
}

ContrastPyramid build_pyramid(const LuminanceImage& patch,
                              const ViewingConditions& vc, int n_levels) {
  if (n_levels < 3) throw InputError("build_pyramid: need at least 3 levels");
  const int min_side = std::min(patch.width, patch.height);
  if (min_side < (1 << n_levels))
    throw InputError("build_pyramid: patch side must be >= 2^n_levels");

  ContrastPyramid pyr;
  pyr.l_floor = vc.black_level + 0.01;

  std::vector<Image> gauss(n_levels + 1);
  gauss[0] = patch;
  for (int i = 1; i <= n_levels; ++i) gauss[i] = pyramid_reduce(gauss[i - 1]);

  const double nyquist = nyquist_cpd(vc);
  pyr.bands.resize(n_levels);
  for (int i = 0; i < n_levels; ++i) {
    ContrastBand& band = pyr.bands[i];
    band.center_freq_cpd = nyquist / static_cast<double>(1 << (i + 1));
    band.gauss = gauss[i];
    band.adapting = pyramid_expand(gauss[i + 1], gauss[i].width, gauss[i].height);
    band.physical = Image(gauss[i].width, gauss[i].height);
    for (size_t p = 0; p < band.physical.data.size(); ++p)
      band.physical.data[p] = (band.gauss.data[p] - band.adapting.data[p]) /
                              (band.adapting.data[p] + pyr.l_floor);
  }
  pyr.residual = gauss[n_levels];
  return pyr;
}

void normalize_pyramid(ContrastPyramid& pyr, const CsfModel& csf,
                       double velocity_deg_per_s, double eccentricity_deg) {
  for (ContrastBand& band : pyr.bands) {
    band.normalized = Image(band.physical.width, band.physical.height);
    CsfQuery q;
    q.f_spatial_cpd = band.center_freq_cpd;
    q.f_temporal_hz = velocity_deg_per_s * band.center_freq_cpd;
    q.eccentricity_deg = eccentricity_deg;
    for (size_t p = 0; p < band.physical.data.size(); ++p) {
      q.luminance = std::max(band.adapting.data[p], pyr.l_floor);
      band.normalized.data[p] = band.physical.data[p] * csf.sensitivity(q);
    }
  }
}

void apply_masking(ContrastPyramid& pyr, double alpha, double beta) {
  for (ContrastBand& band : pyr.bands) {
    if (band.normalized.empty())
      throw InputError("apply_masking: normalize_pyramid must run first");
    const size_t n = band.normalized.data.size();
    band.masked = Image(band.normalized.width, band.normalized.height);
    band.mask_term = Image(band.normalized.width, band.normalized.height);

    std::vector<double> pow_beta(n);
    double sum_beta = 0.0;
    for (size_t p = 0; p < n; ++p) {
      pow_beta[p] = std::pow(std::fabs(band.normalized.data[p]), beta);
      sum_beta += pow_beta[p];
    }
    for (size_t p = 0; p < n; ++p) {
      double cn = band.normalized.data[p];
      double m = n > 1 ? (sum_beta - pow_beta[p]) / static_cast<double>(n - 1) : 0.0;
      double magnitude = std::pow(std::fabs(cn), alpha) / (1.0 + m);
      band.mask_term.data[p] = m;
      band.masked.data[p] = std::copysign(magnitude, cn);
    }
  }
}

}  // namespace hvpf
