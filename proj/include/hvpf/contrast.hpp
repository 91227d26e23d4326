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

#ifndef HVPF_CONTRAST_HPP_
#define HVPF_CONTRAST_HPP_

#include <vector>

#include "hvpf/csf.hpp"
#include "hvpf/image.hpp"
#include "hvpf/viewing.hpp"

namespace hvpf {

// Visual masking exponents.
constexpr double kMaskAlpha = 0.7;
constexpr double kMaskBeta = 0.2;

/// One octave band of the contrast pyramid. physical holds band-limited
/// contrast in the Peli sense: (G_i - expand(G_{i+1})) over the local
/// low-pass level plus a luminance floor.
struct ContrastBand {
  double center_freq_cpd = 0.0;
  Image gauss;       // G_i
  Image adapting;    // expand(G_{i+1}); doubles as local adapting luminance
  Image physical;    // C(f_i, p)
  Image normalized;  // C_n = C * S(...)          (after normalize_pyramid)
  Image masked;      // C_t = sign * |C_n|^a / (1+M)  (after apply_masking)
  Image mask_term;   // M = mean over neighbors of |C_n|^b
};

struct ContrastPyramid {
  std::vector<ContrastBand> bands;  // center_freq strictly decreasing
  Image residual;                   // top Gaussian level G_n
  double l_floor = 0.0;             // black_level + 0.01 cd/m^2
};

/// Gaussian pyramid by 5-tap binomial filtering and 2x decimation with
/// edge replication, and per-band Peli contrast. Band i is centered at
/// nyquist/2^(i+1) cpd. Requires n_levels >= 3 and
/// min(patch side) >= 2^n_levels.
ContrastPyramid build_pyramid(const LuminanceImage& patch,
                              const ViewingConditions& vc, int n_levels);

/// C_n(f_i, p) = C(f_i, p) * S(f_i, v * f_i, L_adapt(p), e). The temporal
/// frequency is the drifting-grating product of retinal speed (deg/s) and
/// band frequency; adapting luminance is the local low-pass level.
void normalize_pyramid(ContrastPyramid& pyr, const CsfModel& csf,
                       double velocity_deg_per_s, double eccentricity_deg);

/// C_t(f, p) = sign(C_n) * |C_n|^alpha / (1 + M(f, p)) with
/// M(f, p) = mean over all other same-band positions of |C_n|^beta.
/// A single-sample band gets M = 0.
void apply_masking(ContrastPyramid& pyr, double alpha = kMaskAlpha,
                   double beta = kMaskBeta);

// Pyramid internals shared with tests (reduce/expand round the same
// dyadic weights, so a constant patch yields exactly zero contrast).
Image pyramid_reduce(const Image& img);
Image pyramid_expand(const Image& img, int out_w, int out_h);

}  // namespace hvpf

#endif  // HVPF_CONTRAST_HPP_
