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

#ifndef HVPF_VIEWING_HPP_
#define HVPF_VIEWING_HPP_

#include <string>

#include "hvpf/image.hpp"

namespace hvpf {

/// Display and observer model. The display transfer function is a gamma
/// power law with an additive black level; pixels are assumed square.
struct ViewingConditions {
  double diagonal_m = 0.0;     // display diagonal, meters
  int width_px = 0;            // horizontal resolution
  int height_px = 0;           // vertical resolution
  double peak_luminance = 400.0;  // cd/m^2
  double black_level = 0.4;       // cd/m^2
  double gamma = 2.2;
  double distance_m = 0.0;     // viewing distance, meters
  double fps = 0.0;            // frames per second; 0 for stills

  // Throws ConfigError when any invariant is violated.
  void validate() const;
};

// Parses the viewing JSON object (keys: diagonal_in or diagonal_m, res_w,
// res_h, peak_nits, black_nits, gamma, distance_cm, fps) and validates it.
ViewingConditions viewing_from_json_text(const std::string& json_text);

/// Pixels subtended by one degree of visual angle at the configured
/// distance: horizontal pixel density times 2*d*tan(0.5 deg).
double pixels_per_degree(const ViewingConditions& vc);

/// Highest displayable spatial frequency, cycles per degree.
double nyquist_cpd(const ViewingConditions& vc);

/// 8-bit code to luminance: L = black + (peak - black) * (code/255)^gamma.
/// Color rasters are reduced to Rec.709 luma before decoding.
LuminanceImage decode_luminance(const Raster8& raster, const ViewingConditions& vc);

/// Eccentricity of one pixel relative to the gaze, degrees. Uses the
/// flat-screen small-angle form distance_px / ppd (error < 5% inside 30 deg).
double eccentricity_deg(double px, double py, double gaze_x, double gaze_y, double ppd);

/// Per-pixel eccentricity map for a raster of the given resolution.
/// Throws InputError when the gaze lies outside the raster.
Image eccentricity_field(double gaze_x, double gaze_y, int width_px, int height_px,
                         double ppd);

/// Pixel velocity magnitude (px/frame) to retinal velocity (deg/s).
/// Throws ConfigError when fps is 0 and the velocity is nonzero.
double retinal_velocity(double v_px_per_frame, const ViewingConditions& vc);

}  // namespace hvpf

#endif  // HVPF_VIEWING_HPP_
