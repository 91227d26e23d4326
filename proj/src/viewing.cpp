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

#include "hvpf/viewing.hpp"

#include <cmath>

#include "hvpf/error.hpp"

#include "json.hpp"

namespace hvpf {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInchesPerMeter = 39.37007874015748;
}  // namespace

void ViewingConditions::validate() const {
  if (width_px <= 0 || height_px <= 0)
    throw ConfigError("viewing: resolution must be positive");
  if (!(diagonal_m > 0.0)) throw ConfigError("viewing: diagonal must be positive");
  if (!(distance_m > 0.0)) throw ConfigError("viewing: distance must be positive");
  if (!(black_level >= 0.0) || !(peak_luminance > black_level))
    throw ConfigError("viewing: need peak_luminance > black_level >= 0");
  if (!(gamma > 0.0)) throw ConfigError("viewing: gamma must be positive");
  if (!(fps >= 0.0)) throw ConfigError("viewing: fps must be >= 0");
  double ppd = pixels_per_degree(*this);
  if (!std::isfinite(ppd) || !(ppd > 0.0))
    throw ConfigError("viewing: derived pixels_per_degree is not positive/finite");
}

ViewingConditions viewing_from_json_text(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("viewing JSON: ") + e.what());
  }
  ViewingConditions vc;
  try {
    if (j.contains("diagonal_m"))
      vc.diagonal_m = j.at("diagonal_m").get<double>();
    else if (j.contains("diagonal_in"))
      vc.diagonal_m = j.at("diagonal_in").get<double>() / kInchesPerMeter;
    else
      throw FormatError("viewing JSON: need diagonal_in or diagonal_m");
    vc.width_px = j.at("res_w").get<int>();
    vc.height_px = j.at("res_h").get<int>();
    vc.distance_m = j.at("distance_cm").get<double>() / 100.0;
    if (j.contains("peak_nits")) vc.peak_luminance = j.at("peak_nits").get<double>();
    if (j.contains("black_nits")) vc.black_level = j.at("black_nits").get<double>();
    if (j.contains("gamma")) vc.gamma = j.at("gamma").get<double>();
    if (j.contains("fps")) vc.fps = j.at("fps").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("viewing JSON: ") + e.what());
  }
  vc.validate();
  return vc;
}

double pixels_per_degree(const ViewingConditions& vc) {
  double aspect = std::hypot(static_cast<double>(vc.width_px),
                             static_cast<double>(vc.height_px));
  double width_m = vc.diagonal_m * vc.width_px / aspect;
  double px_per_m = vc.width_px / width_m;
  double meters_per_degree = 2.0 * vc.distance_m * std::tan(0.5 * kPi / 180.0);
  return px_per_m * meters_per_degree;
}

double nyquist_cpd(const ViewingConditions& vc) { return pixels_per_degree(vc) / 2.0; }

LuminanceImage decode_luminance(const Raster8& raster, const ViewingConditions& vc) {
  if (raster.width <= 0 || raster.height <= 0 || raster.data.empty())
    throw InputError("decode_luminance: zero-sized image");
  if (raster.channels != 1 && raster.channels != 3)
    throw InputError("decode_luminance: expected 1 or 3 channels");

  // Precompute the 256-entry code-to-luminance table.
  double range = vc.peak_luminance - vc.black_level;
  double lut[256];
  for (int c = 0; c < 256; ++c)
    lut[c] = vc.black_level + range * std::pow(c / 255.0, vc.gamma);
  lut[0] = vc.black_level;
  lut[255] = vc.peak_luminance;

  LuminanceImage out(raster.width, raster.height);
  const size_t n = raster.pixel_count();
  if (raster.channels == 1) {
    for (size_t i = 0; i < n; ++i) out.data[i] = lut[raster.data[i]];
  } else {
    for (size_t i = 0; i < n; ++i) {
      // Rec.709 luma on code values, then the display transfer function.
      double y = 0.2126 * raster.data[3 * i] + 0.7152 * raster.data[3 * i + 1] +
                 0.0722 * raster.data[3 * i + 2];
      out.data[i] = vc.black_level + range * std::pow(y / 255.0, vc.gamma);
    }
  }
  return out;
}

double eccentricity_deg(double px, double py, double gaze_x, double gaze_y, double ppd) {
  return std::hypot(px - gaze_x, py - gaze_y) / ppd;
}

Image eccentricity_field(double gaze_x, double gaze_y, int width_px, int height_px,
                         double ppd) {
  if (gaze_x < 0.0 || gaze_y < 0.0 || gaze_x > width_px - 1 || gaze_y > height_px - 1)
    throw InputError("eccentricity_field: gaze outside the raster");
  Image field(width_px, height_px);
  for (int y = 0; y < height_px; ++y)
    for (int x = 0; x < width_px; ++x)
      field.at(x, y) = eccentricity_deg(x, y, gaze_x, gaze_y, ppd);
  return field;
}

double retinal_velocity(double v_px_per_frame, const ViewingConditions& vc) {
  double speed = std::fabs(v_px_per_frame);
  if (speed == 0.0) return 0.0;
  if (vc.fps <= 0.0)
    throw ConfigError("retinal_velocity: fps is 0 but pixel velocity is nonzero");
  return speed * vc.fps / pixels_per_degree(vc);
}

}  // namespace hvpf
