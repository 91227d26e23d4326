#include <cmath>

#include "doctest.h"
#include "hvpf/error.hpp"
#include "hvpf/viewing.hpp"
#include "support/synth.hpp"

using namespace hvpf;

namespace {

ViewingConditions reference_display() {
  // 27-inch 16:9 UHD panel at 60 cm.
  ViewingConditions vc;
  vc.diagonal_m = 27.0 * 0.0254;
  vc.width_px = 3840;
  vc.height_px = 2160;
  vc.peak_luminance = 400.0;
  vc.black_level = 0.4;
  vc.gamma = 2.2;
  vc.distance_m = 0.6;
  vc.fps = 24.0;
  return vc;
}

Raster8 single_pixel(uint8_t code) {
  Raster8 r;
  r.width = r.height = 1;
  r.channels = 1;
  r.data = {code};
  return r;
}

}  // namespace

TEST_SUITE("viewing") {

TEST_CASE("pixels per degree of the reference display") {
  ViewingConditions vc = reference_display();
  CHECK(std::fabs(pixels_per_degree(vc) - 67.3) <= 0.1);

  vc.distance_m = 1.2;
  CHECK(std::fabs(pixels_per_degree(vc) - 134.6) <= 0.2);

  vc.distance_m = 0.6;
  CHECK(std::fabs(nyquist_cpd(vc) - 33.6) <= 0.05);
}

TEST_CASE("ppd grows with distance and pixel density") {
  testing::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    ViewingConditions vc = reference_display();
    vc.diagonal_m = rng.range(0.1, 2.0);
    vc.width_px = static_cast<int>(rng.range(320, 7680));
    vc.height_px = static_cast<int>(rng.range(240, 4320));
    vc.distance_m = rng.range(0.2, 3.0);
    double base = pixels_per_degree(vc);

    ViewingConditions farther = vc;
    farther.distance_m *= rng.range(1.01, 3.0);
    CHECK(pixels_per_degree(farther) > base);

    ViewingConditions denser = vc;
    denser.width_px = static_cast<int>(vc.width_px * rng.range(1.1, 2.0));
    denser.height_px = static_cast<int>(vc.height_px * denser.width_px / vc.width_px);
    // Same panel, more pixels across it.
    CHECK(pixels_per_degree(denser) > base);
  }
}

TEST_CASE("luminance decode endpoints and midpoint") {
  ViewingConditions vc = reference_display();
  CHECK(decode_luminance(single_pixel(255), vc).at(0, 0) == doctest::Approx(400.0));
  CHECK(decode_luminance(single_pixel(0), vc).at(0, 0) == doctest::Approx(0.4));
  // 0.4 + 399.6 * (128/255)^2.2
  CHECK(decode_luminance(single_pixel(128), vc).at(0, 0) ==
        doctest::Approx(88.12).epsilon(0.001));
}

TEST_CASE("luminance decode is monotone with exact endpoints") {
  ViewingConditions vc = reference_display();
  Raster8 ramp;
  ramp.width = 256;
  ramp.height = 1;
  ramp.channels = 1;
  ramp.data.resize(256);
  for (int i = 0; i < 256; ++i) ramp.data[i] = static_cast<uint8_t>(i);
  LuminanceImage lum = decode_luminance(ramp, vc);
  CHECK(lum.at(0, 0) == vc.black_level);
  CHECK(lum.at(255, 0) == vc.peak_luminance);
  for (int i = 1; i < 256; ++i) CHECK(lum.at(i, 0) > lum.at(i - 1, 0));
}

TEST_CASE("color rasters reduce by Rec.709 luma before decoding") {
  ViewingConditions vc = reference_display();
  Raster8 rgb;
  rgb.width = rgb.height = 1;
  rgb.channels = 3;
  rgb.data = {100, 200, 50};
  double luma = 0.2126 * 100 + 0.7152 * 200 + 0.0722 * 50;
  double expected = 0.4 + 399.6 * std::pow(luma / 255.0, 2.2);
  CHECK(decode_luminance(rgb, vc).at(0, 0) == doctest::Approx(expected));
}

TEST_CASE("decode rejects an empty raster") {
  Raster8 empty;
  CHECK_THROWS_AS(decode_luminance(empty, reference_display()), InputError);
}

TEST_CASE("eccentricity examples") {
  double ppd = 67.3;
  CHECK(eccentricity_deg(10, 20, 10, 20, ppd) == 0.0);
  CHECK(eccentricity_deg(673 + 50, 50, 50, 50, ppd) == doctest::Approx(10.0));
  // Corner of a UHD raster seen from its center.
  double corner = eccentricity_deg(0, 0, 1920, 1080, ppd);
  CHECK(std::fabs(corner - 32.7) <= 0.05);
}

TEST_CASE("eccentricity field is zero only at gaze and radially monotone") {
  Image field = eccentricity_field(16, 12, 33, 25, 67.3);
  CHECK(field.at(16, 12) == 0.0);
  int zero_count = 0;
  for (double v : field.data) zero_count += v == 0.0;
  CHECK(zero_count == 1);
  // Walk rays out of the gaze: eccentricity never decreases.
  const int dirs[8][2] = {{1, 0}, {-1, 0}, {0, 1},  {0, -1},
                          {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (auto& d : dirs) {
    double prev = 0.0;
    int x = 16, y = 12;
    while (true) {
      x += d[0];
      y += d[1];
      if (x < 0 || y < 0 || x >= field.width || y >= field.height) break;
      CHECK(field.at(x, y) > prev);
      prev = field.at(x, y);
    }
  }
}

TEST_CASE("gaze outside the raster is rejected") {
  CHECK_THROWS_AS(eccentricity_field(40, 10, 33, 25, 67.3), InputError);
  CHECK_THROWS_AS(eccentricity_field(-1, 10, 33, 25, 67.3), InputError);
}

TEST_CASE("retinal velocity") {
  ViewingConditions vc = reference_display();
  CHECK(retinal_velocity(0.0, vc) == 0.0);

  ViewingConditions vc48 = vc;
  // Pick a distance giving ppd = 48 to keep the arithmetic round.
  vc48.distance_m = 0.6 * 48.0 / pixels_per_degree(vc);
  CHECK(pixels_per_degree(vc48) == doctest::Approx(48.0));
  CHECK(retinal_velocity(2.0, vc48) == doctest::Approx(2.0 * 24.0 / 48.0));

  double speed = std::hypot(2.0, 2.0);
  CHECK(retinal_velocity(speed, vc) ==
        doctest::Approx(speed * 24.0 / pixels_per_degree(vc)));
  CHECK(std::fabs(retinal_velocity(speed, vc) - 1.01) < 0.005);
}

TEST_CASE("retinal velocity is homogeneous of degree 1") {
  ViewingConditions vc = reference_display();
  testing::Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    double v = rng.range(0.01, 50.0);
    double s = rng.range(0.1, 10.0);
    CHECK(retinal_velocity(s * v, vc) ==
          doctest::Approx(s * retinal_velocity(v, vc)).epsilon(1e-12));
  }
}

TEST_CASE("zero fps with motion is a configuration error") {
  ViewingConditions vc = reference_display();
  vc.fps = 0.0;
  CHECK(retinal_velocity(0.0, vc) == 0.0);
  CHECK_THROWS_AS(retinal_velocity(1.0, vc), ConfigError);
}

TEST_CASE("viewing validation") {
  ViewingConditions vc = reference_display();
  CHECK_NOTHROW(vc.validate());
  ViewingConditions bad = vc;
  bad.peak_luminance = 0.2;  // below black level
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = vc;
  bad.distance_m = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = vc;
  bad.gamma = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("viewing JSON accepts inches or meters and distance in cm") {
  ViewingConditions a = viewing_from_json_text(
      R"({"diagonal_in": 27, "res_w": 3840, "res_h": 2160,
          "peak_nits": 400, "black_nits": 0.4, "gamma": 2.2,
          "distance_cm": 60, "fps": 24})");
  CHECK(std::fabs(pixels_per_degree(a) - 67.3) <= 0.1);
  CHECK(a.fps == 24.0);

  ViewingConditions b = viewing_from_json_text(
      R"({"diagonal_m": 0.6858, "res_w": 3840, "res_h": 2160, "distance_cm": 60})");
  CHECK(std::fabs(pixels_per_degree(b) - 67.3) <= 0.1);
  CHECK(b.peak_luminance == 400.0);  // defaults
  CHECK(b.black_level == 0.4);
  CHECK(b.gamma == 2.2);

  CHECK_THROWS_AS(viewing_from_json_text(R"({"res_w": 100})"), FormatError);
}

}  // TEST_SUITE
