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

#include "hvpf/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hvpf/error.hpp"
#include "hvpf/falloff.hpp"
#include "hvpf/parallel.hpp"

#include "json.hpp"

namespace hvpf {

namespace {

constexpr double kTHatClampMax = 1.5;  // same overshoot clamp as the curves

// Overhead anchors: per-patch scheduling cost measured at two patch sizes.
constexpr double kOverheadAnchorSize1 = 10.0, kOverheadAnchorFlops1 = 39e3;
constexpr double kOverheadAnchorSize2 = 35.0, kOverheadAnchorFlops2 = 477e3;

std::array<double, 3> t_hat_from_curve_samples(const std::vector<double>& freqs,
                                               const std::vector<double>& values) {
  if (freqs.size() != values.size() || freqs.size() < 2)
    throw FormatError("profile samples: need matching freqs/values, length >= 2");
  for (size_t i = 1; i < freqs.size(); ++i)
    if (!(freqs[i] > freqs[i - 1]))
      throw FormatError("profile samples: freqs must be strictly increasing");
  std::array<double, 3> t_hat;
  for (int i = 0; i < 3; ++i) {
    double f = kBandFreqsCpp[i];
    double value;
    if (f <= freqs.front()) {
      value = values.front();
    } else if (f >= freqs.back()) {
      value = values.back();
    } else {
      size_t hi = std::lower_bound(freqs.begin(), freqs.end(), f) - freqs.begin();
      double t = (f - freqs[hi - 1]) / (freqs[hi] - freqs[hi - 1]);
      value = values[hi - 1] + t * (values[hi] - values[hi - 1]);
    }
    t_hat[i] = std::clamp(value, 0.0, kTHatClampMax);
  }
  return t_hat;
}

}  // namespace

ProfileSet::ProfileSet(std::vector<VariantProfile> profiles)
    : profiles_(std::move(profiles)) {
  if (profiles_.size() < 2)
    throw ConfigError("profiles: need at least 2 variants");
  int n_baseline = 0;
  for (size_t i = 0; i < profiles_.size(); ++i) {
    const VariantProfile& p = profiles_[i];
    if (!(p.cost_flops > 0.0))
      throw ConfigError("profiles: cost_flops must be positive (" + p.name + ")");
    double norm2 = 0.0;
    for (double t : p.t_hat) {
      if (t < 0.0 || t > kTHatClampMax || !std::isfinite(t))
        throw ConfigError("profiles: t_hat out of [0, 1.5] (" + p.name + ")");
      norm2 += t * t;
    }
    if (norm2 <= 0.0)
      throw ConfigError("profiles: t_hat must have positive norm (" + p.name + ")");
    for (size_t j = i + 1; j < profiles_.size(); ++j) {
      if (profiles_[j].id == p.id)
        throw ConfigError("profiles: duplicate id " + std::to_string(p.id));
      if (profiles_[j].cost_flops == p.cost_flops)
        throw ConfigError("profiles: costs must be pairwise distinct");
    }
    if (p.cost_flops < profiles_[cheapest_idx_].cost_flops) cheapest_idx_ = i;
    if (p.baseline_full) {
      ++n_baseline;
      baseline_idx_ = i;
    }
  }
  if (n_baseline > 1) throw ConfigError("profiles: more than one baseline_full");
  size_t max_idx = 0;
  for (size_t i = 1; i < profiles_.size(); ++i)
    if (profiles_[i].cost_flops > profiles_[max_idx].cost_flops) max_idx = i;
  if (n_baseline == 0) {
    baseline_idx_ = max_idx;
    profiles_[max_idx].baseline_full = true;
  } else if (baseline_idx_ != max_idx) {
    throw ConfigError("profiles: baseline_full must be the most expensive variant");
  }
}

ProfileSet ProfileSet::from_json_text(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
    if (!j.is_array()) throw FormatError("profiles JSON: expected an array");
    std::vector<VariantProfile> list;
    for (const auto& e : j) {
      VariantProfile p;
      p.id = e.at("id").get<int>();
      p.name = e.value("name", std::string("variant-") + std::to_string(p.id));
      p.cost_flops = e.at("cost_flops").get<double>();
      p.baseline_full = e.value("baseline", false);
      if (e.contains("t_hat")) {
        auto v = e.at("t_hat").get<std::vector<double>>();
        if (v.size() != 3) throw FormatError("profiles JSON: t_hat must have 3 entries");
        std::copy(v.begin(), v.end(), p.t_hat.begin());
      } else if (e.contains("atten")) {
        const auto& a = e.at("atten");
        double fa = a.at("a").get<double>(), fb = a.at("b").get<double>(),
               fc = a.at("c").get<double>();
        if (!(fa > 0.0)) throw FormatError("profiles JSON: atten.a must be positive");
        for (int i = 0; i < 3; ++i)
          p.t_hat[i] =
              std::clamp(eval_falloff(fa, fb, fc, kBandFreqsCpp[i]), 0.0, kTHatClampMax);
      } else if (e.contains("samples")) {
        const auto& s = e.at("samples");
        p.t_hat = t_hat_from_curve_samples(s.at("freqs").get<std::vector<double>>(),
                                           s.at("values").get<std::vector<double>>());
      } else {
        throw FormatError("profiles JSON: need one of t_hat, atten, samples");
      }
      list.push_back(std::move(p));
    }
    return ProfileSet(std::move(list));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("profiles JSON: ") + e.what());
  }
}

ProfileSet ProfileSet::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

const VariantProfile& ProfileSet::by_id(int id) const {
  for (const auto& p : profiles_)
    if (p.id == id) return p;
  throw ConfigError("profiles: unknown id " + std::to_string(id));
}

int ProfileSet::cost_rank(int id) const {
  const VariantProfile& me = by_id(id);
  int rank = 0;
  for (const auto& p : profiles_)
    if (p.cost_flops < me.cost_flops) ++rank;
  return rank;
}

double tolerable_contrast(double c_n, double mask_term, double alpha) {
  if (c_n < 0.0 || mask_term < 0.0)
    throw InputError("tolerable_contrast: magnitudes must be nonnegative");
  double excess = std::pow(c_n, alpha) - (1.0 + mask_term);
  if (excess <= 0.0) return 0.0;
  return std::pow(excess, 1.0 / alpha);
}

std::array<double, 3> tolerable_attenuation(const ContrastPyramid& pyr) {
  if (pyr.bands.size() < 3)
    throw InputError("tolerable_attenuation: need at least 3 bands");
  std::array<double, 3> t = {0.0, 0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    const ContrastBand& band = pyr.bands[i];
    if (band.mask_term.empty())
      throw InputError("tolerable_attenuation: apply_masking must run first");
    double worst = 0.0;
    for (size_t p = 0; p < band.normalized.data.size(); ++p) {
      double c_n = std::fabs(band.normalized.data[p]);
      if (c_n < kContrastFloor) continue;
      double ratio = tolerable_contrast(c_n, band.mask_term.data[p]) / c_n;
      worst = std::max(worst, ratio);
    }
    t[i] = std::min(worst, 1.0);
  }
  return t;
}

int select_variant(const std::array<double, 3>& t, const ProfileSet& profiles) {
  if (profiles.profiles().empty()) throw ConfigError("select_variant: no profiles");
  double t_norm = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
  if (t_norm == 0.0) return profiles.cheapest().id;

  std::vector<double> sims;
  sims.reserve(profiles.profiles().size());
  double max_sim = -2.0;
  for (const auto& p : profiles.profiles()) {
    double dot = 0.0, norm2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      dot += t[i] * p.t_hat[i];
      norm2 += p.t_hat[i] * p.t_hat[i];
    }
    double sim = dot / (t_norm * std::sqrt(norm2));
    sims.push_back(sim);
    max_sim = std::max(max_sim, sim);
  }
  const VariantProfile* best = nullptr;
  for (size_t i = 0; i < sims.size(); ++i) {
    if (sims[i] < max_sim - kSimilarityTie) continue;
    const VariantProfile& p = profiles.profiles()[i];
    if (best == nullptr || p.cost_flops < best->cost_flops) best = &p;
  }
  return best->id;
}

int default_patch_size_pre_upsampled(int receptive_field, int k) {
  if (receptive_field <= 0) throw InputError("default_patch_size: receptive field <= 0");
  if (k != 2 && k != 4 && k != 8)
    throw InputError("default_patch_size: k must be one of {2, 4, 8}");
  if (receptive_field % k != 0) {
    int rounded = (receptive_field + k - 1) / k;
    std::cerr << "warning: receptive field " << receptive_field
              << " not divisible by k=" << k << "; patch size rounded up to "
              << rounded << "\n";
    return rounded;
  }
  return receptive_field / k;
}

int default_patch_size_lowres(int lowres_patch) {
  if (lowres_patch <= 0) throw InputError("default_patch_size: patch size <= 0");
  return lowres_patch;
}

QualityMap schedule_image(const LuminanceImage& image, const ViewingConditions& vc,
                          const CsfModel& csf, const ProfileSet& profiles,
                          const ScheduleOptions& options) {
  if (image.empty()) throw InputError("schedule_image: empty image");
  const int ps = options.patch_size;
  if (ps < (1 << options.levels))
    throw InputError("schedule_image: patch_size must be >= 2^levels");
  if (options.gaze_px) {
    auto [gx, gy] = *options.gaze_px;
    if (gx < 0.0 || gy < 0.0 || gx > image.width - 1 || gy > image.height - 1)
      throw InputError("schedule_image: gaze outside the raster");
  }
  if (ps > image.width || ps > image.height)
    std::cerr << "warning: patch size " << ps << " exceeds an image side ("
              << image.width << "x" << image.height
              << "); falling back to a single patch on that axis\n";

  const double ppd = pixels_per_degree(vc);
  QualityMap map;
  map.patch_size_px = ps;
  map.cols = (image.width + ps - 1) / ps;
  map.rows = (image.height + ps - 1) / ps;
  const size_t n_patches = static_cast<size_t>(map.cols) * map.rows;
  map.grid.resize(n_patches);
  map.t_vectors.resize(n_patches);

  parallel_for(n_patches, [&](size_t patch_idx) {
    int cy = static_cast<int>(patch_idx) / map.cols;
    int cx = static_cast<int>(patch_idx) % map.cols;
    int x0 = cx * ps, y0 = cy * ps;
    int true_w = std::min(ps, image.width - x0);
    int true_h = std::min(ps, image.height - y0);

    // Border patches are analyzed on an edge-replicated ps x ps tile;
    // the selection still applies to the true patch only.
    LuminanceImage tile(ps, ps);
    for (int y = 0; y < ps; ++y)
      for (int x = 0; x < ps; ++x)
        tile.at(x, y) = image.at_clamped(x0 + x, y0 + y);

    double ecc = 0.0;
    if (options.gaze_px)
      ecc = eccentricity_deg(x0 + true_w / 2.0, y0 + true_h / 2.0,
                             (*options.gaze_px)[0], (*options.gaze_px)[1], ppd);
    double velocity = 0.0;
    if (options.flow) {
      double speed_px = patch_mean_speed(*options.flow, x0, y0, true_w, true_h);
      velocity = retinal_velocity(speed_px, vc);
    }

    ContrastPyramid pyr = build_pyramid(tile, vc, options.levels);
    normalize_pyramid(pyr, csf, velocity, ecc);
    apply_masking(pyr);
    std::array<double, 3> t = tolerable_attenuation(pyr);
    map.grid[patch_idx] = select_variant(t, profiles);
    map.t_vectors[patch_idx] = t;
  });

  map.cost_total = 0.0;
  for (int id : map.grid) map.cost_total += profiles.by_id(id).cost_flops;
  map.cost_baseline = static_cast<double>(n_patches) * profiles.baseline().cost_flops;
  map.ratio = map.cost_total / map.cost_baseline;
  return map;
}

double scheduler_overhead_flops(int patch_size_px) {
  if (patch_size_px <= 0) throw InputError("scheduler_overhead_flops: bad patch size");
  double px = static_cast<double>(patch_size_px) * patch_size_px;
  double px1 = kOverheadAnchorSize1 * kOverheadAnchorSize1;
  double px2 = kOverheadAnchorSize2 * kOverheadAnchorSize2;
  return kOverheadAnchorFlops1 +
         (px - px1) * (kOverheadAnchorFlops2 - kOverheadAnchorFlops1) / (px2 - px1);
}

std::string cost_report_json(const QualityMap& map, const ProfileSet& profiles) {
  nlohmann::json j;
  j["patch_size"] = map.patch_size_px;
  j["grid"] = {{"cols", map.cols}, {"rows", map.rows}};
  const size_t n_patches = map.grid.size();
  j["n_patches"] = n_patches;
  j["cost_total_flops"] = map.cost_total;
  j["cost_baseline_flops"] = map.cost_baseline;
  j["ratio"] = map.ratio;

  nlohmann::json hist = nlohmann::json::array();
  for (const auto& p : profiles.profiles()) {
    size_t count = std::count(map.grid.begin(), map.grid.end(), p.id);
    hist.push_back({{"id", p.id},
                    {"name", p.name},
                    {"cost_flops", p.cost_flops},
                    {"count", count},
                    {"baseline", p.baseline_full}});
  }
  j["histogram"] = hist;

  double per_patch = scheduler_overhead_flops(map.patch_size_px);
  j["overhead"] = {
      {"per_patch_flops", per_patch},
      {"total_flops", per_patch * static_cast<double>(n_patches)},
      {"anchors",
       {{{"patch_size", 10}, {"flops", kOverheadAnchorFlops1}},
        {{"patch_size", 35}, {"flops", kOverheadAnchorFlops2}}}},
  };
  return j.dump(2) + "\n";
}

std::string map_to_csv(const QualityMap& map) {
  std::ostringstream out;
  for (int cy = 0; cy < map.rows; ++cy) {
    for (int cx = 0; cx < map.cols; ++cx) {
      if (cx) out << ',';
      out << map.id_at(cx, cy);
    }
    out << '\n';
  }
  return out.str();
}

Raster8 map_to_heatmap(const QualityMap& map, const ProfileSet& profiles) {
  Raster8 img;
  img.width = map.cols;
  img.height = map.rows;
  img.channels = 1;
  img.data.resize(map.grid.size());
  const int n = static_cast<int>(profiles.profiles().size());
  for (size_t i = 0; i < map.grid.size(); ++i) {
    int rank = profiles.cost_rank(map.grid[i]);
    double gray = n > 1 ? 255.0 * rank / (n - 1) : 0.0;
    img.data[i] = static_cast<uint8_t>(std::lround(gray));
  }
  return img;
}

}  // namespace hvpf
