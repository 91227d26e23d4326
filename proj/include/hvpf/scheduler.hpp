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

#ifndef HVPF_SCHEDULER_HPP_
#define HVPF_SCHEDULER_HPP_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hvpf/contrast.hpp"
#include "hvpf/csf.hpp"
#include "hvpf/image.hpp"
#include "hvpf/motion.hpp"
#include "hvpf/viewing.hpp"

namespace hvpf {

// Positions with |C_n| below this count as contrast-free (t contribution 0).
constexpr double kContrastFloor = 1e-4;
// Cosine similarities closer than this are ties, broken toward lower cost.
constexpr double kSimilarityTie = 1e-9;

/// Pyramid band centers in cycles/pixel: Nyquist / 2^(i+1). These are
/// raster frequencies, so they do not depend on viewing conditions; the
/// cpd values follow by multiplying with ppd.
constexpr std::array<double, 3> kBandFreqsCpp = {0.25, 0.125, 0.0625};

/// One candidate reconstruction variant. t_hat holds its attenuation at
/// the three pyramid band frequencies, finest band first.
struct VariantProfile {
  int id = 0;
  std::string name;
  double cost_flops = 0.0;
  std::array<double, 3> t_hat = {0.0, 0.0, 0.0};
  bool baseline_full = false;
};

/// Validated profile set. Requires >= 2 variants with pairwise-distinct
/// positive costs, t_hat components in [0, 1.5] with positive norm, unique
/// ids, and exactly one baseline, which must be the most expensive variant
/// (flagged explicitly, or defaulted to the max-cost one).
class ProfileSet {
 public:
  explicit ProfileSet(std::vector<VariantProfile> profiles);

  static ProfileSet from_json_text(const std::string& json_text);
  static ProfileSet load(const std::filesystem::path& file);

  const std::vector<VariantProfile>& profiles() const { return profiles_; }
  const VariantProfile& by_id(int id) const;
  const VariantProfile& cheapest() const { return profiles_[cheapest_idx_]; }
  const VariantProfile& baseline() const { return profiles_[baseline_idx_]; }
  /// Rank of a variant in ascending cost order (0 = cheapest).
  int cost_rank(int id) const;

 private:
  std::vector<VariantProfile> profiles_;
  size_t cheapest_idx_ = 0;
  size_t baseline_idx_ = 0;
};

/// Lower edge of the 1-JND band around a masked contrast of magnitude C_n:
/// max(0, C_n^alpha - (1 + M))^(1/alpha). Zero means the content is below
/// threshold and any attenuation is invisible.
double tolerable_contrast(double c_n, double mask_term, double alpha = kMaskAlpha);

/// Per band i of the first three, max over positions of
/// tolerable_contrast(|C_n|, M) / |C_n| (0 where |C_n| < kContrastFloor).
/// Components lie in [0, 1]; requires a masked pyramid with >= 3 bands.
std::array<double, 3> tolerable_attenuation(const ContrastPyramid& pyr);

/// Cosine-similarity argmax of t against each profile's t_hat. A zero t
/// selects the cheapest variant; ties break toward lower cost.
int select_variant(const std::array<double, 3>& t, const ProfileSet& profiles);

/// Patch sizes per network style: a model with receptive field R on a
/// pre-upsampled input reads R/k pixels of the low-res raster (rounded up,
/// with a warning, when k does not divide R); a model consuming the
/// low-res raster directly uses its patch size P unchanged.
int default_patch_size_pre_upsampled(int receptive_field, int k);
int default_patch_size_lowres(int lowres_patch);

struct ScheduleOptions {
  int patch_size = 0;
  int levels = 3;
  std::optional<std::array<double, 2>> gaze_px;  // eccentricity source
  const FlowField* flow = nullptr;               // px/frame velocities
};

/// Per-patch variant assignment over an image.
struct QualityMap {
  int cols = 0, rows = 0;
  int patch_size_px = 0;
  std::vector<int> grid;                         // variant id per patch
  std::vector<std::array<double, 3>> t_vectors;  // diagnostic
  double cost_total = 0.0;
  double cost_baseline = 0.0;
  double ratio = 0.0;  // cost_total / cost_baseline, in (0, 1]

  int id_at(int cx, int cy) const { return grid[static_cast<size_t>(cy) * cols + cx]; }
};

/// Tiles the image into patch_size squares (border patches edge-padded for
/// analysis only) and runs pyramid -> CSF normalization -> masking ->
/// tolerable attenuation -> variant selection per patch. Gaze supplies the
/// patch-center eccentricity; flow supplies the patch mean speed.
QualityMap schedule_image(const LuminanceImage& image, const ViewingConditions& vc,
                          const CsfModel& csf, const ProfileSet& profiles,
                          const ScheduleOptions& options);

/// Scheduler overhead in FLOPs for one patch, interpolated linearly in
/// pixel count through the two measured anchors (10x10 -> 39 KFLOPs,
/// 35x35 -> 477 KFLOPs), which it reproduces exactly.
double scheduler_overhead_flops(int patch_size_px);

/// JSON cost report: totals, ratio, per-variant histogram and the
/// scheduler overhead estimate.
std::string cost_report_json(const QualityMap& map, const ProfileSet& profiles);

std::string map_to_csv(const QualityMap& map);
/// 8-bit heatmap: gray = round(255 * cost_rank / (n - 1)), cheapest darkest.
Raster8 map_to_heatmap(const QualityMap& map, const ProfileSet& profiles);

}  // namespace hvpf

#endif  // HVPF_SCHEDULER_HPP_
