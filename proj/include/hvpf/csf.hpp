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

#ifndef HVPF_CSF_HPP_
#define HVPF_CSF_HPP_

#include <array>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace hvpf {

struct CsfQuery {
  double f_spatial_cpd = 0.0;   // >= 0
  double f_temporal_hz = 0.0;   // >= 0
  double luminance = 100.0;     // cd/m^2, > 0
  double eccentricity_deg = 0.0;  // >= 0
};

/// Separable analytic sensitivity surrogate:
///   S = S_max * s_sp * s_t(w) * s_L(L)
///   s_sp = min over {f, f'} of (x/f_peak) * exp(1 - x/f_peak),
///          f' = f_spatial * (1 + e/e2)   (s0 at exactly f = 0)
///   s_t(w) = 1 for w <= w0, else exp(-(w - w0)/wc)
///   s_L(L) = (L / (L + L_half))^p
/// Band-pass in spatial frequency, non-increasing in eccentricity and
/// temporal frequency, non-decreasing in luminance. The min with the
/// foveal spatial factor keeps peripheral sensitivity from exceeding
/// foveal at sub-peak frequencies, where plain frequency scaling would
/// otherwise raise it. The constants are artifact defaults, swappable
/// via the lookup-table model.
struct DefaultCsfParams {
  double s_max = 200.0;
  double f_peak_cpd = 3.0;
  double s_dc = 0.2;       // spatial factor at exactly 0 cpd
  double e2_deg = 2.3;     // eccentricity half-saturation
  double w0_hz = 5.0;      // temporal corner
  double wc_hz = 8.0;      // temporal decay constant
  double l_half = 50.0;    // cd/m^2
  double l_exp = 0.5;
};

/// Rectilinear 4D sensitivity grid over (f_spatial, f_temporal, luminance,
/// eccentricity), evaluated by multilinear interpolation. Out-of-hull
/// queries clamp to the hull.
class CsfLookupTable {
 public:
  // Validates: axes strictly increasing, values positive, value count equal
  // to the grid size. Throws FormatError otherwise.
  CsfLookupTable(std::array<std::vector<double>, 4> axes, std::vector<double> values);

  double sample(const CsfQuery& q, bool* clamped) const;
  const std::array<std::vector<double>, 4>& axes() const { return axes_; }

 private:
  std::array<std::vector<double>, 4> axes_;
  std::vector<double> values_;  // row-major, axis 0 slowest
};

class CsfModel {
 public:
  static CsfModel default_analytic(DefaultCsfParams params = {});
  static CsfModel from_table(CsfLookupTable table);
  /// CSV loader: columns f_spatial_cpd, f_temporal_hz, luminance_nits,
  /// eccentricity_deg, sensitivity; row order free; full grid required.
  static CsfModel load_table(const std::filesystem::path& file);
  static CsfModel table_from_csv_text(const std::string& csv);

  /// Sensitivity, > 0 on the valid domain. Throws InputError for
  /// non-finite or out-of-range queries.
  double sensitivity(const CsfQuery& q) const;
  double sensitivity(const CsfQuery& q, bool& clamped) const;

  bool is_table() const { return std::holds_alternative<CsfLookupTable>(impl_); }

 private:
  std::variant<DefaultCsfParams, CsfLookupTable> impl_;
};

}  // namespace hvpf

#endif  // HVPF_CSF_HPP_
