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

#include "hvpf/csf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hvpf/error.hpp"

namespace hvpf {

namespace {

void check_query(const CsfQuery& q) {
  if (!std::isfinite(q.f_spatial_cpd) || !std::isfinite(q.f_temporal_hz) ||
      !std::isfinite(q.luminance) || !std::isfinite(q.eccentricity_deg))
    throw InputError("csf: non-finite query");
  if (q.f_spatial_cpd < 0.0 || q.f_temporal_hz < 0.0 || q.eccentricity_deg < 0.0 ||
      !(q.luminance > 0.0))
    throw InputError("csf: query out of domain");
}

double spatial_factor(const DefaultCsfParams& p, double f) {
  return f > 0.0 ? (f / p.f_peak_cpd) * std::exp(1.0 - f / p.f_peak_cpd) : p.s_dc;
}

double eval_default(const DefaultCsfParams& p, const CsfQuery& q) {
  double f_eff = q.f_spatial_cpd * (1.0 + q.eccentricity_deg / p.e2_deg);
  // The eccentricity-scaled factor is capped at its foveal value: frequency
  // scaling alone would otherwise raise sub-peak sensitivities away from
  // the fovea, and peripheral sensitivity must never exceed foveal.
  double s_sp = std::min(spatial_factor(p, f_eff), spatial_factor(p, q.f_spatial_cpd));
  double s_t = q.f_temporal_hz <= p.w0_hz
                   ? 1.0
                   : std::exp(-(q.f_temporal_hz - p.w0_hz) / p.wc_hz);
  double s_l = std::pow(q.luminance / (q.luminance + p.l_half), p.l_exp);
  return p.s_max * s_sp * s_t * s_l;
}

// Finds the cell and interpolation weight along one axis, clamping to the
// hull. Returns (lower index, weight toward upper).
std::pair<size_t, double> locate(const std::vector<double>& axis, double x,
                                 bool* clamped) {
  if (axis.size() == 1) {
    if (x != axis[0] && clamped) *clamped = true;
    return {0, 0.0};
  }
  if (x <= axis.front()) {
    if (x < axis.front() && clamped) *clamped = true;
    return {0, 0.0};
  }
  if (x >= axis.back()) {
    if (x > axis.back() && clamped) *clamped = true;
    return {axis.size() - 2, 1.0};
  }
  size_t hi = std::upper_bound(axis.begin(), axis.end(), x) - axis.begin();
  size_t lo = hi - 1;
  return {lo, (x - axis[lo]) / (axis[hi] - axis[lo])};
}

}  // namespace

CsfLookupTable::CsfLookupTable(std::array<std::vector<double>, 4> axes,
                               std::vector<double> values)
    : axes_(std::move(axes)), values_(std::move(values)) {
  size_t expected = 1;
  for (const auto& axis : axes_) {
    if (axis.empty()) throw FormatError("csf table: empty axis");
    for (size_t i = 1; i < axis.size(); ++i)
      if (!(axis[i] > axis[i - 1]))
        throw FormatError("csf table: axis values must be strictly increasing");
    expected *= axis.size();
  }
  if (values_.size() != expected)
    throw FormatError("csf table: value count does not match the grid");
  for (double v : values_)
    if (!(v > 0.0) || !std::isfinite(v))
      throw FormatError("csf table: sensitivities must be positive and finite");
}

double CsfLookupTable::sample(const CsfQuery& q, bool* clamped) const {
  const double coords[4] = {q.f_spatial_cpd, q.f_temporal_hz, q.luminance,
                            q.eccentricity_deg};
  size_t lo[4];
  double w[4];
  for (int d = 0; d < 4; ++d) {
    auto [l, t] = locate(axes_[d], coords[d], clamped);
    lo[d] = l;
    w[d] = t;
  }
  size_t stride[4];
  stride[3] = 1;
  for (int d = 2; d >= 0; --d) stride[d] = stride[d + 1] * axes_[d + 1].size();

  double acc = 0.0;
  for (int corner = 0; corner < 16; ++corner) {
    double weight = 1.0;
    size_t idx = 0;
    for (int d = 0; d < 4; ++d) {
      bool upper = corner & (1 << d);
      weight *= upper ? w[d] : 1.0 - w[d];
      // Singleton axes carry w = 0, so their upper corners weigh nothing;
      // keep the index in bounds regardless.
      size_t step = (upper && axes_[d].size() > 1) ? 1 : 0;
      idx += (lo[d] + step) * stride[d];
    }
    if (weight != 0.0) acc += weight * values_[idx];
  }
  return acc;
}

CsfModel CsfModel::default_analytic(DefaultCsfParams params) {
  CsfModel m;
  m.impl_ = params;
  return m;
}

CsfModel CsfModel::from_table(CsfLookupTable table) {
  CsfModel m;
  m.impl_ = std::move(table);
  return m;
}

CsfModel CsfModel::table_from_csv_text(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  int line_no = 0;

  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) {
      size_t a = cell.find_first_not_of(" \t\r");
      size_t b = cell.find_last_not_of(" \t\r");
      cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
    }
    return cells;
  };

  // Header: locate the five required columns.
  if (!std::getline(in, line)) throw FormatError("csf table: empty file");
  ++line_no;
  std::vector<std::string> header = split(line);
  const char* required[5] = {"f_spatial_cpd", "f_temporal_hz", "luminance_nits",
                             "eccentricity_deg", "sensitivity"};
  int col[5];
  for (int i = 0; i < 5; ++i) {
    auto it = std::find(header.begin(), header.end(), required[i]);
    if (it == header.end())
      throw FormatError(std::string("csf table: missing column ") + required[i]);
    col[i] = static_cast<int>(it - header.begin());
  }

  std::vector<std::array<double, 5>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells = split(line);
    std::array<double, 5> row;
    for (int i = 0; i < 5; ++i) {
      if (col[i] >= static_cast<int>(cells.size()))
        throw FormatError("csf table: short row at line " + std::to_string(line_no));
      try {
        row[i] = std::stod(cells[col[i]]);
      } catch (const std::logic_error&) {
        throw FormatError("csf table: bad number at line " + std::to_string(line_no));
      }
    }
    if (!(row[4] > 0.0))
      throw FormatError("csf table: nonpositive sensitivity at line " +
                        std::to_string(line_no));
    rows.push_back(row);
  }
  if (rows.empty()) throw FormatError("csf table: no data rows");

  // Row order is free: axes are the sorted unique coordinate values and the
  // grid must be complete, each node given exactly once.
  std::array<std::vector<double>, 4> axes;
  for (int d = 0; d < 4; ++d) {
    std::vector<double> vals;
    for (const auto& r : rows) vals.push_back(r[d]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    axes[d] = std::move(vals);
  }
  size_t grid_size = 1;
  for (const auto& axis : axes) grid_size *= axis.size();
  if (rows.size() != grid_size)
    throw FormatError("csf table: grid is ragged (" + std::to_string(rows.size()) +
                      " rows, expected " + std::to_string(grid_size) + ")");

  std::vector<double> values(grid_size, 0.0);
  std::vector<bool> seen(grid_size, false);
  size_t stride[4];
  stride[3] = 1;
  for (int d = 2; d >= 0; --d) stride[d] = stride[d + 1] * axes[d + 1].size();
  for (const auto& r : rows) {
    size_t idx = 0;
    for (int d = 0; d < 4; ++d) {
      size_t pos = std::lower_bound(axes[d].begin(), axes[d].end(), r[d]) -
                   axes[d].begin();
      idx += pos * stride[d];
    }
    if (seen[idx]) throw FormatError("csf table: duplicate grid node");
    seen[idx] = true;
    values[idx] = r[4];
  }

  return from_table(CsfLookupTable(std::move(axes), std::move(values)));
}

CsfModel CsfModel::load_table(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return table_from_csv_text(buf.str());
}

double CsfModel::sensitivity(const CsfQuery& q) const {
  bool clamped = false;
  return sensitivity(q, clamped);
}

double CsfModel::sensitivity(const CsfQuery& q, bool& clamped) const {
  check_query(q);
  clamped = false;
  if (const auto* p = std::get_if<DefaultCsfParams>(&impl_)) return eval_default(*p, q);
  return std::get<CsfLookupTable>(impl_).sample(q, &clamped);
}

}  // namespace hvpf
