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

#include "hvpf/falloff.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "hvpf/error.hpp"

namespace hvpf {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

double clamp_a(double a) { return std::clamp(a, 1e-6, 1e6); }
double clamp_b(double b) { return std::max(b, 0.0); }
double clamp_c(double c) { return std::clamp(c, 0.0, 1.0); }

double rms_residual(std::span<const double> f, std::span<const double> y,
                    double a, double b, double c) {
  double acc = 0.0;
  for (size_t i = 0; i < f.size(); ++i) {
    double r = eval_falloff(a, b, c, f[i]) - y[i];
    acc += r * r;
  }
  return std::sqrt(acc / f.size());
}

// Solves the 3x3 system M x = rhs via Gaussian elimination with partial
// pivoting. Returns false when M is singular to working precision.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> rhs,
            std::array<double, 3>& x) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    if (std::fabs(m[pivot][col]) < 1e-300) return false;
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int r = col + 1; r < 3; ++r) {
      double factor = m[r][col] / m[col][col];
      for (int cc = col; cc < 3; ++cc) m[r][cc] -= factor * m[col][cc];
      rhs[r] -= factor * rhs[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double acc = rhs[r];
    for (int cc = r + 1; cc < 3; ++cc) acc -= m[r][cc] * x[cc];
    x[r] = acc / m[r][r];
  }
  return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

}  // namespace

double eval_falloff(double a, double b, double c, double f) {
  if (!(a > 0.0)) throw InputError("eval_falloff: a must be positive");
  double d = f - b;
  return std::exp(-(d * d) / (2.0 * a * a)) / (a * kSqrt2Pi) + c;
}

double eval_falloff(const FalloffFit& fit, double f) {
  return eval_falloff(fit.a, fit.b, fit.c, f);
}

FalloffFit fit_gaussian_falloff(std::span<const double> freqs,
                                std::span<const double> values) {
  const size_t n = freqs.size();
  if (n != values.size()) throw InputError("fit_gaussian_falloff: length mismatch");
  if (n < 8) throw InputError("fit_gaussian_falloff: need at least 8 sample bins");

  const double f_max = *std::max_element(freqs.begin(), freqs.end());
  const double span_f = std::max(f_max, 1e-6);

  // Coarse grid over (a, b); c has a closed form given the other two
  // (mean residual of the Gaussian term, clamped to [0, 1]).
  FalloffFit grid_best;
  grid_best.rms = std::numeric_limits<double>::infinity();
  const int na = 48, nb = 25;
  for (int ia = 0; ia < na; ++ia) {
    double a = span_f / 60.0 * std::pow(60.0 * 60.0, ia / double(na - 1));  // span/60 .. span*60
    for (int ib = 0; ib < nb; ++ib) {
      double b = span_f * ib / double(nb - 1);
      double mean_diff = 0.0;
      for (size_t i = 0; i < n; ++i)
        mean_diff += values[i] - eval_falloff(a, b, 0.0, freqs[i]);
      double c = clamp_c(mean_diff / n);
      double r = rms_residual(freqs, values, a, b, c);
      if (r < grid_best.rms) grid_best = {a, b, c, r, false};
    }
  }

  // Levenberg-damped Gauss-Newton refinement with bound projection.
  // Degenerate curves (e.g. exactly flat ones) have their optimum at
  // a -> infinity; a residual at 1e-6 of the data scale or progress below
  // a fraction of the starting residual counts as converged, not stalled.
  double a = grid_best.a, b = grid_best.b, c = grid_best.c;
  double best = grid_best.rms;
  double value_scale = 0.0;
  for (double y : values) value_scale = std::max(value_scale, std::fabs(y));
  const double rms_floor = 1e-6 * std::max(value_scale, 1e-6);
  const double gain_floor = 1e-14 + 1e-9 * grid_best.rms;
  double lambda = 1e-3;
  bool converged = best <= rms_floor;
  for (int iter = 0; iter < 200 && !converged; ++iter) {
    std::array<std::array<double, 3>, 3> jtj{};
    std::array<double, 3> jtr{};
    for (size_t i = 0; i < n; ++i) {
      double d = freqs[i] - b;
      double e = std::exp(-(d * d) / (2.0 * a * a));
      double amp = 1.0 / (a * kSqrt2Pi);
      double model = amp * e + c;
      double r = model - values[i];
      // d(model)/da, d(model)/db, d(model)/dc
      double ja = amp * e * ((d * d) / (a * a * a) - 1.0 / a);
      double jb = amp * e * d / (a * a);
      double jc = 1.0;
      const double j[3] = {ja, jb, jc};
      for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) jtj[p][q] += j[p] * j[q];
        jtr[p] += j[p] * r;
      }
    }

    bool stepped = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      auto damped = jtj;
      for (int p = 0; p < 3; ++p)
        damped[p][p] += lambda * std::max(jtj[p][p], 1e-12);
      std::array<double, 3> delta{};
      if (!solve3(damped, {-jtr[0], -jtr[1], -jtr[2]}, delta)) {
        lambda *= 4.0;
        continue;
      }
      double a2 = clamp_a(a + delta[0]);
      double b2 = clamp_b(b + delta[1]);
      double c2 = clamp_c(c + delta[2]);
      double r2 = rms_residual(freqs, values, a2, b2, c2);
      if (r2 <= best) {
        double step = std::fabs(a2 - a) / std::max(1.0, std::fabs(a)) +
                      std::fabs(b2 - b) + std::fabs(c2 - c);
        bool tiny_gain = best - r2 <= gain_floor;
        a = a2;
        b = b2;
        c = c2;
        best = r2;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (step < 1e-12 || tiny_gain || best <= rms_floor) converged = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!stepped) converged = true;  // damping exhausted at a local optimum
  }

  if (!converged) {
    grid_best.coarse = true;
    return grid_best;
  }
  FalloffFit fit{a, b, c, best, false};
  return fit;
}

}  // namespace hvpf
