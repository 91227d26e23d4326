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

#include "hvpf/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "hvpf/error.hpp"
#include "hvpf/parallel.hpp"

#include "json.hpp"

namespace hvpf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRatioClampMax = 1.5;       // tolerates mild overshoot
constexpr double kBinFloorRelative = 1e-8;   // x image RMS; guards 0/0 at empty annuli

std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

// One image's attenuation samples on its own bin grid.
struct PerImageCurve {
  std::vector<double> freqs;
  std::vector<double> ratios;
  std::vector<bool> valid;
};

PerImageCurve measure_pair(const Image& ref, const Image& recon) {
  if (ref.width != recon.width || ref.height != recon.height)
    throw InputError("attenuation: reference/reconstruction size mismatch");
  RadialSpectrum rs = radial_average(ref);
  RadialSpectrum qs = radial_average(recon);

  double mean = 0.0;
  for (double v : ref.data) mean += v;
  mean /= ref.data.size();
  double rms = 0.0;
  for (double v : ref.data) rms += (v - mean) * (v - mean);
  rms = std::sqrt(rms / ref.data.size());
  const double floor = kBinFloorRelative * rms;

  PerImageCurve out;
  out.freqs = rs.freqs;
  out.ratios.resize(rs.freqs.size(), 0.0);
  out.valid.resize(rs.freqs.size(), false);
  for (size_t j = 0; j < rs.freqs.size(); ++j) {
    if (rs.magnitudes[j] <= floor) continue;
    out.valid[j] = true;
    out.ratios[j] = std::clamp(qs.magnitudes[j] / rs.magnitudes[j], 0.0, kRatioClampMax);
  }
  return out;
}

AttenuationCurve aggregate(std::vector<PerImageCurve>& curves, int scale_k) {
  size_t n_common = SIZE_MAX;
  for (const auto& c : curves) n_common = std::min(n_common, c.freqs.size());

  std::vector<double> freqs(n_common);
  const double dbin = 0.5 / n_common;
  for (size_t j = 0; j < n_common; ++j) freqs[j] = (j + 0.5) * dbin;

  std::vector<double> sums(n_common, 0.0);
  std::vector<int> counts(n_common, 0);
  for (const auto& c : curves) {
    if (c.freqs.size() == n_common) {
      // Identical grid: contribute directly, no resampling.
      for (size_t j = 0; j < n_common; ++j) {
        if (!c.valid[j]) continue;
        sums[j] += c.ratios[j];
        counts[j] += 1;
      }
      continue;
    }
    // Mixed corpus sizes: linearly interpolate this image's valid samples
    // onto the common grid, inside its valid support only.
    std::vector<double> vf, vr;
    for (size_t j = 0; j < c.freqs.size(); ++j) {
      if (!c.valid[j]) continue;
      vf.push_back(c.freqs[j]);
      vr.push_back(c.ratios[j]);
    }
    if (vf.size() < 2) continue;
    for (size_t j = 0; j < n_common; ++j) {
      double f = freqs[j];
      if (f < vf.front() || f > vf.back()) continue;
      size_t hi = std::lower_bound(vf.begin(), vf.end(), f) - vf.begin();
      double r;
      if (hi == 0) {
        r = vr.front();
      } else {
        double t = (f - vf[hi - 1]) / (vf[hi] - vf[hi - 1]);
        r = vr[hi - 1] + t * (vr[hi] - vr[hi - 1]);
      }
      sums[j] += r;
      counts[j] += 1;
    }
  }

  AttenuationCurve curve;
  curve.scale_k = scale_k;
  for (size_t j = 0; j < n_common; ++j) {
    if (counts[j] == 0) continue;
    curve.freqs.push_back(freqs[j]);
    curve.samples.push_back(sums[j] / counts[j]);
  }
  if (curve.samples.empty())
    throw InputError("attenuation: no valid frequency bins in the corpus");
  curve.fit = fit_gaussian_falloff(curve.freqs, curve.samples);
  return curve;
}

}  // namespace

RadialSpectrum radial_average(const Image& image) {
  if (image.width < 8 || image.height < 8)
    throw InputError("radial_average: image must be at least 8x8");
  const int w = image.width, h = image.height;

  double mean = 0.0;
  for (double v : image.data) mean += v;
  mean /= image.data.size();

  // Mean-subtract, then apply a separable periodic Hann window.
  std::vector<double> wx(w), wy(h);
  for (int x = 0; x < w; ++x) wx[x] = 0.5 - 0.5 * std::cos(2.0 * kPi * x / w);
  for (int y = 0; y < h; ++y) wy[y] = 0.5 - 0.5 * std::cos(2.0 * kPi * y / h);

  double* in = fftw_alloc_real(static_cast<size_t>(w) * h);
  const int cw = w / 2 + 1;
  fftw_complex* out = fftw_alloc_complex(static_cast<size_t>(h) * cw);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      in[static_cast<size_t>(y) * w + x] = (image.at(x, y) - mean) * wx[x] * wy[y];

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plan = fftw_plan_dft_r2c_2d(h, w, in, out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }

  const int nbins = std::min(w, h) / 2;
  const double dbin = 0.5 / nbins;
  const double norm = 1.0 / (static_cast<double>(w) * h);
  std::vector<double> sums(nbins, 0.0);
  std::vector<long> counts(nbins, 0);

  for (int fy = 0; fy < h; ++fy) {
    int sy = fy <= h / 2 ? fy : fy - h;
    double v = static_cast<double>(sy) / h;
    for (int fx = 0; fx < w; ++fx) {
      int sx = fx <= w / 2 ? fx : fx - w;
      double u = static_cast<double>(sx) / w;
      int bin = static_cast<int>(std::hypot(u, v) / dbin);
      if (bin >= nbins) continue;
      // Hermitian half-plane lookup for fx > w/2.
      size_t idx;
      if (fx < cw)
        idx = static_cast<size_t>(fy) * cw + fx;
      else
        idx = static_cast<size_t>((h - fy) % h) * cw + (w - fx);
      sums[bin] += std::hypot(out[idx][0], out[idx][1]) * norm;
      counts[bin] += 1;
    }
  }
  fftw_free(in);
  fftw_free(out);

  RadialSpectrum spectrum;
  spectrum.freqs.resize(nbins);
  spectrum.magnitudes.resize(nbins);
  for (int j = 0; j < nbins; ++j) {
    spectrum.freqs[j] = (j + 0.5) * dbin;
    spectrum.magnitudes[j] = counts[j] > 0 ? sums[j] / counts[j] : 0.0;
  }
  return spectrum;
}

AttenuationCurve estimate_attenuation(const std::vector<Image>& corpus,
                                      const SurrogateOperator& op, int scale_k) {
  if (corpus.empty()) throw InputError("attenuation: empty corpus");
  op.validate();
  std::vector<PerImageCurve> curves(corpus.size());
  parallel_for(corpus.size(), [&](size_t i) {
    curves[i] = measure_pair(corpus[i], apply_surrogate(op, corpus[i]));
  });
  return aggregate(curves, scale_k);
}

AttenuationCurve estimate_attenuation_pairs(const std::vector<Image>& references,
                                            const std::vector<Image>& reconstructions,
                                            int scale_k) {
  if (references.empty()) throw InputError("attenuation: empty pair list");
  if (references.size() != reconstructions.size())
    throw InputError("attenuation: reference/reconstruction count mismatch");
  std::vector<PerImageCurve> curves(references.size());
  parallel_for(references.size(), [&](size_t i) {
    curves[i] = measure_pair(references[i], reconstructions[i]);
  });
  return aggregate(curves, scale_k);
}

std::string curve_to_json(const AttenuationCurve& curve) {
  nlohmann::json j;
  j["k"] = curve.scale_k;
  j["bin_freqs"] = curve.freqs;
  j["samples"] = curve.samples;
  j["fit"] = {{"a", curve.fit.a},
              {"b", curve.fit.b},
              {"c", curve.fit.c},
              {"rms", curve.fit.rms},
              {"coarse", curve.fit.coarse}};
  return j.dump(2) + "\n";
}

AttenuationCurve curve_from_json_text(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
    AttenuationCurve curve;
    curve.scale_k = j.at("k").get<int>();
    curve.freqs = j.at("bin_freqs").get<std::vector<double>>();
    curve.samples = j.at("samples").get<std::vector<double>>();
    const auto& fit = j.at("fit");
    curve.fit.a = fit.at("a").get<double>();
    curve.fit.b = fit.at("b").get<double>();
    curve.fit.c = fit.at("c").get<double>();
    curve.fit.rms = fit.at("rms").get<double>();
    curve.fit.coarse = fit.value("coarse", false);
    if (curve.freqs.size() != curve.samples.size())
      throw FormatError("curve JSON: bin_freqs/samples length mismatch");
    if (curve.samples.empty()) throw FormatError("curve JSON: empty samples");
    if (!(curve.fit.a > 0.0)) throw FormatError("curve JSON: fit.a must be positive");
    return curve;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("curve JSON: ") + e.what());
  }
}

AttenuationCurve load_curve(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return curve_from_json_text(buf.str());
}

}  // namespace hvpf
