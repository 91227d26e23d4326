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

#ifndef HVPF_SPECTRAL_HPP_
#define HVPF_SPECTRAL_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "hvpf/falloff.hpp"
#include "hvpf/image.hpp"
#include "hvpf/resample.hpp"

namespace hvpf {

/// Radially averaged Fourier magnitudes. Frequencies are in cycles/pixel
/// on [0, 0.5]; convert to cycles/degree by multiplying with ppd.
struct RadialSpectrum {
  std::vector<double> freqs;       // strictly increasing bin centers
  std::vector<double> magnitudes;  // >= 0, one per bin
};

/// Magnitude of the 2D DFT of the mean-subtracted, Hann-windowed image,
/// averaged over annular bins of equal radial width. Bin count is
/// floor(min(w, h) / 2); frequencies beyond the 0.5 cycles/pixel circle
/// are discarded. Requires dimensions >= 8x8.
RadialSpectrum radial_average(const Image& image);

/// Frequency response of a reconstruction operator: per-bin ratio of the
/// reconstructed to the reference radial magnitudes, averaged over a corpus.
struct AttenuationCurve {
  int scale_k = 1;                  // downscale factor the curve was measured at
  std::vector<double> freqs;        // valid bins only, cycles/pixel
  std::vector<double> samples;      // ratios, clamped to [0, 1.5]
  FalloffFit fit;                   // Gaussian falloff summary + RMS residual
};

/// Measures the attenuation curve of a surrogate operator over a corpus:
/// per image the operator output is compared against the image itself, the
/// per-bin magnitude ratios are clamped to [0, 1.5], bins whose reference
/// magnitude falls below 1e-8 x image RMS are dropped, and the per-image
/// curves are aggregated by arithmetic mean. The aggregated samples are
/// then summarized with fit_gaussian_falloff.
AttenuationCurve estimate_attenuation(const std::vector<Image>& corpus,
                                      const SurrogateOperator& op, int scale_k);

/// Same measurement for externally produced (reference, reconstruction)
/// image pairs, e.g. real SR outputs rendered elsewhere.
AttenuationCurve estimate_attenuation_pairs(const std::vector<Image>& references,
                                            const std::vector<Image>& reconstructions,
                                            int scale_k);

std::string curve_to_json(const AttenuationCurve& curve);
AttenuationCurve curve_from_json_text(const std::string& json_text);
AttenuationCurve load_curve(const std::filesystem::path& file);

}  // namespace hvpf

#endif  // HVPF_SPECTRAL_HPP_
