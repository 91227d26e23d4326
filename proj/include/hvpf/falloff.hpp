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

#ifndef HVPF_FALLOFF_HPP_
#define HVPF_FALLOFF_HPP_

#include <span>

namespace hvpf {

/// Gaussian falloff curve (1/(a*sqrt(2*pi))) * exp(-(f-b)^2 / (2*a^2)) + c.
/// Note the amplitude is tied to the width a, so the peak value is
/// 1/(a*sqrt(2*pi)) + c at f = b.
struct FalloffFit {
  double a = 1.0;  // > 0
  double b = 0.0;  // >= 0
  double c = 0.0;  // in [0, 1]
  double rms = 0.0;
  bool coarse = false;  // refinement did not converge; grid candidate returned
};

double eval_falloff(double a, double b, double c, double f);
double eval_falloff(const FalloffFit& fit, double f);

/// Least-squares fit over the sample points: coarse (a, b) grid with a
/// closed-form c, then Levenberg-damped Gauss-Newton refinement under the
/// constraints a > 0, b >= 0, c in [0, 1]. Needs >= 8 samples.
FalloffFit fit_gaussian_falloff(std::span<const double> freqs,
                                std::span<const double> values);

}  // namespace hvpf

#endif  // HVPF_FALLOFF_HPP_
