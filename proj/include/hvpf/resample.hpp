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

#ifndef HVPF_RESAMPLE_HPP_
#define HVPF_RESAMPLE_HPP_

#include <string>

#include "hvpf/image.hpp"

namespace hvpf {

/// Separable convolution with a sampled Gaussian (radius ceil(5*sigma),
/// edge replication).
Image gaussian_blur(const Image& img, double sigma_px);

/// Catmull-Rom bicubic resize. Downscales widen the kernel by the scale
/// factor so the result is antialiased.
Image resize_bicubic(const Image& img, int out_w, int out_h);

/// k x k block average.
Image box_downscale(const Image& img, int k);

/// Nearest-neighbor (pixel replication) upscale to the requested size.
Image replicate_upscale(const Image& img, int out_w, int out_h);

/// Stand-in reconstruction operators with analytically known frequency
/// behavior, used to exercise the attenuation estimator.
struct SurrogateOperator {
  enum class Kind { identity, gaussian_blur, bicubic_down_up, box_down_up };
  Kind kind = Kind::identity;
  double sigma_px = 0.0;  // gaussian_blur only
  int k = 1;              // resampling kinds; one of {2, 4, 8}

  static SurrogateOperator identity();
  static SurrogateOperator blur(double sigma_px);
  static SurrogateOperator bicubic(int k);
  static SurrogateOperator box(int k);
  // Parses "identity", "blur:1.5", "bicubic:4", "box:2".
  static SurrogateOperator parse(const std::string& text);

  void validate() const;
  // Effective downscale factor (1 for identity/blur).
  int scale_factor() const;
};

/// Runs the operator: identity copies, blur filters in place, the
/// down/up kinds downscale by k and upscale back to the input size.
Image apply_surrogate(const SurrogateOperator& op, const Image& img);

}  // namespace hvpf

#endif  // HVPF_RESAMPLE_HPP_
