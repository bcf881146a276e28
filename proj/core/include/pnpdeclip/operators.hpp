// Copyright 2026 The pnpdeclip Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PNPDECLIP_OPERATORS_HPP_
#define PNPDECLIP_OPERATORS_HPP_

#include <optional>
#include <span>

#include "pnpdeclip/gabor.hpp"
#include "pnpdeclip/signal.hpp"

namespace pnpdeclip {

struct ThresholdParams {
  double rho = 1.0;
  double lambda = 0.0;
  double epsilon = 1e-6;
  // bins x frames, entries in (0, 1]. Absent means all ones.
  std::optional<RealMatrix> weights;

  // Throws InvalidArgument when rho <= 0, lambda < 0, epsilon <= 0 or a
  // weight falls outside (0, 1].
  void validate() const;
};

// Nearest point of the clipping-consistent set:
//   max(x, tau) on H, y on R, min(x, -tau) on L.
void project_gamma(std::span<const double> x, const ClipMask& mask,
                   std::span<const double> y, std::span<double> out);
Signal project_gamma(const Signal& x, const ClipMask& mask, const Signal& y);

// (1 - threshold / |z|)_+ z, with 0 for z = 0.
Spectrogram soft_threshold(const Spectrogram& z, double threshold);

// Per-bin soft-thresholding with threshold base * weights(m, n).
Spectrogram weighted_soft_threshold(const Spectrogram& z, double base,
                                    const RealMatrix& weights);

// (1 - lambda w / (F + eps)^2)_+ z where F is the estimated clean magnitude.
// The estimate must be non-negative and finite.
Spectrogram applade_threshold(const Spectrogram& z, const RealMatrix& estimate,
                              const ThresholdParams& params);

// lambda = 30 p.
double lambda_from_clip_ratio(double p);

}  // namespace pnpdeclip

#endif  // PNPDECLIP_OPERATORS_HPP_
