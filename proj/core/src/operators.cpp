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

#include "pnpdeclip/operators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pnpdeclip/error.hpp"

namespace pnpdeclip {
namespace {

void check_shape(const Spectrogram& z, const RealMatrix& m, const char* what) {
  if (m.rows() != z.values().rows() || m.cols() != z.values().cols()) {
    throw ShapeMismatch(std::string(what) + ": shape does not match spectrogram");
  }
}

std::complex<double> shrink(std::complex<double> z, double threshold) {
  const double mag = std::abs(z);
  if (mag <= threshold) return {0.0, 0.0};
  return (1.0 - threshold / mag) * z;
}

}  // namespace

void ThresholdParams::validate() const {
  if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be non-negative");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (weights) {
    const auto& w = *weights;
    if (!((w.array() > 0.0).all() && (w.array() <= 1.0).all())) {
      throw InvalidArgument("weights must lie in (0, 1]");
    }
  }
}

void project_gamma(std::span<const double> x, const ClipMask& mask,
                   std::span<const double> y, std::span<double> out) {
  const std::size_t T = mask.size();
  if (x.size() != T || y.size() != T || out.size() != T) {
    throw ShapeMismatch("project_gamma: length mismatch");
  }
  const double tau = mask.tau();
  for (std::size_t t = 0; t < T; ++t) {
    switch (mask.label(t)) {
      case SampleClass::kRegular: out[t] = y[t]; break;
      case SampleClass::kHigh: out[t] = std::max(x[t], tau); break;
      case SampleClass::kLow: out[t] = std::min(x[t], -tau); break;
    }
  }
}

Signal project_gamma(const Signal& x, const ClipMask& mask, const Signal& y) {
  std::vector<double> out(mask.size());
  project_gamma(x.samples(), mask, y.samples(), out);
  return Signal(std::move(out), y.sample_rate());
}

Spectrogram soft_threshold(const Spectrogram& z, double threshold) {
  if (!(threshold >= 0.0)) {
    throw InvalidArgument("soft_threshold: threshold must be non-negative");
  }
  ComplexMatrix out = z.values().unaryExpr(
      [threshold](std::complex<double> v) { return shrink(v, threshold); });
  return Spectrogram(std::move(out), z.channels());
}

Spectrogram weighted_soft_threshold(const Spectrogram& z, double base,
                                    const RealMatrix& weights) {
  check_shape(z, weights, "weighted_soft_threshold");
  if (!(base >= 0.0)) {
    throw InvalidArgument("weighted_soft_threshold: base must be non-negative");
  }
  ComplexMatrix out(z.values().rows(), z.values().cols());
  for (Eigen::Index n = 0; n < out.cols(); ++n) {
    for (Eigen::Index m = 0; m < out.rows(); ++m) {
      out(m, n) = shrink(z.values()(m, n), base * weights(m, n));
    }
  }
  return Spectrogram(std::move(out), z.channels());
}

Spectrogram applade_threshold(const Spectrogram& z, const RealMatrix& estimate,
                              const ThresholdParams& params) {
  params.validate();
  check_shape(z, estimate, "applade_threshold estimate");
  if (params.weights) check_shape(z, *params.weights, "applade_threshold weights");
  if (!(estimate.array() >= 0.0).all() || !estimate.allFinite()) {
    throw InvalidArgument(
        "applade_threshold: estimate must be non-negative and finite");
  }
  const double lambda = params.lambda;
  const double eps = params.epsilon;
  ComplexMatrix out(z.values().rows(), z.values().cols());
  for (Eigen::Index n = 0; n < out.cols(); ++n) {
    for (Eigen::Index m = 0; m < out.rows(); ++m) {
      const double w = params.weights ? (*params.weights)(m, n) : 1.0;
      const double denom = estimate(m, n) + eps;
      const double factor = std::max(1.0 - lambda * w / (denom * denom), 0.0);
      out(m, n) = factor * z.values()(m, n);
    }
  }
  return Spectrogram(std::move(out), z.channels());
}

double lambda_from_clip_ratio(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("clip ratio must lie in [0, 1]");
  }
  return 30.0 * p;
}

}  // namespace pnpdeclip
