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

#include "pnpdeclip/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pnpdeclip/error.hpp"

namespace pnpdeclip {

Signal::Signal(std::vector<double> samples, double sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) throw InvalidArgument("signal must not be empty");
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
    throw InvalidArgument("sample rate must be positive");
  }
  for (std::size_t t = 0; t < samples_.size(); ++t) {
    if (!std::isfinite(samples_[t])) {
      throw InvalidArgument("non-finite sample at index " + std::to_string(t));
    }
  }
}

double Signal::peak() const {
  double m = 0.0;
  for (double s : samples_) m = std::max(m, std::abs(s));
  return m;
}

double Signal::norm() const {
  double acc = 0.0;
  for (double s : samples_) acc += s * s;
  return std::sqrt(acc);
}

ClipMask::ClipMask(double tau, std::vector<SampleClass> labels)
    : tau_(tau), labels_(std::move(labels)) {
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) {
    throw InvalidArgument("clipping threshold must be positive");
  }
  for (std::size_t t = 0; t < labels_.size(); ++t) {
    switch (labels_[t]) {
      case SampleClass::kHigh: high_.push_back(t); break;
      case SampleClass::kLow: low_.push_back(t); break;
      case SampleClass::kRegular: regular_.push_back(t); break;
    }
  }
}

double ClipMask::clip_ratio() const {
  if (labels_.empty()) return 0.0;
  return static_cast<double>(high_.size() + low_.size()) /
         static_cast<double>(labels_.size());
}

Signal hard_clip(const Signal& x, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  std::vector<double> out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double v = x[t];
    if (v >= tau) {
      out[t] = tau;
    } else if (v <= -tau) {
      out[t] = -tau;
    } else {
      out[t] = v;
    }
  }
  return Signal(std::move(out), x.sample_rate());
}

ClipMask clip_mask(const Signal& y, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  const double limit = tau * (1.0 + 1e-12);
  std::vector<SampleClass> labels(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double v = y[t];
    if (std::abs(v) > limit) {
      throw InconsistentObservation("sample " + std::to_string(t) + " = " +
                                    std::to_string(v) +
                                    " exceeds the clipping threshold");
    }
    if (v >= tau) {
      labels[t] = SampleClass::kHigh;
    } else if (v <= -tau) {
      labels[t] = SampleClass::kLow;
    } else {
      labels[t] = SampleClass::kRegular;
    }
  }
  return ClipMask(tau, std::move(labels));
}

double sdr(std::span<const double> reference,
           std::span<const double> estimate) {
  if (reference.size() != estimate.size()) {
    throw ShapeMismatch("sdr: length mismatch");
  }
  double ref_energy = 0.0;
  double err_energy = 0.0;
  for (std::size_t t = 0; t < reference.size(); ++t) {
    const double e = reference[t] - estimate[t];
    ref_energy += reference[t] * reference[t];
    err_energy += e * e;
  }
  if (ref_energy == 0.0) throw InvalidArgument("sdr: all-zero reference");
  if (err_energy == 0.0) return kPerfectSdr;
  return 10.0 * std::log10(ref_energy / err_energy);
}

double sdr(const Signal& reference, const Signal& estimate) {
  return sdr(reference.samples(), estimate.samples());
}

double delta_sdr(std::span<const double> truth,
                 std::span<const double> restored,
                 std::span<const double> clipped) {
  if (restored.size() != clipped.size()) {
    throw ShapeMismatch("delta_sdr: length mismatch");
  }
  if (std::equal(restored.begin(), restored.end(), clipped.begin())) {
    // Still validates the reference.
    sdr(truth, clipped);
    return 0.0;
  }
  return sdr(truth, restored) - sdr(truth, clipped);
}

double delta_sdr(const Signal& truth, const Signal& restored,
                 const Signal& clipped) {
  return delta_sdr(truth.samples(), restored.samples(), clipped.samples());
}

double threshold_for_input_sdr(const Signal& x, double target_sdr_db) {
  constexpr double kToleranceDb = 0.01;
  constexpr int kMaxSteps = 200;
  if (std::isnan(target_sdr_db)) throw InvalidArgument("target SDR is NaN");
  const double peak = x.peak();
  if (peak == 0.0) throw InvalidArgument("cannot clip an all-zero signal");
  if (std::isinf(target_sdr_db) && target_sdr_db > 0.0) return peak;

  double lo = 0.0;
  double hi = peak;
  for (int i = 0; i < kMaxSteps; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double achieved = sdr(x, hard_clip(x, mid));
    if (std::abs(achieved - target_sdr_db) <= kToleranceDb) return mid;
    if (achieved < target_sdr_db) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NoSolution("no clipping threshold reaches " +
                   std::to_string(target_sdr_db) + " dB input SDR");
}

Signal peak_normalize(const Signal& x) {
  const double peak = x.peak();
  if (peak == 0.0) throw InvalidArgument("cannot normalize an all-zero signal");
  std::vector<double> out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) out[t] = x[t] / peak;
  return Signal(std::move(out), x.sample_rate());
}

bool is_clipping_consistent(std::span<const double> x, const ClipMask& mask,
                            std::span<const double> y) {
  if (x.size() != mask.size() || y.size() != mask.size()) return false;
  const double tau = mask.tau();
  for (std::size_t t = 0; t < x.size(); ++t) {
    switch (mask.label(t)) {
      case SampleClass::kRegular:
        if (x[t] != y[t]) return false;
        break;
      case SampleClass::kHigh:
        if (!(x[t] >= tau)) return false;
        break;
      case SampleClass::kLow:
        if (!(x[t] <= -tau)) return false;
        break;
    }
  }
  return true;
}

}  // namespace pnpdeclip
