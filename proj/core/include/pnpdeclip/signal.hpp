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

#ifndef PNPDECLIP_SIGNAL_HPP_
#define PNPDECLIP_SIGNAL_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace pnpdeclip {

inline constexpr double kDefaultSampleRate = 16000.0;

// Mono real-valued waveform. Non-empty and finite by construction.
class Signal {
 public:
  explicit Signal(std::vector<double> samples,
                  double sample_rate = kDefaultSampleRate);

  std::size_t size() const { return samples_.size(); }
  double sample_rate() const { return sample_rate_; }
  double operator[](std::size_t t) const { return samples_[t]; }
  std::span<const double> samples() const { return samples_; }
  const std::vector<double>& vector() const { return samples_; }

  double peak() const;
  double norm() const;

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
  double sample_rate_;
};

enum class SampleClass : std::uint8_t { kRegular, kHigh, kLow };

// Partition of sample indices into clipped-high (H), regular (R) and
// clipped-low (L) sets for a threshold tau.
class ClipMask {
 public:
  ClipMask(double tau, std::vector<SampleClass> labels);

  double tau() const { return tau_; }
  std::size_t size() const { return labels_.size(); }
  SampleClass label(std::size_t t) const { return labels_[t]; }
  std::span<const SampleClass> labels() const { return labels_; }

  const std::vector<std::size_t>& high() const { return high_; }
  const std::vector<std::size_t>& regular() const { return regular_; }
  const std::vector<std::size_t>& low() const { return low_; }

  // (|H| + |L|) / T.
  double clip_ratio() const;

 private:
  double tau_;
  std::vector<SampleClass> labels_;
  std::vector<std::size_t> high_;
  std::vector<std::size_t> regular_;
  std::vector<std::size_t> low_;
};

// Returned by sdr() when the estimate equals the reference exactly.
inline constexpr double kPerfectSdr = std::numeric_limits<double>::infinity();

Signal hard_clip(const Signal& x, double tau);

// Labels y against tau. Samples equal to +-tau land in H / L. Throws
// InconsistentObservation if any |y[t]| exceeds tau * (1 + 1e-12).
ClipMask clip_mask(const Signal& y, double tau);

// 20 log10(||reference|| / ||reference - estimate||) in dB.
double sdr(const Signal& reference, const Signal& estimate);
double sdr(std::span<const double> reference, std::span<const double> estimate);

// sdr(truth, restored) - sdr(truth, clipped). Zero when restored == clipped.
double delta_sdr(const Signal& truth, const Signal& restored,
                 const Signal& clipped);
double delta_sdr(std::span<const double> truth,
                 std::span<const double> restored,
                 std::span<const double> clipped);

// Finds tau such that sdr(x, hard_clip(x, tau)) is within 0.01 dB of
// target_sdr_db by bisection over (0, max|x|). +inf maps to max|x|.
double threshold_for_input_sdr(const Signal& x, double target_sdr_db);

Signal peak_normalize(const Signal& x);

// True if x agrees with y on R and satisfies the bounds on H and L.
bool is_clipping_consistent(std::span<const double> x, const ClipMask& mask,
                            std::span<const double> y);

}  // namespace pnpdeclip

#endif  // PNPDECLIP_SIGNAL_HPP_
