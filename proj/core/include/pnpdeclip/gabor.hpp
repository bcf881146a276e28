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

#ifndef PNPDECLIP_GABOR_HPP_
#define PNPDECLIP_GABOR_HPP_

#include <Eigen/Core>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "pnpdeclip/signal.hpp"

namespace pnpdeclip {

using ComplexMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;
using RealMatrix = Eigen::MatrixXd;

// Geometry of a discrete Gabor transform with circular boundary:
// `frames` windows of length `window_length`, hopped by `hop`, each analysed
// by a `channels`-point DFT. Only bins 0..channels/2 are stored.
//
// The stored window is the canonical tight version of the base window, so
// the synthesis operator is both the adjoint and the inverse of analysis.
// Immutable; copies share FFT plans and are safe to use from many threads.
class GaborConfig {
 public:
  GaborConfig(std::size_t signal_length, std::size_t hop, std::size_t channels,
              std::span<const double> base_window);

  // Hann 1024, hop 256 (75% overlap), 1024 channels.
  static GaborConfig standard(std::size_t signal_length = 16384);

  std::size_t signal_length() const { return signal_length_; }
  std::size_t hop() const { return hop_; }
  std::size_t channels() const { return channels_; }
  std::size_t frames() const { return signal_length_ / hop_; }
  std::size_t window_length() const { return window_.size(); }
  // channels / 2 + 1.
  std::size_t bins() const { return channels_ / 2 + 1; }
  std::span<const double> window() const { return window_; }

 private:
  friend struct GaborKernel;
  struct Plans;

  std::size_t signal_length_;
  std::size_t hop_;
  std::size_t channels_;
  std::vector<double> window_;
  std::shared_ptr<const Plans> plans_;
};

// One-sided complex coefficients, bins x frames. Norms and inner products
// count every interior bin twice so that they agree with the two-sided
// transform.
class Spectrogram {
 public:
  Spectrogram(ComplexMatrix values, std::size_t channels);
  static Spectrogram zeros(const GaborConfig& cfg);

  std::size_t bins() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t frames() const {
    return static_cast<std::size_t>(values_.cols());
  }
  std::size_t channels() const { return channels_; }

  const ComplexMatrix& values() const { return values_; }
  ComplexMatrix& values() { return values_; }
  std::complex<double> operator()(std::size_t m, std::size_t n) const {
    return values_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  }

  RealMatrix magnitude() const { return values_.cwiseAbs(); }
  double squared_norm() const;
  double norm() const;
  bool same_shape(const Spectrogram& other) const;

 private:
  ComplexMatrix values_;
  std::size_t channels_;
};

// Two-sided multiplicity of one-sided bin m (1 for DC and Nyquist, else 2).
double bin_multiplicity(std::size_t m, std::size_t channels);

// Real inner product of the two-sided extensions.
double inner_product(const Spectrogram& a, const Spectrogram& b);

// Analysis: (Gx)[m, n] = sum_t x[t + a n] g[t] exp(-2 pi i m t / M).
Spectrogram dgt(std::span<const double> x, const GaborConfig& cfg);
Spectrogram dgt(const Signal& x, const GaborConfig& cfg);

// Synthesis G*: overlap-add of windowed inverse DFTs. Treats the input as
// the one-sided half of a Hermitian-symmetric array.
std::vector<double> idgt_samples(const Spectrogram& s, const GaborConfig& cfg);
Signal idgt(const Spectrogram& s, const GaborConfig& cfg,
            double sample_rate = kDefaultSampleRate);

// Periodic Hann window of the given length.
std::vector<double> hann_window(std::size_t length);

// g[t] = base[t] / sqrt(M * sum_n base^2[t - a n]). Throws FrameIncomplete
// if the overlap-sum vanishes anywhere on the period.
std::vector<double> tight_window(std::span<const double> base, std::size_t hop,
                                 std::size_t channels,
                                 std::size_t signal_length);

// (m + 1)^2 / M^2.
double parabola_weight(std::size_t m, std::size_t channels);
// bins x frames matrix of parabola weights, constant along frames.
RealMatrix parabola_weights(const GaborConfig& cfg);

}  // namespace pnpdeclip

#endif  // PNPDECLIP_GABOR_HPP_
