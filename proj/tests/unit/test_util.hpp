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

#ifndef PNPDECLIP_TESTS_UNIT_TEST_UTIL_HPP_
#define PNPDECLIP_TESTS_UNIT_TEST_UTIL_HPP_

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "pnpdeclip/gabor.hpp"
#include "pnpdeclip/signal.hpp"

namespace pnpdeclip::testing {

inline std::vector<double> gaussian(std::mt19937_64& rng, std::size_t n,
                                    double stddev = 1.0) {
  std::normal_distribution<double> d(0.0, stddev);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

inline Signal random_signal(std::mt19937_64& rng, std::size_t n) {
  return Signal(gaussian(rng, n));
}

inline Spectrogram random_spectrogram(std::mt19937_64& rng,
                                      const GaborConfig& cfg) {
  std::normal_distribution<double> d(0.0, 1.0);
  ComplexMatrix m(cfg.bins(), cfg.frames());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = {d(rng), d(rng)};
  }
  return Spectrogram(std::move(m), cfg.channels());
}

inline double rel_diff(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

// Sum of sinusoids with unit peak after normalization.
inline Signal multisine(std::size_t n, std::vector<double> freqs_hz,
                        std::vector<double> amps, double rate = 16000.0) {
  std::vector<double> x(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; k < freqs_hz.size(); ++k) {
      x[t] += amps[k] * std::sin(2.0 * M_PI * freqs_hz[k] * t / rate + 0.3 * k);
    }
  }
  return peak_normalize(Signal(std::move(x), rate));
}

}  // namespace pnpdeclip::testing

#endif  // PNPDECLIP_TESTS_UNIT_TEST_UTIL_HPP_
