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

#include "pnpdeclip/corpus.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "pnpdeclip/error.hpp"

namespace pnpdeclip {

Signal synth_signal(std::uint64_t seed, std::size_t index,
                    const CorpusOptions& options) {
  if (options.length == 0 || options.sample_rate <= 0.0 ||
      options.min_harmonics < 1 ||
      options.max_harmonics < options.min_harmonics ||
      !(options.min_f0_hz > 0.0) || options.max_f0_hz < options.min_f0_hz) {
    throw InvalidArgument("invalid corpus options");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  const double f0 = uniform(options.min_f0_hz, options.max_f0_hz);
  const int harmonics = std::uniform_int_distribution<int>(
      options.min_harmonics, options.max_harmonics)(rng);
  const double decay = uniform(0.8, 1.5);
  const double nyquist = 0.5 * options.sample_rate;

  std::vector<double> amp;
  std::vector<double> freq;
  std::vector<double> phase;
  for (int k = 1; k <= harmonics; ++k) {
    const double p = uniform(0.0, kTwoPi);
    if (k * f0 >= nyquist) continue;
    amp.push_back(std::pow(static_cast<double>(k), -decay));
    freq.push_back(k * f0);
    phase.push_back(p);
  }
  const double depth = uniform(0.3, 0.7);
  const double rate = uniform(1.0, 5.0);
  const double am_phase = uniform(0.0, kTwoPi);

  const std::size_t n = options.length;
  std::vector<double> x(n, 0.0);
  double energy = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double time = static_cast<double>(t) / options.sample_rate;
    double s = 0.0;
    for (std::size_t k = 0; k < amp.size(); ++k) {
      s += amp[k] * std::sin(kTwoPi * freq[k] * time + phase[k]);
    }
    s *= 1.0 + depth * std::sin(kTwoPi * rate * time + am_phase);
    x[t] = s;
    energy += s * s;
  }
  const double rms = std::sqrt(energy / static_cast<double>(n));
  std::normal_distribution<double> noise(
      0.0, rms * std::pow(10.0, options.noise_floor_db / 20.0));
  for (double& s : x) s += noise(rng);
  return peak_normalize(Signal(std::move(x), options.sample_rate));
}

std::vector<Signal> synth_corpus(std::uint64_t seed, std::size_t count,
                                 const CorpusOptions& options) {
  if (count == 0) throw InvalidArgument("corpus count must be positive");
  std::vector<Signal> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(synth_signal(seed, i, options));
  }
  return out;
}

}  // namespace pnpdeclip
