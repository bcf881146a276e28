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

#ifndef PNPDECLIP_CORPUS_HPP_
#define PNPDECLIP_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pnpdeclip/signal.hpp"

namespace pnpdeclip {

struct CorpusOptions {
  std::size_t length = 16384;
  double sample_rate = kDefaultSampleRate;
  double min_f0_hz = 80.0;
  double max_f0_hz = 300.0;
  int min_harmonics = 5;
  int max_harmonics = 15;
  double noise_floor_db = -30.0;  // noise rms relative to harmonic rms
};

// Harmonic-plus-noise test signals: random fundamental, decaying harmonic
// amplitudes k^-d with random phases, slow amplitude modulation and a white
// noise floor. Peak-normalized. Signal i depends only on (seed, i).
std::vector<Signal> synth_corpus(std::uint64_t seed, std::size_t count,
                                 const CorpusOptions& options = {});
Signal synth_signal(std::uint64_t seed, std::size_t index,
                    const CorpusOptions& options = {});

}  // namespace pnpdeclip

#endif  // PNPDECLIP_CORPUS_HPP_
