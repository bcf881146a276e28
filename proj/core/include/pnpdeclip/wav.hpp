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

#ifndef PNPDECLIP_WAV_HPP_
#define PNPDECLIP_WAV_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pnpdeclip/signal.hpp"

namespace pnpdeclip {

enum class WavFormat { kFloat32, kPcm16 };

// Mono RIFF/WAVE, 16-bit PCM or 32-bit IEEE float (plain or extensible
// header). Multichannel files, other codecs and truncated data are
// rejected with ParseError.
Signal decode_wav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_wav(const Signal& signal,
                                     WavFormat format = WavFormat::kFloat32);

Signal read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const Signal& signal,
               WavFormat format = WavFormat::kFloat32);

}  // namespace pnpdeclip

#endif  // PNPDECLIP_WAV_HPP_
