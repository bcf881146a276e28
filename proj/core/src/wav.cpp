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

#include "pnpdeclip/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "pnpdeclip/error.hpp"

namespace pnpdeclip {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

}  // namespace

Signal decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) throw ParseError("file shorter than a RIFF header", 0);
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0) {
    throw ParseError("missing RIFF tag", 0);
  }
  if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ParseError("missing WAVE tag", 8);
  }

  std::optional<Format> fmt;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* hdr = bytes.data() + pos;
    const std::uint32_t chunk_size = le32(hdr + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + 16 > bytes.size()) {
        throw ParseError("truncated fmt chunk", pos);
      }
      const std::uint8_t* p = bytes.data() + body;
      Format f;
      f.tag = le16(p);
      f.channels = le16(p + 2);
      f.sample_rate = le32(p + 4);
      f.bits = le16(p + 14);
      if (f.tag == kFormatExtensible) {
        if (chunk_size < 40 || body + 40 > bytes.size()) {
          throw ParseError("truncated extensible fmt chunk", pos);
        }
        // First two bytes of the sub-format GUID carry the codec tag.
        f.tag = le16(p + 24);
      }
      if (f.channels != 1) {
        throw ParseError("expected a mono file, found " +
                             std::to_string(f.channels) + " channels",
                         body + 2);
      }
      if (f.sample_rate == 0) throw ParseError("zero sample rate", body + 4);
      const bool pcm16 = f.tag == kFormatPcm && f.bits == 16;
      const bool float32 = f.tag == kFormatFloat && f.bits == 32;
      if (!pcm16 && !float32) {
        throw ParseError("unsupported codec (format tag " +
                             std::to_string(f.tag) + ", " +
                             std::to_string(f.bits) + " bits)",
                         body);
      }
      fmt = f;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      if (!fmt) throw ParseError("data chunk before fmt chunk", pos);
      if (body + chunk_size > bytes.size()) {
        throw ParseError("data chunk declares " + std::to_string(chunk_size) +
                             " bytes but only " +
                             std::to_string(bytes.size() - body) + " remain",
                         pos + 4);
      }
      const std::size_t width = fmt->bits / 8;
      if (chunk_size % width != 0) {
        throw ParseError("data chunk size is not a whole number of samples",
                         pos + 4);
      }
      const std::size_t count = chunk_size / width;
      if (count == 0) throw ParseError("empty data chunk", pos);
      std::vector<double> samples(count);
      const std::uint8_t* p = bytes.data() + body;
      for (std::size_t i = 0; i < count; ++i) {
        if (fmt->bits == 16) {
          const auto v = static_cast<std::int16_t>(le16(p + 2 * i));
          samples[i] = static_cast<double>(v) / 32768.0;
        } else {
          const float v = std::bit_cast<float>(le32(p + 4 * i));
          if (!std::isfinite(v)) {
            throw ParseError("non-finite float sample", body + 4 * i);
          }
          samples[i] = static_cast<double>(v);
        }
      }
      return Signal(std::move(samples), static_cast<double>(fmt->sample_rate));
    }
    // Chunks are word aligned.
    pos = body + chunk_size + (chunk_size & 1u);
  }
  throw ParseError(fmt ? "missing data chunk" : "missing fmt chunk",
                   std::min(pos, bytes.size()));
}

std::vector<std::uint8_t> encode_wav(const Signal& signal, WavFormat format) {
  const bool pcm = format == WavFormat::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t rate =
      static_cast<std::uint32_t>(std::lround(signal.sample_rate()));
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(signal.size() * (bits / 8));

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, pcm ? kFormatPcm : kFormatFloat);
  put16(out, 1);
  put32(out, rate);
  put32(out, rate * (bits / 8));
  put16(out, bits / 8);
  put16(out, bits);
  put_tag(out, "data");
  put32(out, data_bytes);
  for (double s : signal.samples()) {
    if (pcm) {
      const double scaled = std::round(s * 32768.0);
      const auto q = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
      put16(out, static_cast<std::uint16_t>(q));
    } else {
      put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    }
  }
  return out;
}

Signal read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

void write_wav(const std::filesystem::path& path, const Signal& signal,
               WavFormat format) {
  const std::vector<std::uint8_t> bytes = encode_wav(signal, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace pnpdeclip
