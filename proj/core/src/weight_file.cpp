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

#include "pnpdeclip/weight_file.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "pnpdeclip/error.hpp"

namespace pnpdeclip {
namespace {

constexpr char kMagic[4] = {'A', 'P', 'L', 'W'};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in bounded chunks.
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t n = std::min<std::size_t>(bytes.size() - pos, 1u << 30);
    crc = crc32(crc, bytes.data() + pos, static_cast<uInt>(n));
    pos += n;
  }
  return static_cast<std::uint32_t>(crc);
}

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8(const char* what) {
    need(1, what);
    return in_[pos_++];
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    std::uint16_t v = static_cast<std::uint16_t>(in_[pos_] | (in_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(in_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
  std::string str(std::size_t n, const char* what) {
    need(n, what);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (remaining() < n) {
      throw ParseError(std::string("truncated weight file while reading ") + what,
                       pos_);
    }
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t NamedTensor::element_count() const {
  std::size_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  return n;
}

std::vector<std::uint8_t> encode_weight_file(const TensorList& tensors) {
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(kWeightFileVersion);
  w.u32(static_cast<std::uint32_t>(tensors.size()));
  for (const NamedTensor& t : tensors) {
    if (t.name.size() > 0xFFFF) throw InvalidArgument("tensor name too long");
    if (t.dims.size() > 0xFF) throw InvalidArgument("tensor rank too large");
    if (t.values.size() != t.element_count()) {
      throw ShapeMismatch("tensor '" + t.name + "' value count does not match dims");
    }
    w.u16(static_cast<std::uint16_t>(t.name.size()));
    w.bytes(t.name.data(), t.name.size());
    w.u8(static_cast<std::uint8_t>(t.dims.size()));
    for (std::uint32_t d : t.dims) w.u32(d);
    for (float v : t.values) w.f32(v);
  }
  const std::uint32_t crc = crc32_of(w.buffer());
  w.u32(crc);
  return std::move(w.buffer());
}

TensorList decode_weight_file(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) {
    throw ParseError("weight file too short", bytes.size());
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ParseError("bad magic, expected \"APLW\"", 0);
  }
  const std::span<const std::uint8_t> body = bytes.first(bytes.size() - 4);
  Reader footer(bytes.subspan(bytes.size() - 4));
  const std::uint32_t stored_crc = footer.u32("crc");
  if (crc32_of(body) != stored_crc) {
    throw ParseError("CRC-32 mismatch", bytes.size() - 4);
  }

  Reader r(body);
  r.str(4, "magic");
  const std::size_t version_at = r.pos();
  const std::uint32_t version = r.u32("version");
  if (version != kWeightFileVersion) {
    throw ParseError("unsupported weight file version " + std::to_string(version),
                     version_at);
  }
  const std::uint32_t count = r.u32("tensor count");
  TensorList tensors;
  tensors.reserve(std::min<std::uint32_t>(count, 4096));
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor t;
    const std::uint16_t name_len = r.u16("name length");
    t.name = r.str(name_len, "tensor name");
    const std::uint8_t rank = r.u8("rank");
    t.dims.resize(rank);
    std::uint64_t elements = 1;
    constexpr std::uint64_t kSaturated = UINT64_MAX / 4;
    for (std::uint8_t k = 0; k < rank; ++k) {
      t.dims[k] = r.u32("dimension");
      const std::uint64_t d = t.dims[k];
      elements = (d != 0 && elements > kSaturated / d) ? kSaturated : elements * d;
    }
    if (elements > r.remaining() / 4) {
      throw ParseError("tensor '" + t.name + "' extends past end of file",
                       r.pos());
    }
    t.values.resize(static_cast<std::size_t>(elements));
    for (float& v : t.values) v = r.f32("tensor values");
    tensors.push_back(std::move(t));
  }
  if (r.remaining() != 0) {
    throw ParseError("trailing bytes after last tensor", r.pos());
  }
  return tensors;
}

void write_weight_file(const std::filesystem::path& path,
                       const TensorList& tensors) {
  const std::vector<std::uint8_t> bytes = encode_weight_file(tensors);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

TensorList read_weight_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_weight_file(bytes);
}

const NamedTensor* find_tensor(const TensorList& tensors,
                               const std::string& name) {
  for (const NamedTensor& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

}  // namespace pnpdeclip
