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

#ifndef PNPDECLIP_WEIGHT_FILE_HPP_
#define PNPDECLIP_WEIGHT_FILE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pnpdeclip {

// Little-endian tensor container:
//   "APLW" | u32 version (1) | u32 count |
//   count x { u16 name_len | name | u8 rank | u32 dims[rank] | f32 values }
//   | u32 CRC-32 of every preceding byte.
// Golden-vector files reuse the container with the reserved names
// "test.input", "test.layer.<k>" and "test.output".
inline constexpr std::uint32_t kWeightFileVersion = 1;

struct NamedTensor {
  std::string name;
  std::vector<std::uint32_t> dims;
  std::vector<float> values;

  std::size_t element_count() const;
};

using TensorList = std::vector<NamedTensor>;

std::vector<std::uint8_t> encode_weight_file(const TensorList& tensors);
// Throws ParseError naming the failing byte offset.
TensorList decode_weight_file(std::span<const std::uint8_t> bytes);

void write_weight_file(const std::filesystem::path& path,
                       const TensorList& tensors);
TensorList read_weight_file(const std::filesystem::path& path);

const NamedTensor* find_tensor(const TensorList& tensors,
                               const std::string& name);

}  // namespace pnpdeclip

#endif  // PNPDECLIP_WEIGHT_FILE_HPP_
