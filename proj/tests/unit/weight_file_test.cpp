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

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "pnpdeclip/error.hpp"

namespace pnpdeclip {
namespace {

// Bitwise reflected CRC-32 (polynomial 0xEDB88320).
std::uint32_t bitwise_crc32(const std::uint8_t* data, std::size_t n) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < n; ++i) {
    crc ^= data[i];
    for (int k = 0; k < 8; ++k) crc = (crc >> 1) ^ (0xEDB88320u & (0u - (crc & 1u)));
  }
  return ~crc;
}

void put32(std::vector<std::uint8_t>& b, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

void reseal(std::vector<std::uint8_t>& b) {
  put32(b, b.size() - 4, bitwise_crc32(b.data(), b.size() - 4));
}

TensorList sample_tensors() {
  return {{"enc.0.conv.weight", {2, 1, 2, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}},
          {"enc.0.conv.bias", {2}, {-0.5f, 0.25f}},
          {"meta.lambda_slope", {}, {30.0f}}};
}

TEST(WeightFileTest, RoundTripIsBitExact) {
  std::mt19937 rng(1);
  std::normal_distribution<float> d;
  TensorList tensors = sample_tensors();
  tensors.push_back({"test.input", {1, 8, 4}, std::vector<float>(32)});
  for (float& v : tensors.back().values) v = d(rng);
  const TensorList back = decode_weight_file(encode_weight_file(tensors));
  ASSERT_EQ(back.size(), tensors.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].name, tensors[i].name);
    EXPECT_EQ(back[i].dims, tensors[i].dims);
    ASSERT_EQ(back[i].values.size(), tensors[i].values.size());
    EXPECT_EQ(std::memcmp(back[i].values.data(), tensors[i].values.data(),
                          back[i].values.size() * sizeof(float)), 0);
  }
  EXPECT_NE(find_tensor(back, "meta.lambda_slope"), nullptr);
  EXPECT_EQ(find_tensor(back, "missing"), nullptr);
}

TEST(WeightFileTest, LayoutAndFooter) {
  const std::vector<std::uint8_t> b = encode_weight_file(sample_tensors());
  EXPECT_EQ(std::memcmp(b.data(), "APLW", 4), 0);
  EXPECT_EQ(b[4], 1);  // version, little-endian
  EXPECT_EQ(b[8], 3);  // tensor count
  EXPECT_EQ(b[12], 17);  // first name length
  std::uint32_t footer = 0;
  for (int i = 0; i < 4; ++i) footer |= std::uint32_t{b[b.size() - 4 + i]} << (8 * i);
  EXPECT_EQ(footer, bitwise_crc32(b.data(), b.size() - 4));
  // Header + names + ranks + dims + values + footer.
  EXPECT_EQ(b.size(), 12u + (2 + 17 + 1 + 16 + 48) + (2 + 15 + 1 + 4 + 8) +
                          (2 + 17 + 1 + 0 + 4) + 4);
}

TEST(WeightFileTest, CrcMismatchNamesFooterOffset) {
  std::vector<std::uint8_t> b = encode_weight_file(sample_tensors());
  b[40] ^= 0x01;
  try {
    decode_weight_file(b);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), b.size() - 4);
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
  }
}

TEST(WeightFileTest, BadMagic) {
  std::vector<std::uint8_t> b = encode_weight_file(sample_tensors());
  b[0] = 'X';
  try {
    decode_weight_file(b);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
}

TEST(WeightFileTest, BadVersion) {
  std::vector<std::uint8_t> b = encode_weight_file(sample_tensors());
  put32(b, 4, 2);
  reseal(b);
  try {
    decode_weight_file(b);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(WeightFileTest, TensorPastEnd) {
  std::vector<std::uint8_t> b = encode_weight_file(sample_tensors());
  // First dim of the first tensor sits after header, name length, name, rank.
  const std::size_t dim_at = 12 + 2 + 17 + 1;
  put32(b, dim_at, 1000);
  reseal(b);
  try {
    decode_weight_file(b);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), dim_at + 16);  // where the values would start
  }
  // Huge dimensions must not overflow into a small element count.
  put32(b, dim_at, 0xFFFFFFFFu);
  put32(b, dim_at + 4, 0xFFFFFFFFu);
  put32(b, dim_at + 8, 0x40000000u);
  put32(b, dim_at + 12, 0x10u);
  reseal(b);
  EXPECT_THROW(decode_weight_file(b), ParseError);
}

TEST(WeightFileTest, TrailingBytesAndCountMismatch) {
  std::vector<std::uint8_t> b = encode_weight_file(sample_tensors());
  put32(b, 8, 2);
  reseal(b);
  EXPECT_THROW(decode_weight_file(b), ParseError);
  put32(b, 8, 4);
  reseal(b);
  try {
    decode_weight_file(b);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), b.size() - 4);  // ran out while reading tensor 4
  }
}

TEST(WeightFileTest, TooShort) {
  const std::vector<std::uint8_t> b{'A', 'P', 'L', 'W', 1, 0};
  EXPECT_THROW(decode_weight_file(b), ParseError);
}

TEST(WeightFileTest, EncodeRejectsInconsistentTensor) {
  EXPECT_THROW(encode_weight_file({{"x", {2, 2}, {1.0f}}}), ShapeMismatch);
}

TEST(WeightFileTest, FileRoundTripAndMissingFile) {
  const auto path = std::filesystem::temp_directory_path() / "pnpdeclip_wf_test.aplw";
  write_weight_file(path, sample_tensors());
  EXPECT_EQ(read_weight_file(path).size(), 3u);
  std::filesystem::remove(path);
  EXPECT_THROW(read_weight_file(path), IoError);
}

}  // namespace
}  // namespace pnpdeclip
