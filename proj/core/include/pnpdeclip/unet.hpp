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

#ifndef PNPDECLIP_UNET_HPP_
#define PNPDECLIP_UNET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "pnpdeclip/layers.hpp"
#include "pnpdeclip/tensor.hpp"
#include "pnpdeclip/weight_file.hpp"

namespace pnpdeclip {

// Encoder/decoder U-Net over single-channel magnitude maps (freq x time).
//
// Encoder block i: conv(5x7, stride 2) -> layer norm -> leaky ReLU.
// Decoder block j: deconv(5x7, stride 2) -> layer norm -> leaky ReLU, then
// concatenation with the mirrored encoder output. The last decoder block is
// a bare deconv back to one channel.
//
// Tensor names (j counts decoder blocks in execution order):
//   enc.<i>.conv.weight  [c_i, c_in, 5, 7]    enc.<i>.conv.bias [c_i]
//   enc.<i>.norm.weight  [c_i]                enc.<i>.norm.bias [c_i]
//   dec.<j>.deconv.weight [c_in, c_out, 5, 7] dec.<j>.deconv.bias [c_out]
//   dec.<j>.norm.weight  [c_out]              dec.<j>.norm.bias [c_out]
// Tensors named "meta.*" or "test.*" are ignored by the loader.
struct UNetSpec {
  std::vector<std::size_t> channels;  // one entry per encoder block
  Extent2 kernel{5, 7};
  Extent2 stride{2, 2};
  Extent2 padding{2, 3};
  Extent2 output_padding{1, 1};
  double negative_slope = 0.01;
  double norm_epsilon = 1e-5;

  std::size_t blocks() const { return channels.size(); }
  // Height and width must be multiples of this.
  std::size_t size_multiple() const { return std::size_t{1} << blocks(); }

  struct Shape {
    std::string name;
    std::vector<std::uint32_t> dims;
  };
  // Every parameter tensor, in a fixed order.
  std::vector<Shape> parameter_shapes() const;
};

class UNet {
 public:
  // Infers the spec from tensor shapes and validates every parameter.
  // Throws ShapeMismatch or InvalidArgument on malformed weights.
  static UNet from_tensors(const TensorList& tensors);

  const UNetSpec& spec() const { return spec_; }
  std::size_t parameter_count() const;

  // Runs the network. When `layers` is given it receives the output of
  // every block in execution order (2 * blocks entries, pre-concatenation).
  Tensor3 forward(const Tensor3& input,
                  std::vector<Tensor3>* layers = nullptr) const;

 private:
  struct Block {
    Tensor4 weight;
    std::vector<double> bias;
    std::vector<double> gamma;  // empty for the final decoder block
    std::vector<double> beta;
  };

  UNetSpec spec_;
  std::vector<Block> encoder_;
  std::vector<Block> decoder_;
};

// Random parameters (uniform in [-scale, scale], norms at gamma = 1,
// beta = 0) in weight-file order. Deterministic in the seed.
TensorList random_unet_tensors(const UNetSpec& spec, std::uint64_t seed,
                               double scale = 0.05);

}  // namespace pnpdeclip

#endif  // PNPDECLIP_UNET_HPP_
