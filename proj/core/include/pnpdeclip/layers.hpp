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

#ifndef PNPDECLIP_LAYERS_HPP_
#define PNPDECLIP_LAYERS_HPP_

#include <cstddef>
#include <span>

#include "pnpdeclip/tensor.hpp"

namespace pnpdeclip {

struct Extent2 {
  std::size_t h = 0;
  std::size_t w = 0;
  friend bool operator==(const Extent2&, const Extent2&) = default;
};

// Zero-padded strided cross-correlation. weight is [out, in, kh, kw].
Tensor3 conv2d(const Tensor3& x, const Tensor4& weight,
               std::span<const double> bias, Extent2 stride, Extent2 padding);

// Transposed convolution, the adjoint of conv2d with the same weight,
// stride and padding. weight is [in, out, kh, kw]. Output extent is
// (in - 1) * stride - 2 * padding + kernel + output_padding.
Tensor3 deconv2d(const Tensor3& x, const Tensor4& weight,
                 std::span<const double> bias, Extent2 stride, Extent2 padding,
                 Extent2 output_padding);

// Normalises over channels x height x width, then applies a per-channel
// affine transform.
void layer_norm(Tensor3& x, std::span<const double> gamma,
                std::span<const double> beta, double epsilon = 1e-5);

void leaky_relu(Tensor3& x, double negative_slope = 0.01);
double leaky_relu(double v, double negative_slope = 0.01);

// Channel-wise concatenation [a; b].
Tensor3 concat(const Tensor3& a, const Tensor3& b);

}  // namespace pnpdeclip

#endif  // PNPDECLIP_LAYERS_HPP_
