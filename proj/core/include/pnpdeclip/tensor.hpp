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

#ifndef PNPDECLIP_TENSOR_HPP_
#define PNPDECLIP_TENSOR_HPP_

#include <cstddef>
#include <vector>

namespace pnpdeclip {

// Dense channels x height x width feature map, row-major.
struct Tensor3 {
  Tensor3() = default;
  Tensor3(std::size_t c, std::size_t h, std::size_t w, double fill = 0.0)
      : channels(c), height(h), width(w), data(c * h * w, fill) {}

  double& operator()(std::size_t c, std::size_t h, std::size_t w) {
    return data[(c * height + h) * width + w];
  }
  double operator()(std::size_t c, std::size_t h, std::size_t w) const {
    return data[(c * height + h) * width + w];
  }
  std::size_t size() const { return data.size(); }
  bool same_shape(const Tensor3& o) const {
    return channels == o.channels && height == o.height && width == o.width;
  }

  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;
};

// Convolution kernel bank, d0 x d1 x kh x kw, row-major. For conv2d the
// layout is [out, in, kh, kw]; for deconv2d it is [in, out, kh, kw].
struct Tensor4 {
  Tensor4() = default;
  Tensor4(std::size_t a, std::size_t b, std::size_t h, std::size_t w,
          double fill = 0.0)
      : d0(a), d1(b), kh(h), kw(w), data(a * b * h * w, fill) {}

  double& operator()(std::size_t i, std::size_t j, std::size_t y,
                     std::size_t x) {
    return data[((i * d1 + j) * kh + y) * kw + x];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t y,
                    std::size_t x) const {
    return data[((i * d1 + j) * kh + y) * kw + x];
  }

  std::size_t d0 = 0;
  std::size_t d1 = 0;
  std::size_t kh = 0;
  std::size_t kw = 0;
  std::vector<double> data;
};

double max_abs_diff(const Tensor3& a, const Tensor3& b);
double dot(const Tensor3& a, const Tensor3& b);

}  // namespace pnpdeclip

#endif  // PNPDECLIP_TENSOR_HPP_
