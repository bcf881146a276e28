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

#include "pnpdeclip/layers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pnpdeclip/error.hpp"

namespace pnpdeclip {
namespace {

std::size_t conv_out(std::size_t in, std::size_t k, std::size_t s,
                     std::size_t p) {
  if (in + 2 * p < k) throw ShapeMismatch("conv2d: kernel larger than input");
  return (in + 2 * p - k) / s + 1;
}

void check_bias(std::span<const double> bias, std::size_t n, const char* op) {
  if (!bias.empty() && bias.size() != n) {
    throw ShapeMismatch(std::string(op) + ": bias length mismatch");
  }
}

}  // namespace

Tensor3 conv2d(const Tensor3& x, const Tensor4& weight,
               std::span<const double> bias, Extent2 stride, Extent2 padding) {
  if (weight.d1 != x.channels) {
    throw ShapeMismatch("conv2d: weight expects " + std::to_string(weight.d1) +
                        " input channels, got " + std::to_string(x.channels));
  }
  if (stride.h == 0 || stride.w == 0) throw InvalidArgument("conv2d: stride 0");
  check_bias(bias, weight.d0, "conv2d");
  const std::size_t oh = conv_out(x.height, weight.kh, stride.h, padding.h);
  const std::size_t ow = conv_out(x.width, weight.kw, stride.w, padding.w);
  Tensor3 y(weight.d0, oh, ow);
  const auto ih_max = static_cast<std::ptrdiff_t>(x.height);
  const auto iw_max = static_cast<std::ptrdiff_t>(x.width);

  for (std::size_t co = 0; co < weight.d0; ++co) {
    double* out = &y.data[co * oh * ow];
    std::fill(out, out + oh * ow, bias.empty() ? 0.0 : bias[co]);
    for (std::size_t ci = 0; ci < x.channels; ++ci) {
      const double* in = &x.data[ci * x.height * x.width];
      for (std::size_t ky = 0; ky < weight.kh; ++ky) {
        for (std::size_t kx = 0; kx < weight.kw; ++kx) {
          const double wv = weight(co, ci, ky, kx);
          if (wv == 0.0) continue;
          for (std::size_t r = 0; r < oh; ++r) {
            const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(r * stride.h + ky) -
                                      static_cast<std::ptrdiff_t>(padding.h);
            if (iy < 0 || iy >= ih_max) continue;
            const double* row = in + iy * iw_max;
            double* orow = out + r * ow;
            for (std::size_t c = 0; c < ow; ++c) {
              const std::ptrdiff_t ix =
                  static_cast<std::ptrdiff_t>(c * stride.w + kx) -
                  static_cast<std::ptrdiff_t>(padding.w);
              if (ix < 0 || ix >= iw_max) continue;
              orow[c] += wv * row[ix];
            }
          }
        }
      }
    }
  }
  return y;
}

Tensor3 deconv2d(const Tensor3& x, const Tensor4& weight,
                 std::span<const double> bias, Extent2 stride, Extent2 padding,
                 Extent2 output_padding) {
  if (weight.d0 != x.channels) {
    throw ShapeMismatch("deconv2d: weight expects " +
                        std::to_string(weight.d0) + " input channels, got " +
                        std::to_string(x.channels));
  }
  if (stride.h == 0 || stride.w == 0) {
    throw InvalidArgument("deconv2d: stride 0");
  }
  if (output_padding.h >= stride.h || output_padding.w >= stride.w) {
    throw InvalidArgument("deconv2d: output padding must be below the stride");
  }
  check_bias(bias, weight.d1, "deconv2d");
  const auto full_h = static_cast<std::ptrdiff_t>(
      (x.height - 1) * stride.h + weight.kh + output_padding.h);
  const auto full_w = static_cast<std::ptrdiff_t>(
      (x.width - 1) * stride.w + weight.kw + output_padding.w);
  const std::ptrdiff_t oh = full_h - 2 * static_cast<std::ptrdiff_t>(padding.h);
  const std::ptrdiff_t ow = full_w - 2 * static_cast<std::ptrdiff_t>(padding.w);
  if (oh <= 0 || ow <= 0) throw ShapeMismatch("deconv2d: empty output");

  Tensor3 y(weight.d1, static_cast<std::size_t>(oh),
            static_cast<std::size_t>(ow));
  for (std::size_t co = 0; co < weight.d1; ++co) {
    double* out = &y.data[co * y.height * y.width];
    std::fill(out, out + y.height * y.width, bias.empty() ? 0.0 : bias[co]);
    for (std::size_t ci = 0; ci < x.channels; ++ci) {
      const double* in = &x.data[ci * x.height * x.width];
      for (std::size_t ky = 0; ky < weight.kh; ++ky) {
        for (std::size_t kx = 0; kx < weight.kw; ++kx) {
          const double wv = weight(ci, co, ky, kx);
          if (wv == 0.0) continue;
          for (std::size_t r = 0; r < x.height; ++r) {
            const std::ptrdiff_t oy =
                static_cast<std::ptrdiff_t>(r * stride.h + ky) -
                static_cast<std::ptrdiff_t>(padding.h);
            if (oy < 0 || oy >= oh) continue;
            double* orow = out + oy * ow;
            const double* row = in + r * x.width;
            for (std::size_t c = 0; c < x.width; ++c) {
              const std::ptrdiff_t ox =
                  static_cast<std::ptrdiff_t>(c * stride.w + kx) -
                  static_cast<std::ptrdiff_t>(padding.w);
              if (ox < 0 || ox >= ow) continue;
              orow[ox] += wv * row[c];
            }
          }
        }
      }
    }
  }
  return y;
}

void layer_norm(Tensor3& x, std::span<const double> gamma,
                std::span<const double> beta, double epsilon) {
  if (gamma.size() != x.channels || beta.size() != x.channels) {
    throw ShapeMismatch("layer_norm: affine parameters must be per channel");
  }
  if (x.size() == 0) return;
  double mean = 0.0;
  for (double v : x.data) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x.data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  const double inv_std = 1.0 / std::sqrt(var + epsilon);
  const std::size_t plane = x.height * x.width;
  for (std::size_t c = 0; c < x.channels; ++c) {
    double* p = &x.data[c * plane];
    for (std::size_t i = 0; i < plane; ++i) {
      p[i] = (p[i] - mean) * inv_std * gamma[c] + beta[c];
    }
  }
}

double leaky_relu(double v, double negative_slope) {
  return v >= 0.0 ? v : negative_slope * v;
}

void leaky_relu(Tensor3& x, double negative_slope) {
  for (double& v : x.data) v = leaky_relu(v, negative_slope);
}

Tensor3 concat(const Tensor3& a, const Tensor3& b) {
  if (a.height != b.height || a.width != b.width) {
    throw ShapeMismatch("concat: spatial extents differ");
  }
  Tensor3 out(a.channels + b.channels, a.height, a.width);
  std::copy(a.data.begin(), a.data.end(), out.data.begin());
  std::copy(b.data.begin(), b.data.end(),
            out.data.begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

}  // namespace pnpdeclip
