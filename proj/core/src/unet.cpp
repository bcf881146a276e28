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

#include "pnpdeclip/unet.hpp"

#include <cmath>
#include <map>
#include <random>

#include "pnpdeclip/error.hpp"

namespace pnpdeclip {
namespace {

std::string enc(std::size_t i, const char* leaf) {
  return "enc." + std::to_string(i) + "." + leaf;
}
std::string dec(std::size_t j, const char* leaf) {
  return "dec." + std::to_string(j) + "." + leaf;
}

bool ignored(const std::string& name) {
  return name.rfind("meta.", 0) == 0 || name.rfind("test.", 0) == 0;
}

std::vector<double> to_double(const NamedTensor& t) {
  std::vector<double> out(t.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>(t.values[i]);
    if (!std::isfinite(out[i])) {
      throw InvalidArgument("tensor '" + t.name + "' has non-finite values");
    }
  }
  return out;
}

// Decoder block j maps in_channels(j) -> out_channels(j).
std::size_t dec_in(const UNetSpec& s, std::size_t j) {
  const std::size_t b = s.blocks();
  return j == 0 ? s.channels[b - 1] : 2 * s.channels[b - 1 - j];
}
std::size_t dec_out(const UNetSpec& s, std::size_t j) {
  const std::size_t b = s.blocks();
  return j + 1 == b ? 1 : s.channels[b - 2 - j];
}

}  // namespace

std::vector<UNetSpec::Shape> UNetSpec::parameter_shapes() const {
  std::vector<Shape> shapes;
  const auto u = [](std::size_t v) { return static_cast<std::uint32_t>(v); };
  for (std::size_t i = 0; i < blocks(); ++i) {
    const std::size_t cin = i == 0 ? 1 : channels[i - 1];
    shapes.push_back({enc(i, "conv.weight"),
                      {u(channels[i]), u(cin), u(kernel.h), u(kernel.w)}});
    shapes.push_back({enc(i, "conv.bias"), {u(channels[i])}});
    shapes.push_back({enc(i, "norm.weight"), {u(channels[i])}});
    shapes.push_back({enc(i, "norm.bias"), {u(channels[i])}});
  }
  for (std::size_t j = 0; j < blocks(); ++j) {
    const std::size_t cin = dec_in(*this, j);
    const std::size_t cout = dec_out(*this, j);
    shapes.push_back(
        {dec(j, "deconv.weight"), {u(cin), u(cout), u(kernel.h), u(kernel.w)}});
    shapes.push_back({dec(j, "deconv.bias"), {u(cout)}});
    if (j + 1 < blocks()) {
      shapes.push_back({dec(j, "norm.weight"), {u(cout)}});
      shapes.push_back({dec(j, "norm.bias"), {u(cout)}});
    }
  }
  return shapes;
}

UNet UNet::from_tensors(const TensorList& tensors) {
  std::map<std::string, const NamedTensor*> by_name;
  for (const NamedTensor& t : tensors) {
    if (ignored(t.name)) continue;
    if (!by_name.emplace(t.name, &t).second) {
      throw InvalidArgument("duplicate tensor '" + t.name + "'");
    }
  }

  UNet net;
  for (std::size_t i = 0;; ++i) {
    auto it = by_name.find(enc(i, "conv.weight"));
    if (it == by_name.end()) break;
    if (it->second->dims.size() != 4 || it->second->dims[0] == 0) {
      throw ShapeMismatch("tensor '" + it->first + "' must be rank 4");
    }
    net.spec_.channels.push_back(it->second->dims[0]);
  }
  if (net.spec_.blocks() == 0) {
    throw ShapeMismatch("weight file has no encoder blocks");
  }

  const auto shapes = net.spec_.parameter_shapes();
  if (shapes.size() != by_name.size()) {
    throw ShapeMismatch("weight file has " + std::to_string(by_name.size()) +
                        " parameter tensors, expected " +
                        std::to_string(shapes.size()));
  }
  std::map<std::string, std::vector<double>> values;
  for (const auto& shape : shapes) {
    auto it = by_name.find(shape.name);
    if (it == by_name.end()) {
      throw ShapeMismatch("missing tensor '" + shape.name + "'");
    }
    if (it->second->dims != shape.dims) {
      throw ShapeMismatch("tensor '" + shape.name + "' has unexpected shape");
    }
    values[shape.name] = to_double(*it->second);
  }

  const UNetSpec& s = net.spec_;
  const auto kernel = [&](const std::string& name, std::size_t d0,
                          std::size_t d1) {
    Tensor4 k(d0, d1, s.kernel.h, s.kernel.w);
    k.data = std::move(values[name]);
    return k;
  };
  for (std::size_t i = 0; i < s.blocks(); ++i) {
    const std::size_t cin = i == 0 ? 1 : s.channels[i - 1];
    Block b;
    b.weight = kernel(enc(i, "conv.weight"), s.channels[i], cin);
    b.bias = std::move(values[enc(i, "conv.bias")]);
    b.gamma = std::move(values[enc(i, "norm.weight")]);
    b.beta = std::move(values[enc(i, "norm.bias")]);
    net.encoder_.push_back(std::move(b));
  }
  for (std::size_t j = 0; j < s.blocks(); ++j) {
    Block b;
    b.weight = kernel(dec(j, "deconv.weight"), dec_in(s, j), dec_out(s, j));
    b.bias = std::move(values[dec(j, "deconv.bias")]);
    if (j + 1 < s.blocks()) {
      b.gamma = std::move(values[dec(j, "norm.weight")]);
      b.beta = std::move(values[dec(j, "norm.bias")]);
    }
    net.decoder_.push_back(std::move(b));
  }
  return net;
}

std::size_t UNet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& shape : spec_.parameter_shapes()) {
    std::size_t e = 1;
    for (auto d : shape.dims) e *= d;
    n += e;
  }
  return n;
}

Tensor3 UNet::forward(const Tensor3& input, std::vector<Tensor3>* layers) const {
  const std::size_t mult = spec_.size_multiple();
  if (input.channels != 1 || input.height == 0 || input.width == 0 ||
      input.height % mult != 0 || input.width % mult != 0) {
    throw ShapeMismatch("U-Net input must be 1 x H x W with H and W multiples of " +
                        std::to_string(mult));
  }
  if (layers) layers->clear();

  std::vector<Tensor3> skips;
  Tensor3 h = input;
  for (const Block& b : encoder_) {
    h = conv2d(h, b.weight, b.bias, spec_.stride, spec_.padding);
    layer_norm(h, b.gamma, b.beta, spec_.norm_epsilon);
    leaky_relu(h, spec_.negative_slope);
    if (layers) layers->push_back(h);
    skips.push_back(h);
  }
  const std::size_t blocks = spec_.blocks();
  for (std::size_t j = 0; j < blocks; ++j) {
    const Block& b = decoder_[j];
    h = deconv2d(h, b.weight, b.bias, spec_.stride, spec_.padding,
                 spec_.output_padding);
    if (j + 1 == blocks) {
      if (layers) layers->push_back(h);
      break;
    }
    layer_norm(h, b.gamma, b.beta, spec_.norm_epsilon);
    leaky_relu(h, spec_.negative_slope);
    if (layers) layers->push_back(h);
    h = concat(h, skips[blocks - 2 - j]);
  }
  return h;
}

TensorList random_unet_tensors(const UNetSpec& spec, std::uint64_t seed,
                               double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  TensorList out;
  for (const auto& shape : spec.parameter_shapes()) {
    NamedTensor t{shape.name, shape.dims, {}};
    t.values.resize(t.element_count());
    const bool is_norm = shape.name.find(".norm.") != std::string::npos;
    const bool is_gain = is_norm && shape.name.ends_with("weight");
    for (float& v : t.values) {
      v = is_norm ? (is_gain ? 1.0f : 0.0f) : static_cast<float>(dist(rng));
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace pnpdeclip
