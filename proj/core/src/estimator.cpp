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

#include "pnpdeclip/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "pnpdeclip/error.hpp"

namespace pnpdeclip {
namespace {

class IdentityEstimator final : public MagnitudeEstimator {
 public:
  RealMatrix estimate(const RealMatrix& magnitude) const override {
    return magnitude;
  }
  std::string name() const override { return "identity"; }
};

class OracleEstimator final : public MagnitudeEstimator {
 public:
  explicit OracleEstimator(RealMatrix magnitude)
      : magnitude_(std::move(magnitude)) {}

  RealMatrix estimate(const RealMatrix& magnitude) const override {
    if (magnitude.rows() != magnitude_.rows() ||
        magnitude.cols() != magnitude_.cols()) {
      throw ShapeMismatch("oracle estimator: input shape differs from truth");
    }
    return magnitude_;
  }
  std::string name() const override { return "oracle"; }

 private:
  RealMatrix magnitude_;
};

class UNetEstimator final : public MagnitudeEstimator {
 public:
  explicit UNetEstimator(UNet net) : net_(std::move(net)) {}

  RealMatrix estimate(const RealMatrix& magnitude) const override {
    if (magnitude.rows() < 2) {
      throw ShapeMismatch("U-Net estimator needs at least two frequency rows");
    }
    const auto rows = static_cast<std::size_t>(magnitude.rows() - 1);
    const auto cols = static_cast<std::size_t>(magnitude.cols());
    Tensor3 in(1, rows, cols);
    for (std::size_t m = 0; m < rows; ++m) {
      for (std::size_t n = 0; n < cols; ++n) {
        in(0, m, n) = magnitude(static_cast<Eigen::Index>(m),
                                static_cast<Eigen::Index>(n));
      }
    }
    const Tensor3 out = net_.forward(in);
    RealMatrix est = RealMatrix::Zero(magnitude.rows(), magnitude.cols());
    for (std::size_t m = 0; m < rows; ++m) {
      for (std::size_t n = 0; n < cols; ++n) {
        const double v = out(0, m, n);
        est(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
            std::isfinite(v) ? std::max(v, 0.0) : 0.0;
      }
    }
    return est;
  }
  std::string name() const override { return "unet"; }

 private:
  UNet net_;
};

}  // namespace

EstimatorPtr identity_estimator() {
  return std::make_shared<const IdentityEstimator>();
}

EstimatorPtr oracle_estimator(const Signal& truth, const GaborConfig& cfg) {
  return std::make_shared<const OracleEstimator>(dgt(truth, cfg).magnitude());
}

EstimatorPtr unet_estimator(UNet net) {
  return std::make_shared<const UNetEstimator>(std::move(net));
}

EstimatorPtr load_unet(const std::filesystem::path& path) {
  return unet_estimator(UNet::from_tensors(read_weight_file(path)));
}

}  // namespace pnpdeclip
