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

#ifndef PNPDECLIP_ESTIMATOR_HPP_
#define PNPDECLIP_ESTIMATOR_HPP_

#include <filesystem>
#include <memory>
#include <string>

#include "pnpdeclip/gabor.hpp"
#include "pnpdeclip/signal.hpp"
#include "pnpdeclip/unet.hpp"

namespace pnpdeclip {

// Maps a magnitude spectrogram (bins x frames, non-negative) to an estimate
// of the clean magnitude spectrogram of the same shape. Implementations are
// immutable and estimate() is reentrant.
class MagnitudeEstimator {
 public:
  virtual ~MagnitudeEstimator() = default;
  virtual RealMatrix estimate(const RealMatrix& magnitude) const = 0;
  virtual std::string name() const = 0;
};

using EstimatorPtr = std::shared_ptr<const MagnitudeEstimator>;

// Returns its input.
EstimatorPtr identity_estimator();

// Returns |dgt(truth)| for every input. Evaluation only.
EstimatorPtr oracle_estimator(const Signal& truth, const GaborConfig& cfg);

// Wraps a U-Net: drops the Nyquist row, runs the network on the remaining
// (bins - 1) x frames map, clamps at zero and re-appends a zero Nyquist row.
EstimatorPtr unet_estimator(UNet net);
EstimatorPtr load_unet(const std::filesystem::path& path);

}  // namespace pnpdeclip

#endif  // PNPDECLIP_ESTIMATOR_HPP_
