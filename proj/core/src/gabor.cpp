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

#include "pnpdeclip/gabor.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "pnpdeclip/error.hpp"

namespace pnpdeclip {
namespace {

// FFTW planning is not thread-safe; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer alloc_real(std::size_t n) { return RealBuffer(fftw_alloc_real(n)); }
ComplexBuffer alloc_complex(std::size_t n) {
  return ComplexBuffer(fftw_alloc_complex(n));
}

}  // namespace

struct GaborConfig::Plans {
  explicit Plans(std::size_t channels) {
    const int m = static_cast<int>(channels);
    RealBuffer real = alloc_real(channels);
    ComplexBuffer spec = alloc_complex(channels / 2 + 1);
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(m, real.get(), spec.get(), FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(m, spec.get(), real.get(), FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;

  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

struct GaborKernel {
  static const GaborConfig::Plans& plans(const GaborConfig& cfg) {
    return *cfg.plans_;
  }
};

GaborConfig::GaborConfig(std::size_t signal_length, std::size_t hop,
                         std::size_t channels,
                         std::span<const double> base_window)
    : signal_length_(signal_length), hop_(hop), channels_(channels) {
  if (signal_length_ == 0 || hop_ == 0 || channels_ == 0) {
    throw InvalidArgument("Gabor dimensions must be positive");
  }
  if (signal_length_ % hop_ != 0) {
    throw InvalidArgument("hop must divide the signal length");
  }
  if (channels_ % 2 != 0) {
    throw InvalidArgument("channel count must be even");
  }
  if (base_window.empty() || base_window.size() > signal_length_) {
    throw InvalidArgument("window length must be in [1, signal length]");
  }
  if (base_window.size() > channels_) {
    throw InvalidArgument(
        "channel count must be at least the window length for a tight frame");
  }
  window_ = tight_window(base_window, hop_, channels_, signal_length_);
  plans_ = std::make_shared<const Plans>(channels_);
}

GaborConfig GaborConfig::standard(std::size_t signal_length) {
  const std::vector<double> hann = hann_window(1024);
  return GaborConfig(signal_length, 256, 1024, hann);
}

Spectrogram::Spectrogram(ComplexMatrix values, std::size_t channels)
    : values_(std::move(values)), channels_(channels) {
  if (channels_ == 0 || channels_ % 2 != 0 ||
      static_cast<std::size_t>(values_.rows()) != channels_ / 2 + 1) {
    throw ShapeMismatch("spectrogram rows must equal channels / 2 + 1");
  }
}

Spectrogram Spectrogram::zeros(const GaborConfig& cfg) {
  return Spectrogram(
      ComplexMatrix::Zero(static_cast<Eigen::Index>(cfg.bins()),
                          static_cast<Eigen::Index>(cfg.frames())),
      cfg.channels());
}

double bin_multiplicity(std::size_t m, std::size_t channels) {
  return (m == 0 || 2 * m == channels) ? 1.0 : 2.0;
}

double Spectrogram::squared_norm() const {
  double acc = 0.0;
  for (Eigen::Index m = 0; m < values_.rows(); ++m) {
    acc += bin_multiplicity(static_cast<std::size_t>(m), channels_) *
           values_.row(m).squaredNorm();
  }
  return acc;
}

double Spectrogram::norm() const { return std::sqrt(squared_norm()); }

bool Spectrogram::same_shape(const Spectrogram& other) const {
  return channels_ == other.channels_ && values_.rows() == other.values_.rows() &&
         values_.cols() == other.values_.cols();
}

double inner_product(const Spectrogram& a, const Spectrogram& b) {
  if (!a.same_shape(b)) throw ShapeMismatch("inner_product: shape mismatch");
  double acc = 0.0;
  for (Eigen::Index m = 0; m < a.values().rows(); ++m) {
    double row = 0.0;
    for (Eigen::Index n = 0; n < a.values().cols(); ++n) {
      row += std::real(std::conj(a.values()(m, n)) * b.values()(m, n));
    }
    acc += bin_multiplicity(static_cast<std::size_t>(m), a.channels()) * row;
  }
  return acc;
}

Spectrogram dgt(std::span<const double> x, const GaborConfig& cfg) {
  if (x.size() != cfg.signal_length()) {
    throw ShapeMismatch("dgt: signal length " + std::to_string(x.size()) +
                        " does not match config length " +
                        std::to_string(cfg.signal_length()));
  }
  const std::size_t T = cfg.signal_length();
  const std::size_t M = cfg.channels();
  const std::size_t L = cfg.window_length();
  const std::size_t a = cfg.hop();
  const std::span<const double> g = cfg.window();
  const auto& plans = GaborKernel::plans(cfg);

  RealBuffer frame = alloc_real(M);
  ComplexBuffer spec = alloc_complex(cfg.bins());
  ComplexMatrix out(static_cast<Eigen::Index>(cfg.bins()),
                    static_cast<Eigen::Index>(cfg.frames()));
  for (std::size_t n = 0; n < cfg.frames(); ++n) {
    const std::size_t offset = a * n;
    for (std::size_t t = 0; t < L; ++t) {
      std::size_t idx = offset + t;
      if (idx >= T) idx -= T;
      frame[t] = x[idx] * g[t];
    }
    for (std::size_t t = L; t < M; ++t) frame[t] = 0.0;
    fftw_execute_dft_r2c(plans.forward, frame.get(), spec.get());
    auto col = out.col(static_cast<Eigen::Index>(n));
    for (std::size_t m = 0; m < cfg.bins(); ++m) {
      col(static_cast<Eigen::Index>(m)) = {spec[m][0], spec[m][1]};
    }
  }
  return Spectrogram(std::move(out), M);
}

Spectrogram dgt(const Signal& x, const GaborConfig& cfg) {
  return dgt(x.samples(), cfg);
}

std::vector<double> idgt_samples(const Spectrogram& s, const GaborConfig& cfg) {
  if (s.bins() != cfg.bins() || s.frames() != cfg.frames() ||
      s.channels() != cfg.channels()) {
    throw ShapeMismatch("idgt: spectrogram does not conform to config");
  }
  const std::size_t T = cfg.signal_length();
  const std::size_t M = cfg.channels();
  const std::size_t L = cfg.window_length();
  const std::size_t a = cfg.hop();
  const std::span<const double> g = cfg.window();
  const auto& plans = GaborKernel::plans(cfg);

  RealBuffer frame = alloc_real(M);
  ComplexBuffer spec = alloc_complex(cfg.bins());
  std::vector<double> x(T, 0.0);
  for (std::size_t n = 0; n < cfg.frames(); ++n) {
    auto col = s.values().col(static_cast<Eigen::Index>(n));
    for (std::size_t m = 0; m < cfg.bins(); ++m) {
      const std::complex<double> c = col(static_cast<Eigen::Index>(m));
      spec[m][0] = c.real();
      spec[m][1] = c.imag();
    }
    // c2r evaluates sum over the Hermitian extension, unnormalised.
    fftw_execute_dft_c2r(plans.backward, spec.get(), frame.get());
    const std::size_t offset = a * n;
    for (std::size_t t = 0; t < L; ++t) {
      std::size_t idx = offset + t;
      if (idx >= T) idx -= T;
      x[idx] += g[t] * frame[t];
    }
  }
  return x;
}

Signal idgt(const Spectrogram& s, const GaborConfig& cfg, double sample_rate) {
  return Signal(idgt_samples(s, cfg), sample_rate);
}

std::vector<double> hann_window(std::size_t length) {
  if (length == 0) throw InvalidArgument("window length must be positive");
  std::vector<double> w(length);
  for (std::size_t t = 0; t < length; ++t) {
    w[t] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                static_cast<double>(t) /
                                static_cast<double>(length));
  }
  return w;
}

std::vector<double> tight_window(std::span<const double> base, std::size_t hop,
                                 std::size_t channels,
                                 std::size_t signal_length) {
  if (hop == 0 || channels == 0 || signal_length == 0 ||
      signal_length % hop != 0) {
    throw InvalidArgument("tight_window: hop must divide the signal length");
  }
  if (base.empty() || base.size() > signal_length) {
    throw InvalidArgument("tight_window: window longer than the signal");
  }
  for (double b : base) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
      throw InvalidArgument("tight_window: base window must be non-negative");
    }
  }
  // Overlap-sum over one period; it is hop-periodic because hop * N = T.
  std::vector<double> overlap(signal_length, 0.0);
  const std::size_t frames = signal_length / hop;
  for (std::size_t n = 0; n < frames; ++n) {
    for (std::size_t t = 0; t < base.size(); ++t) {
      overlap[(t + hop * n) % signal_length] += base[t] * base[t];
    }
  }
  for (std::size_t t = 0; t < signal_length; ++t) {
    if (!(overlap[t] > 0.0)) {
      throw FrameIncomplete("window overlap-sum vanishes at sample " +
                            std::to_string(t));
    }
  }
  std::vector<double> g(base.size());
  const double m = static_cast<double>(channels);
  for (std::size_t t = 0; t < base.size(); ++t) {
    g[t] = base[t] / std::sqrt(m * overlap[t]);
  }
  return g;
}

double parabola_weight(std::size_t m, std::size_t channels) {
  const double num = static_cast<double>(m + 1);
  const double den = static_cast<double>(channels);
  return (num * num) / (den * den);
}

RealMatrix parabola_weights(const GaborConfig& cfg) {
  RealMatrix w(static_cast<Eigen::Index>(cfg.bins()),
               static_cast<Eigen::Index>(cfg.frames()));
  for (std::size_t m = 0; m < cfg.bins(); ++m) {
    w.row(static_cast<Eigen::Index>(m))
        .setConstant(parabola_weight(m, cfg.channels()));
  }
  return w;
}

}  // namespace pnpdeclip
