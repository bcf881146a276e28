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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "pnpdeclip/error.hpp"
#include "test_util.hpp"

namespace pnpdeclip {
namespace {

using testing::gaussian;
using testing::random_spectrogram;
using testing::rel_diff;

// Literal double sum:
//   (Gx)[m, n] = sum_t x[(t + a n) mod T] g[t] exp(-2 pi i m t / M).
ComplexMatrix brute_force_dgt(const std::vector<double>& x,
                              const GaborConfig& cfg) {
  const std::size_t T = cfg.signal_length();
  const std::size_t M = cfg.channels();
  ComplexMatrix out(cfg.bins(), cfg.frames());
  for (std::size_t n = 0; n < cfg.frames(); ++n) {
    for (std::size_t m = 0; m < cfg.bins(); ++m) {
      std::complex<double> acc = 0.0;
      for (std::size_t t = 0; t < cfg.window_length(); ++t) {
        const double phase = -2.0 * M_PI * static_cast<double>(m * t) / M;
        acc += x[(t + cfg.hop() * n) % T] * cfg.window()[t] *
               std::polar(1.0, phase);
      }
      out(m, n) = acc;
    }
  }
  return out;
}

double max_rel(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

TEST(GaborConfigTest, DefaultGeometry) {
  const GaborConfig cfg = GaborConfig::standard();
  EXPECT_EQ(cfg.signal_length(), 16384u);
  EXPECT_EQ(cfg.hop(), 256u);
  EXPECT_EQ(cfg.channels(), 1024u);
  EXPECT_EQ(cfg.window_length(), 1024u);
  EXPECT_EQ(cfg.frames(), 64u);
  EXPECT_EQ(cfg.bins(), 513u);
}

TEST(GaborConfigTest, RejectsBadGeometry) {
  const std::vector<double> w = hann_window(16);
  EXPECT_THROW(GaborConfig(100, 8, 16, w), InvalidArgument);  // a does not divide T
  EXPECT_THROW(GaborConfig(64, 8, 15, w), InvalidArgument);   // odd M
  EXPECT_THROW(GaborConfig(64, 8, 8, w), InvalidArgument);    // M < L
  EXPECT_THROW(GaborConfig(8, 4, 16, w), InvalidArgument);    // L > T
  EXPECT_THROW(GaborConfig(64, 32, 16, w), FrameIncomplete);  // gaps
}

TEST(DgtTest, ImpulseAtZero) {
  // Rectangular base: g[0] is non-zero.
  const std::vector<double> box(8, 1.0);
  const GaborConfig cfg(64, 8, 16, box);
  std::vector<double> x(64, 0.0);
  x[0] = 1.0;
  const Spectrogram s = dgt(x, cfg);
  for (std::size_t m = 0; m < cfg.bins(); ++m) {
    EXPECT_NEAR(std::abs(s(m, 0) - cfg.window()[0]), 0.0, 1e-15);
  }
  // Hann starts at zero, so frame 0 vanishes entirely.
  const GaborConfig hann(64, 8, 16, hann_window(16));
  const Spectrogram h = dgt(x, hann);
  for (std::size_t m = 0; m < hann.bins(); ++m) EXPECT_EQ(h(m, 0), 0.0);
}

TEST(DgtTest, ZeroInZeroOut) {
  const GaborConfig cfg = GaborConfig::standard();
  const Spectrogram s = dgt(std::vector<double>(16384, 0.0), cfg);
  EXPECT_EQ(s.values().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(idgt_samples(Spectrogram::zeros(cfg), cfg),
            std::vector<double>(16384, 0.0));
}

TEST(DgtTest, MatchesBruteForceSpecConfig) {
  std::mt19937_64 rng(1);
  const GaborConfig cfg(64, 8, 16, hann_window(16));
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> x = gaussian(rng, 64);
    EXPECT_LT(max_rel(dgt(x, cfg).values(), brute_force_dgt(x, cfg)), 1e-10);
  }
}

TEST(DgtTest, MatchesBruteForceRandomConfigs) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> positive(0.1, 1.0);
  struct Geometry { std::size_t T, a, M, L; };
  for (const Geometry g : {Geometry{128, 16, 32, 32}, Geometry{128, 8, 32, 20},
                           Geometry{96, 12, 24, 13}, Geometry{120, 10, 20, 20},
                           Geometry{64, 4, 8, 7}, Geometry{32, 32, 32, 32}}) {
    std::vector<double> base(g.L);
    for (double& b : base) b = positive(rng);
    const GaborConfig cfg(g.T, g.a, g.M, base);
    const std::vector<double> x = gaussian(rng, g.T);
    EXPECT_LT(max_rel(dgt(x, cfg).values(), brute_force_dgt(x, cfg)), 1e-10)
        << g.T << " " << g.a << " " << g.M << " " << g.L;
  }
}

TEST(DgtTest, LengthMismatch) {
  const GaborConfig cfg(64, 8, 16, hann_window(16));
  EXPECT_THROW(dgt(std::vector<double>(63, 0.0), cfg), ShapeMismatch);
  const GaborConfig other(128, 8, 16, hann_window(16));
  EXPECT_THROW(idgt_samples(Spectrogram::zeros(other), cfg), ShapeMismatch);
}

TEST(DgtTest, Linearity) {
  std::mt19937_64 rng(3);
  const GaborConfig cfg = GaborConfig::standard();
  const std::vector<double> x = gaussian(rng, 16384);
  const std::vector<double> y = gaussian(rng, 16384);
  const double alpha = 0.7, beta = -2.3;
  std::vector<double> mix(16384);
  for (std::size_t t = 0; t < mix.size(); ++t) mix[t] = alpha * x[t] + beta * y[t];
  const ComplexMatrix lhs = dgt(mix, cfg).values();
  const ComplexMatrix rhs = alpha * dgt(x, cfg).values() + beta * dgt(y, cfg).values();
  EXPECT_LT((lhs - rhs).norm() / rhs.norm(), 1e-12);
}

TEST(DgtTest, ParsevalAndReconstructionDefaultConfig) {
  std::mt19937_64 rng(4);
  const GaborConfig cfg = GaborConfig::standard();
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> x = gaussian(rng, 16384);
    double energy = 0.0;
    for (double v : x) energy += v * v;
    const Spectrogram s = dgt(x, cfg);
    ASSERT_LE(std::abs(s.squared_norm() - energy), 1e-10 * energy);
    ASSERT_LE(rel_diff(idgt_samples(s, cfg), x), 1e-10);
  }
}

TEST(DgtTest, AdjointIdentity) {
  std::mt19937_64 rng(5);
  for (const GaborConfig& cfg :
       {GaborConfig(64, 8, 16, hann_window(16)), GaborConfig::standard(),
        GaborConfig(96, 12, 24, std::vector<double>(13, 1.0))}) {
    for (int trial = 0; trial < 5; ++trial) {
      const std::vector<double> x = gaussian(rng, cfg.signal_length());
      const Spectrogram s = random_spectrogram(rng, cfg);
      const double lhs = inner_product(dgt(x, cfg), s);
      const std::vector<double> gs = idgt_samples(s, cfg);
      double rhs = 0.0;
      for (std::size_t t = 0; t < x.size(); ++t) rhs += x[t] * gs[t];
      EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(rhs) + 1e-12);
    }
  }
}

TEST(SpectrogramTest, TwoSidedNormCountsInteriorBinsTwice) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 1);
  m(0, 0) = 1.0;
  m(1, 0) = {0.0, 2.0};
  m(2, 0) = 3.0;
  const Spectrogram s(m, 4);
  EXPECT_DOUBLE_EQ(s.squared_norm(), 1.0 + 2.0 * 4.0 + 9.0);
  EXPECT_THROW(Spectrogram(m, 6), ShapeMismatch);
  EXPECT_EQ(bin_multiplicity(0, 4), 1.0);
  EXPECT_EQ(bin_multiplicity(1, 4), 2.0);
  EXPECT_EQ(bin_multiplicity(2, 4), 1.0);
}

TEST(TightWindowTest, RectangularWithoutOverlapIsProportional) {
  const std::vector<double> box(16, 2.0);
  const std::vector<double> g = tight_window(box, 16, 16, 64);
  for (double v : g) EXPECT_NEAR(v, g[0], 1e-15);
  EXPECT_NEAR(g[0], 1.0 / 4.0, 1e-15);  // 2 / sqrt(16 * 4)
}

TEST(TightWindowTest, OverlapSumIsConstant) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> positive(0.05, 1.0);
  struct Geometry { std::size_t a, M, L, T; };
  for (const Geometry g : {Geometry{256, 1024, 1024, 16384}, Geometry{8, 32, 30, 128},
                           Geometry{5, 20, 17, 100}, Geometry{3, 10, 9, 27}}) {
    std::vector<double> base(g.L);
    for (double& b : base) b = positive(rng);
    if (g.L == 1024) base = hann_window(1024);
    const std::vector<double> w = tight_window(base, g.a, g.M, g.T);
    std::vector<double> sum(g.T, 0.0);
    for (std::size_t n = 0; n < g.T / g.a; ++n) {
      for (std::size_t t = 0; t < g.L; ++t) sum[(t + g.a * n) % g.T] += w[t] * w[t];
    }
    for (double s : sum) EXPECT_NEAR(s, 1.0 / g.M, 1e-12);
  }
}

TEST(TightWindowTest, Errors) {
  EXPECT_THROW(tight_window(std::vector<double>{1.0, 0.0}, 2, 2, 8), FrameIncomplete);
  EXPECT_THROW(tight_window(std::vector<double>{1.0, -1.0}, 1, 2, 8), InvalidArgument);
  EXPECT_THROW(tight_window(std::vector<double>{1.0, 1.0}, 3, 2, 8), InvalidArgument);
}

TEST(HannWindowTest, Periodic) {
  const std::vector<double> w = hann_window(8);
  EXPECT_EQ(w[0], 0.0);
  EXPECT_NEAR(w[4], 1.0, 1e-15);
  EXPECT_NEAR(w[2], 0.5, 1e-15);
  EXPECT_NEAR(w[6], 0.5, 1e-15);
}

TEST(ParabolaWeightTest, SpecExamples) {
  EXPECT_EQ(parabola_weight(1023, 1024), 1.0);
  EXPECT_EQ(parabola_weight(0, 1024), 1.0 / (1024.0 * 1024.0));
  const double expected[] = {1.0 / 16, 4.0 / 16, 9.0 / 16, 1.0};
  for (std::size_t m = 0; m < 4; ++m) EXPECT_EQ(parabola_weight(m, 4), expected[m]);
}

TEST(ParabolaWeightTest, MatrixIsStrictlyIncreasingAndConstantInTime) {
  const GaborConfig cfg = GaborConfig::standard();
  const RealMatrix w = parabola_weights(cfg);
  ASSERT_EQ(w.rows(), 513);
  ASSERT_EQ(w.cols(), 64);
  for (Eigen::Index m = 0; m < w.rows(); ++m) {
    EXPECT_EQ(w.row(m).minCoeff(), w.row(m).maxCoeff());
    if (m > 0) {
      EXPECT_GT(w(m, 0), w(m - 1, 0));
    }
    EXPECT_GT(w(m, 0), 0.0);
    EXPECT_LE(w(m, 0), 1.0);
  }
  // Stored bins stop at Nyquist, (M/2 + 1)^2 / M^2.
  EXPECT_DOUBLE_EQ(w(512, 0), 513.0 * 513.0 / (1024.0 * 1024.0));
}

}  // namespace
}  // namespace pnpdeclip
