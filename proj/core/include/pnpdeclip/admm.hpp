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

#ifndef PNPDECLIP_ADMM_HPP_
#define PNPDECLIP_ADMM_HPP_

#include <optional>
#include <string>
#include <vector>

#include "pnpdeclip/error.hpp"
#include "pnpdeclip/estimator.hpp"
#include "pnpdeclip/gabor.hpp"
#include "pnpdeclip/signal.hpp"

namespace pnpdeclip {

enum class Method {
  // Parabola-weighted l1: v-update is weighted soft-thresholding with
  // threshold (lambda / rho) * w.
  kPwl1,
  // v-update is (1 - lambda w / (F(|z|) + eps)^2)_+ z with a pluggable F.
  kApplade,
};

struct SolverConfig {
  Method method = Method::kApplade;
  EstimatorPtr estimator;  // required for kApplade
  int iterations = 200;
  double rho = 1.0;  // pwl1 only
  double lambda = 0.0;
  double epsilon = 1e-6;
  bool parabola_weights = true;
  // Record a trace entry every `trace_every` iterations (and at the last).
  int trace_every = 1;
  // Abort when ||x|| exceeds this multiple of ||y||.
  double divergence_factor = 10.0;

  void validate() const;
};

struct TraceRecord {
  int iteration = 0;             // k after the update, 1-based
  double primal_residual = 0.0;  // ||G x - v||
  double dual_change = 0.0;      // ||v_new - v_old||
  std::optional<double> delta_sdr_db;
  double elapsed_s = 0.0;
};

struct IterationTrace {
  std::vector<TraceRecord> records;

  // Seconds until Delta-SDR first reaches `fraction` of its final value.
  // Empty when the trace carries no Delta-SDR.
  std::optional<double> time_to_fraction(double fraction) const;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int iteration,
                  IterationTrace trace = {})
      : Error(what), iteration_(iteration), trace_(std::move(trace)) {}

  int iteration() const { return iteration_; }
  const IterationTrace& trace() const { return trace_; }

 private:
  int iteration_;
  IterationTrace trace_;
};

// Iterates of the scaled-dual ADMM. v and u live in the one-sided
// coefficient domain of the config.
struct AdmmState {
  std::vector<double> x;
  Spectrogram v;
  Spectrogram u;
  int k = 0;
  double primal_residual = 0.0;
  double dual_change = 0.0;
};

// x = y, v = G y, u = 0.
AdmmState init_state(const Signal& y, const ClipMask& mask,
                     const GaborConfig& cfg);

// One round:
//   x <- P(G*(v - u));  v <- T(G x + u);  u <- u + G x - v.
// Throws DivergenceError on non-finite iterates or energy blow-up.
AdmmState step(AdmmState state, const SolverConfig& solver,
               const ClipMask& mask, const Signal& y, const GaborConfig& cfg);

struct DeclipResult {
  Signal restored;
  IterationTrace trace;
  int iterations = 0;
  double loop_seconds = 0.0;  // wall time of the iteration loop only
};

// Runs `solver.iterations` rounds from init_state(). If `truth` is given the
// trace carries Delta-SDR against it.
DeclipResult declip(const Signal& y, const ClipMask& mask,
                    const GaborConfig& cfg, const SolverConfig& solver,
                    const Signal* truth = nullptr);

}  // namespace pnpdeclip

#endif  // PNPDECLIP_ADMM_HPP_
