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

#include "pnpdeclip/admm.hpp"

#include <chrono>
#include <cmath>

#include "pnpdeclip/operators.hpp"

namespace pnpdeclip {
namespace {

bool all_finite(std::span<const double> v) {
  for (double s : v) {
    if (!std::isfinite(s)) return false;
  }
  return true;
}

double l2(std::span<const double> v) {
  double acc = 0.0;
  for (double s : v) acc += s * s;
  return std::sqrt(acc);
}

void check_inputs(const Signal& y, const ClipMask& mask,
                  const GaborConfig& cfg) {
  if (y.size() != mask.size()) {
    throw ShapeMismatch("clip mask length does not match the observation");
  }
  if (y.size() != cfg.signal_length()) {
    throw ShapeMismatch("observation length does not match the Gabor config");
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
  if (trace_every < 1) throw InvalidArgument("trace_every must be >= 1");
  if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be non-negative");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(divergence_factor > 0.0)) {
    throw InvalidArgument("divergence factor must be positive");
  }
  if (method == Method::kApplade && !estimator) {
    throw InvalidArgument("applade requires a magnitude estimator");
  }
}

std::optional<double> IterationTrace::time_to_fraction(double fraction) const {
  if (records.empty() || !records.back().delta_sdr_db) return std::nullopt;
  const double final_value = *records.back().delta_sdr_db;
  const double target = final_value - (1.0 - fraction) * std::abs(final_value);
  for (const TraceRecord& r : records) {
    if (r.delta_sdr_db && *r.delta_sdr_db >= target) return r.elapsed_s;
  }
  return records.back().elapsed_s;
}

AdmmState init_state(const Signal& y, const ClipMask& mask,
                     const GaborConfig& cfg) {
  check_inputs(y, mask, cfg);
  Spectrogram v = dgt(y, cfg);
  return AdmmState{y.vector(), std::move(v), Spectrogram::zeros(cfg), 0, 0.0,
                   0.0};
}

AdmmState step(AdmmState state, const SolverConfig& solver,
               const ClipMask& mask, const Signal& y, const GaborConfig& cfg) {
  check_inputs(y, mask, cfg);
  const int k = state.k + 1;

  Spectrogram diff(state.v.values() - state.u.values(), cfg.channels());
  std::vector<double> x = idgt_samples(diff, cfg);
  project_gamma(x, mask, y.samples(), x);
  if (!all_finite(x)) {
    throw DivergenceError("non-finite signal iterate", k);
  }
  const double y_norm = y.norm();
  if (y_norm > 0.0 && l2(x) > solver.divergence_factor * y_norm) {
    throw DivergenceError("signal energy exceeded " +
                              std::to_string(solver.divergence_factor) +
                              "x the observation",
                          k);
  }

  const Spectrogram gx = dgt(x, cfg);
  const Spectrogram z(gx.values() + state.u.values(), cfg.channels());

  std::optional<RealMatrix> weights;
  if (solver.parabola_weights) weights = parabola_weights(cfg);

  Spectrogram v_new = [&] {
    if (solver.method == Method::kPwl1) {
      const double base = solver.lambda / solver.rho;
      if (weights) return weighted_soft_threshold(z, base, *weights);
      return soft_threshold(z, base);
    }
    const RealMatrix estimate = solver.estimator->estimate(z.magnitude());
    ThresholdParams params;
    params.rho = solver.rho;
    params.lambda = solver.lambda;
    params.epsilon = solver.epsilon;
    params.weights = std::move(weights);
    return applade_threshold(z, estimate, params);
  }();

  ComplexMatrix residual = gx.values() - v_new.values();
  Spectrogram u_new(state.u.values() + residual, cfg.channels());
  if (!v_new.values().allFinite() || !u_new.values().allFinite()) {
    throw DivergenceError("non-finite coefficient iterate", k);
  }

  AdmmState next{std::move(x), std::move(v_new), std::move(u_new), k, 0.0,
                 0.0};
  next.primal_residual = Spectrogram(std::move(residual), cfg.channels()).norm();
  next.dual_change =
      Spectrogram(next.v.values() - state.v.values(), cfg.channels()).norm();
  return next;
}

DeclipResult declip(const Signal& y, const ClipMask& mask,
                    const GaborConfig& cfg, const SolverConfig& solver,
                    const Signal* truth) {
  solver.validate();
  check_inputs(y, mask, cfg);
  if (truth && truth->size() != y.size()) {
    throw ShapeMismatch("truth length does not match the observation");
  }

  using Clock = std::chrono::steady_clock;
  IterationTrace trace;
  AdmmState state = init_state(y, mask, cfg);
  const auto start = Clock::now();
  for (int i = 0; i < solver.iterations; ++i) {
    try {
      state = step(std::move(state), solver, mask, y, cfg);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.what(), e.iteration(), std::move(trace));
    }
    if (state.k % solver.trace_every == 0 || state.k == solver.iterations) {
      TraceRecord rec;
      rec.iteration = state.k;
      rec.primal_residual = state.primal_residual;
      rec.dual_change = state.dual_change;
      if (truth) {
        rec.delta_sdr_db = delta_sdr(truth->samples(), state.x, y.samples());
      }
      rec.elapsed_s =
          std::chrono::duration<double>(Clock::now() - start).count();
      trace.records.push_back(rec);
    }
  }
  const double seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  return DeclipResult{Signal(std::move(state.x), y.sample_rate()),
                      std::move(trace), solver.iterations, seconds};
}

}  // namespace pnpdeclip
