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

#include <benchmark/benchmark.h>

#include <random>

#include "pnpdeclip/admm.hpp"
#include "pnpdeclip/corpus.hpp"
#include "pnpdeclip/estimator.hpp"
#include "pnpdeclip/gabor.hpp"
#include "pnpdeclip/unet.hpp"

namespace pnpdeclip {
namespace {

struct Problem {
  Signal truth;
  Signal y;
  ClipMask mask;
};

Problem make_problem(double level_db) {
  Signal truth = synth_signal(1, 0);
  const double tau = threshold_for_input_sdr(truth, level_db);
  Signal y = hard_clip(truth, tau);
  ClipMask mask = clip_mask(y, tau);
  return {std::move(truth), std::move(y), std::move(mask)};
}

void BM_Dgt(benchmark::State& state) {
  const GaborConfig cfg = GaborConfig::standard();
  const Signal x = synth_signal(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(dgt(x, cfg));
}
BENCHMARK(BM_Dgt)->Unit(benchmark::kMillisecond);

void BM_Idgt(benchmark::State& state) {
  const GaborConfig cfg = GaborConfig::standard();
  const Spectrogram c = dgt(synth_signal(1, 0), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(idgt_samples(c, cfg));
}
BENCHMARK(BM_Idgt)->Unit(benchmark::kMillisecond);

void run_steps(benchmark::State& state, const SolverConfig& solver, const Problem& p) {
  const GaborConfig cfg = GaborConfig::standard();
  AdmmState s = init_state(p.y, p.mask, cfg);
  for (auto _ : state) s = step(std::move(s), solver, p.mask, p.y, cfg);
}

void BM_StepPwl1(benchmark::State& state) {
  const Problem p = make_problem(5.0);
  SolverConfig solver;
  solver.method = Method::kPwl1;
  solver.lambda = 3.0;
  run_steps(state, solver, p);
}
BENCHMARK(BM_StepPwl1)->Unit(benchmark::kMillisecond);

void BM_StepOracle(benchmark::State& state) {
  const Problem p = make_problem(5.0);
  SolverConfig solver;
  solver.estimator = oracle_estimator(p.truth, GaborConfig::standard());
  solver.lambda = 0.01;
  run_steps(state, solver, p);
}
BENCHMARK(BM_StepOracle)->Unit(benchmark::kMillisecond);

void BM_UNetForward(benchmark::State& state) {
  UNetSpec spec;
  spec.channels = {16, 32, 64};
  const UNet net = UNet::from_tensors(random_unet_tensors(spec, 1));
  Tensor3 input(1, 512, 64);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (double& v : input.data) v = d(rng);
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(input));
}
BENCHMARK(BM_UNetForward)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace pnpdeclip

BENCHMARK_MAIN();
