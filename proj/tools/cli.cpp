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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "pnpdeclip/admm.hpp"
#include "pnpdeclip/corpus.hpp"
#include "pnpdeclip/error.hpp"
#include "pnpdeclip/estimator.hpp"
#include "pnpdeclip/experiment.hpp"
#include "pnpdeclip/gabor.hpp"
#include "pnpdeclip/operators.hpp"
#include "pnpdeclip/signal.hpp"
#include "pnpdeclip/wav.hpp"

namespace pnpdeclip::cli {
namespace {

namespace fs = std::filesystem;

struct DeclipArgs {
  std::string in;
  std::string out;
  std::string method;
  std::optional<double> tau;
  std::optional<double> input_sdr;
  int iters = 200;
  std::optional<double> lambda;
  std::optional<double> lambda_slope;
  bool auto_lambda = false;
  double epsilon = 1e-6;
  double rho = 1.0;
  double max_growth = 10.0;
  std::string model;
  std::string truth;
  std::string trace;
};

struct ClipArgs {
  std::string in;
  std::string out;
  std::optional<double> tau;
  std::optional<double> input_sdr;
  bool pcm16 = false;
};

struct SynthArgs {
  std::uint64_t seed = 1;
  std::size_t count = 20;
  std::string out_dir;
};

struct BenchArgs {
  std::string spec;
  std::string out_dir;
};

std::string fmt(double v, const char* f = "%.4f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Zero-extends y to the next length the default frame accepts. Padded
// samples are regular with value 0, so they stay pinned by the projection.
std::size_t padded_length(std::size_t n) {
  const GaborConfig probe = GaborConfig::standard();
  const std::size_t hop = probe.hop();
  std::size_t len = std::max(n, probe.window_length());
  return (len + hop - 1) / hop * hop;
}

Signal pad(const Signal& s, std::size_t length) {
  std::vector<double> v = s.vector();
  v.resize(length, 0.0);
  return Signal(std::move(v), s.sample_rate());
}

Signal crop(const Signal& s, std::size_t length) {
  std::vector<double> v(s.samples().begin(), s.samples().begin() + length);
  return Signal(std::move(v), s.sample_rate());
}

void write_trace(const fs::path& path, const IterationTrace& trace) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << "iteration,primal_residual,dual_change,delta_sdr_db,elapsed_s\n";
  for (const TraceRecord& r : trace.records) {
    os << r.iteration << ',' << fmt(r.primal_residual, "%.9g") << ','
       << fmt(r.dual_change, "%.9g") << ','
       << (r.delta_sdr_db ? fmt(*r.delta_sdr_db, "%.9g") : "") << ','
       << fmt(r.elapsed_s, "%.9g") << '\n';
  }
  if (!os) throw IoError("failed writing " + path.string());
}

int run_declip(const DeclipArgs& a, std::ostream& out) {
  const MethodKind kind = parse_method_kind(a.method);
  if (kind == MethodKind::kClipOnly) {
    throw InvalidArgument("declip needs a restoration method");
  }
  if (kind == MethodKind::kAppladeDnn && a.model.empty()) {
    throw InvalidArgument("--method applade-dnn requires --model");
  }
  const Signal input = read_wav(a.in);

  std::optional<Signal> truth;
  Signal observed = input;
  double tau = 0.0;
  if (a.input_sdr) {
    // The input is clean; clip it to the requested level first.
    tau = threshold_for_input_sdr(input, *a.input_sdr);
    observed = hard_clip(input, tau);
    truth = input;
  } else if (a.tau) {
    tau = *a.tau;
  } else {
    tau = input.peak();
  }
  if (!a.truth.empty()) {
    truth = read_wav(a.truth);
    if (truth->size() != observed.size()) {
      throw InvalidArgument("--truth length differs from --in");
    }
  }
  if (kind == MethodKind::kAppladeOracle && !truth) {
    throw InvalidArgument(
        "--method applade-oracle requires --truth or --input-sdr");
  }

  const std::size_t n = observed.size();
  const std::size_t len = padded_length(n);
  const Signal y = pad(observed, len);
  const ClipMask mask = clip_mask(y, tau);
  const GaborConfig cfg = GaborConfig::standard(len);
  std::optional<Signal> padded_truth;
  if (truth) padded_truth = pad(*truth, len);

  MethodSpec method;
  method.kind = kind;
  method.iterations = a.iters;
  method.epsilon = a.epsilon;
  method.rho = a.rho;
  method.lambda.fixed = a.lambda;
  method.lambda.slope = a.auto_lambda ? std::optional(kAutoLambdaSlope)
                                      : a.lambda_slope;
  const double p = static_cast<double>(mask.high().size() + mask.low().size()) /
                   static_cast<double>(n);
  EstimatorPtr dnn;
  if (kind == MethodKind::kAppladeDnn) dnn = load_unet(a.model);
  SolverConfig solver = make_solver(
      method, p, padded_truth ? &*padded_truth : nullptr, cfg, dnn);
  solver.divergence_factor = a.max_growth;

  IterationTrace trace;
  std::optional<DeclipResult> result;
  try {
    result = declip(y, mask, cfg, solver,
                    padded_truth ? &*padded_truth : nullptr);
    trace = result->trace;
  } catch (const DivergenceError& e) {
    trace = e.trace();
    if (!a.trace.empty()) write_trace(a.trace, trace);
    throw;
  }
  if (!a.trace.empty()) write_trace(a.trace, trace);

  const Signal restored = crop(result->restored, n);
  write_wav(a.out, Signal(restored.vector(), input.sample_rate()));

  out << "method=" << a.method << " tau=" << fmt(tau, "%.6g")
      << " p=" << fmt(p) << " lambda=" << fmt(solver.lambda, "%.6g")
      << " iterations=" << result->iterations
      << " time_per_iter_s=" << fmt(result->loop_seconds / result->iterations, "%.5f");
  if (truth) {
    out << " delta_sdr_db=" << fmt(delta_sdr(*truth, restored, observed), "%.3f");
    if (auto t2 = result->trace.time_to_fraction(0.95)) {
      out << " time_to_95_s=" << fmt(*t2, "%.4f");
    }
  }
  out << '\n';
  return kOk;
}

int run_clip(const ClipArgs& a, std::ostream& out) {
  const Signal x = read_wav(a.in);
  const double tau = a.tau ? *a.tau : threshold_for_input_sdr(x, *a.input_sdr);
  const Signal y = hard_clip(x, tau);
  write_wav(a.out, y, a.pcm16 ? WavFormat::kPcm16 : WavFormat::kFloat32);
  const ClipMask mask = clip_mask(y, tau);
  const double s = sdr(x, y);
  out << "tau=" << fmt(tau, "%.9g") << " p=" << fmt(mask.clip_ratio())
      << " input_sdr_db=" << (std::isinf(s) ? std::string("inf") : fmt(s, "%.3f"))
      << '\n';
  return kOk;
}

int run_synth(const SynthArgs& a, std::ostream& out) {
  if (a.count == 0) throw InvalidArgument("--count must be positive");
  fs::create_directories(a.out_dir);
  const std::vector<Signal> corpus = synth_corpus(a.seed, a.count);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "syn-%04zu.wav", i);
    write_wav(fs::path(a.out_dir) / name, corpus[i]);
  }
  out << "wrote " << corpus.size() << " signals to " << a.out_dir << '\n';
  return kOk;
}

int run_bench(const BenchArgs& a, std::ostream& out) {
  const ExperimentSpec spec = ExperimentSpec::load(a.spec);
  const ExperimentResult result = run_experiment(spec, fs::path(a.out_dir));
  std::size_t failures = 0;
  for (const MetricRecord& r : result.records) failures += r.status != "ok";
  out << "level_db  method               median_delta_sdr_db  median_t1_s  n\n";
  for (const LevelSummary& s : result.summary) {
    char line[160];
    std::snprintf(line, sizeof line, "%8.2f  %-20s %19s  %11s  %zu\n",
                  s.input_sdr_db, s.method.c_str(),
                  s.median_delta_sdr_db ? fmt(*s.median_delta_sdr_db, "%.3f").c_str() : "-",
                  s.median_time_per_iter_s ? fmt(*s.median_time_per_iter_s, "%.5f").c_str() : "-",
                  s.count);
    out << line;
  }
  out << result.records.size() << " rows, " << failures << " failed; see "
      << (fs::path(a.out_dir) / "metrics.csv").string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Restore hard-clipped audio."};
  app.name("pnpdeclip");
  app.require_subcommand(1);

  DeclipArgs d;
  CLI::App* declip_cmd = app.add_subcommand("declip", "Restore a clipped WAV file");
  declip_cmd->add_option("--in", d.in, "Clipped (or, with --input-sdr, clean) input")->required();
  declip_cmd->add_option("--out", d.out, "Restored output (float32 WAV)")->required();
  declip_cmd->add_option("--method", d.method, "Restoration method")
      ->required()
      ->check(CLI::IsMember({"pwl1", "applade-oracle", "applade-identity", "applade-dnn"}));
  auto* tau_opt = declip_cmd->add_option("--tau", d.tau, "Clipping threshold of the input")
                      ->check(CLI::PositiveNumber);
  auto* sdr_opt = declip_cmd->add_option(
      "--input-sdr", d.input_sdr, "Clip the clean input to this SDR (dB) first");
  tau_opt->excludes(sdr_opt);
  declip_cmd->add_option("--iters", d.iters, "Iterations")
      ->capture_default_str()
      ->check(CLI::Range(1, 1000000));
  auto* lambda_opt = declip_cmd->add_option("--lambda", d.lambda, "Regularization weight")
                         ->check(CLI::NonNegativeNumber);
  auto* auto_opt = declip_cmd->add_flag("--auto-lambda", d.auto_lambda,
                                        "lambda = 30 * clip ratio");
  auto* slope_opt = declip_cmd->add_option("--lambda-slope", d.lambda_slope,
                                           "lambda = slope * clip ratio")
                        ->check(CLI::NonNegativeNumber);
  lambda_opt->excludes(auto_opt)->excludes(slope_opt);
  auto_opt->excludes(slope_opt);
  declip_cmd->add_option("--epsilon", d.epsilon, "Denominator offset")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  declip_cmd->add_option("--rho", d.rho, "ADMM penalty (pwl1)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  declip_cmd->add_option("--max-growth", d.max_growth,
                         "Abort with exit code 4 once ||x|| exceeds this multiple of ||y||")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  declip_cmd->add_option("--model", d.model, "Weight file for applade-dnn");
  declip_cmd->add_option("--truth", d.truth, "Clean reference for metrics and the oracle");
  declip_cmd->add_option("--trace", d.trace, "Per-iteration CSV");

  ClipArgs c;
  CLI::App* clip_cmd = app.add_subcommand("clip", "Hard-clip a WAV file");
  clip_cmd->add_option("--in", c.in)->required();
  clip_cmd->add_option("--out", c.out)->required();
  auto* ctau = clip_cmd->add_option("--tau", c.tau)->check(CLI::PositiveNumber);
  auto* csdr = clip_cmd->add_option("--input-sdr", c.input_sdr);
  ctau->excludes(csdr);
  clip_cmd->add_flag("--pcm16", c.pcm16, "Write 16-bit PCM instead of float32");

  SynthArgs s;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Write a synthetic test corpus");
  synth_cmd->add_option("--seed", s.seed)->capture_default_str();
  synth_cmd->add_option("--count", s.count)->capture_default_str();
  synth_cmd->add_option("--out-dir", s.out_dir)->required();

  BenchArgs b;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run an experiment sweep");
  bench_cmd->add_option("--spec", b.spec, "Experiment JSON")->required();
  bench_cmd->add_option("--out-dir", b.out_dir)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArgs;
  }
  if (clip_cmd->parsed() && !c.tau && !c.input_sdr) {
    err << "clip: one of --tau or --input-sdr is required\n";
    return kBadArgs;
  }

  try {
    if (declip_cmd->parsed()) return run_declip(d, out);
    if (clip_cmd->parsed()) return run_clip(c, out);
    if (synth_cmd->parsed()) return run_synth(s, out);
    if (bench_cmd->parsed()) return run_bench(b, out);
  } catch (const DivergenceError& e) {
    err << "diverged at iteration " << e.iteration() << ": " << e.what() << '\n';
    return kDivergence;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kBadArgs;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kBadArgs;
}

}  // namespace pnpdeclip::cli
