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

#ifndef PNPDECLIP_EXPERIMENT_HPP_
#define PNPDECLIP_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pnpdeclip/admm.hpp"
#include "pnpdeclip/gabor.hpp"
#include "pnpdeclip/signal.hpp"

namespace pnpdeclip {

enum class MethodKind {
  kClipOnly,
  kPwl1,
  kAppladeOracle,
  kAppladeIdentity,
  kAppladeDnn,
};

// "clip-only", "pwl1", "applade-oracle", "applade-identity", "applade-dnn".
MethodKind parse_method_kind(const std::string& name);
std::string method_kind_name(MethodKind kind);

// Defaults picked by the calibration sweep described in the README.
inline constexpr double kDefaultPwl1Lambda = 10.0;
inline constexpr double kDefaultAppladeLambdaSlope = 0.04;
// lambda = 30 p.
inline constexpr double kAutoLambdaSlope = 30.0;

// How lambda is chosen for one solve. A fixed value wins over a slope;
// with neither, the method default applies.
struct LambdaRule {
  std::optional<double> fixed;
  std::optional<double> slope;  // lambda = slope * p
  double resolve(MethodKind kind, double clip_ratio) const;
};

struct MethodSpec {
  std::string label;  // column value in the CSV; defaults to the kind name
  MethodKind kind = MethodKind::kPwl1;
  int iterations = 200;
  double rho = 1.0;
  double epsilon = 1e-6;
  bool parabola_weights = true;
  LambdaRule lambda;
  std::string model;  // weight file, applade-dnn only
};

struct ExperimentSpec {
  // Synthetic corpus unless wav_dir is set.
  std::uint64_t seed = 1;
  std::size_t count = 20;
  std::optional<std::filesystem::path> wav_dir;
  std::vector<double> input_sdr_db{1.0, 3.0, 5.0, 10.0, 15.0};
  std::vector<MethodSpec> methods;
  int workers = 0;  // 0 = hardware concurrency
  bool write_audio = false;
  int trace_every = 1;

  void validate() const;
  // Parses the JSON document; relative paths resolve against base_dir.
  static ExperimentSpec from_json(const std::string& text,
                                  const std::filesystem::path& base_dir = {});
  static ExperimentSpec load(const std::filesystem::path& path);
};

struct MetricRecord {
  std::string signal_id;
  std::string method;
  double input_sdr_db = 0.0;
  double tau = 0.0;
  double p = 0.0;
  double delta_sdr_db = 0.0;
  int iterations = 0;
  double time_per_iter_s = 0.0;
  double total_time_s = 0.0;
  std::optional<double> time_to_95_s;
  std::string status = "ok";
};

// Column order of the CSV. Timing columns are listed separately so that
// callers can drop them before comparing runs.
const std::vector<std::string>& metric_columns();
const std::vector<std::string>& timing_columns();

struct LevelSummary {
  std::string method;
  double input_sdr_db = 0.0;
  std::size_t count = 0;     // rows with status ok
  std::size_t failures = 0;  // all other rows
  std::optional<double> median_delta_sdr_db;
  std::optional<double> median_time_per_iter_s;
};

double median(std::vector<double> values);
std::vector<LevelSummary> summarize(const std::vector<MetricRecord>& records);

struct ExperimentResult {
  std::vector<MetricRecord> records;
  std::vector<LevelSummary> summary;
};

// Runs every (signal, level, method) combination. Per-signal failures turn
// into rows with a non-ok status. When out_dir is given writes metrics.csv,
// summary.json and, if requested, audio/ with clipped and restored files.
ExperimentResult run_experiment(
    const ExperimentSpec& spec,
    const std::optional<std::filesystem::path>& out_dir = std::nullopt);

std::string records_to_csv(const std::vector<MetricRecord>& records,
                           bool include_timing = true);
std::string summary_to_json(const ExperimentSpec& spec,
                            const std::vector<LevelSummary>& summary);

// Builds the solver for one method and one clipped observation.
SolverConfig make_solver(const MethodSpec& method, double clip_ratio,
                         const Signal* truth, const GaborConfig& cfg,
                         const EstimatorPtr& dnn = nullptr);

}  // namespace pnpdeclip

#endif  // PNPDECLIP_EXPERIMENT_HPP_
