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

#include "pnpdeclip/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pnpdeclip/corpus.hpp"
#include "pnpdeclip/error.hpp"
#include "pnpdeclip/estimator.hpp"
#include "pnpdeclip/wav.hpp"

namespace pnpdeclip {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct NamedSignal {
  std::string id;
  Signal signal;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<NamedSignal> load_corpus(const ExperimentSpec& spec) {
  std::vector<NamedSignal> out;
  if (!spec.wav_dir) {
    const std::vector<Signal> signals = synth_corpus(spec.seed, spec.count);
    for (std::size_t i = 0; i < signals.size(); ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "syn-%04zu", i);
      out.push_back({id, signals[i]});
    }
    return out;
  }
  std::error_code ec;
  if (!fs::is_directory(*spec.wav_dir, ec)) {
    throw IoError("not a directory: " + spec.wav_dir->string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(*spec.wav_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw IoError("no .wav files in " + spec.wav_dir->string());
  }
  for (const fs::path& f : files) {
    out.push_back({f.stem().string(), peak_normalize(read_wav(f))});
  }
  return out;
}

MethodSpec parse_method(const json& j, int default_iterations) {
  MethodSpec m;
  m.iterations = default_iterations;
  if (j.is_string()) {
    m.kind = parse_method_kind(j.get<std::string>());
    m.label = method_kind_name(m.kind);
    return m;
  }
  if (!j.is_object() || !j.contains("method")) {
    throw InvalidArgument("method entries must be a name or an object with \"method\"");
  }
  m.kind = parse_method_kind(j.at("method").get<std::string>());
  m.label = j.value("label", method_kind_name(m.kind));
  m.iterations = j.value("iterations", default_iterations);
  m.rho = j.value("rho", 1.0);
  m.epsilon = j.value("epsilon", 1e-6);
  m.parabola_weights = j.value("parabola_weights", true);
  m.model = j.value("model", std::string{});
  if (j.contains("lambda")) {
    const json& l = j.at("lambda");
    if (l.is_string()) {
      if (l.get<std::string>() != "auto") {
        throw InvalidArgument("lambda must be a number or \"auto\"");
      }
      m.lambda.slope = kAutoLambdaSlope;
    } else {
      m.lambda.fixed = l.get<double>();
    }
  }
  if (j.contains("lambda_slope")) {
    if (m.lambda.fixed || m.lambda.slope) {
      throw InvalidArgument("give either lambda or lambda_slope, not both");
    }
    m.lambda.slope = j.at("lambda_slope").get<double>();
  }
  return m;
}

struct Job {
  std::size_t signal = 0;
  std::size_t level = 0;
};

}  // namespace

MethodKind parse_method_kind(const std::string& name) {
  if (name == "clip-only") return MethodKind::kClipOnly;
  if (name == "pwl1") return MethodKind::kPwl1;
  if (name == "applade-oracle") return MethodKind::kAppladeOracle;
  if (name == "applade-identity") return MethodKind::kAppladeIdentity;
  if (name == "applade-dnn") return MethodKind::kAppladeDnn;
  throw InvalidArgument("unknown method: " + name);
}

std::string method_kind_name(MethodKind kind) {
  switch (kind) {
    case MethodKind::kClipOnly: return "clip-only";
    case MethodKind::kPwl1: return "pwl1";
    case MethodKind::kAppladeOracle: return "applade-oracle";
    case MethodKind::kAppladeIdentity: return "applade-identity";
    case MethodKind::kAppladeDnn: return "applade-dnn";
  }
  return "unknown";
}

double LambdaRule::resolve(MethodKind kind, double clip_ratio) const {
  if (fixed) return *fixed;
  if (slope) return *slope * clip_ratio;
  if (kind == MethodKind::kPwl1) return kDefaultPwl1Lambda;
  return kDefaultAppladeLambdaSlope * clip_ratio;
}

void ExperimentSpec::validate() const {
  if (input_sdr_db.empty()) throw InvalidArgument("empty input SDR grid");
  if (methods.empty()) throw InvalidArgument("empty method list");
  if (!wav_dir && count == 0) throw InvalidArgument("corpus count must be positive");
  if (workers < 0) throw InvalidArgument("workers must be >= 0");
  if (trace_every < 1) throw InvalidArgument("trace_every must be >= 1");
  for (double level : input_sdr_db) {
    if (!std::isfinite(level)) throw InvalidArgument("input SDR levels must be finite");
  }
  std::vector<std::string> labels;
  for (const MethodSpec& m : methods) {
    if (m.iterations < 1) throw InvalidArgument(m.label + ": iterations must be >= 1");
    if (!(m.rho > 0.0) || !(m.epsilon > 0.0)) {
      throw InvalidArgument(m.label + ": rho and epsilon must be positive");
    }
    if ((m.lambda.fixed && !(*m.lambda.fixed >= 0.0)) ||
        (m.lambda.slope && !(*m.lambda.slope >= 0.0))) {
      throw InvalidArgument(m.label + ": lambda must be non-negative");
    }
    if (m.kind == MethodKind::kAppladeDnn && m.model.empty()) {
      throw InvalidArgument(m.label + ": applade-dnn needs a model");
    }
    labels.push_back(m.label);
  }
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
    throw InvalidArgument("method labels must be unique");
  }
}

ExperimentSpec ExperimentSpec::from_json(const std::string& text,
                                         const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("spec is not valid JSON: ") + e.what(), e.byte);
  }
  ExperimentSpec spec;
  try {
    const int iterations = j.value("iterations", 200);
    if (j.contains("corpus")) {
      const json& c = j.at("corpus");
      const std::string type = c.value("type", std::string("synthetic"));
      if (type == "synthetic") {
        spec.seed = c.value("seed", std::uint64_t{1});
        spec.count = c.value("count", std::size_t{20});
      } else if (type == "wav_dir") {
        fs::path p = c.at("path").get<std::string>();
        spec.wav_dir = p.is_relative() ? base_dir / p : p;
      } else {
        throw InvalidArgument("unknown corpus type: " + type);
      }
    }
    if (j.contains("input_sdr_db")) {
      spec.input_sdr_db = j.at("input_sdr_db").get<std::vector<double>>();
    }
    if (j.contains("methods")) {
      for (const json& m : j.at("methods")) {
        MethodSpec ms = parse_method(m, iterations);
        if (!ms.model.empty() && fs::path(ms.model).is_relative()) {
          ms.model = (base_dir / ms.model).string();
        }
        spec.methods.push_back(std::move(ms));
      }
    }
    spec.workers = j.value("workers", 0);
    spec.write_audio = j.value("write_audio", false);
    spec.trace_every = j.value("trace_every", 1);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad spec field: ") + e.what());
  }
  spec.validate();
  return spec;
}

ExperimentSpec ExperimentSpec::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str(), path.parent_path());
}

const std::vector<std::string>& metric_columns() {
  static const std::vector<std::string> kColumns{
      "signal_id",    "method",          "input_sdr_db",
      "tau",          "p",               "delta_sdr_db",
      "iterations",   "time_per_iter_s", "total_time_s",
      "time_to_95_s", "status"};
  return kColumns;
}

const std::vector<std::string>& timing_columns() {
  static const std::vector<std::string> kColumns{
      "time_per_iter_s", "total_time_s", "time_to_95_s"};
  return kColumns;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

std::vector<LevelSummary> summarize(const std::vector<MetricRecord>& records) {
  struct Acc {
    std::vector<double> delta;
    std::vector<double> time;
    std::size_t failures = 0;
  };
  std::vector<std::pair<std::string, double>> order;
  std::map<std::pair<std::string, double>, Acc> groups;
  for (const MetricRecord& r : records) {
    const auto key = std::make_pair(r.method, r.input_sdr_db);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    if (r.status == "ok") {
      it->second.delta.push_back(r.delta_sdr_db);
      it->second.time.push_back(r.time_per_iter_s);
    } else {
      ++it->second.failures;
    }
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  std::vector<LevelSummary> out;
  for (const auto& key : order) {
    const Acc& acc = groups.at(key);
    LevelSummary s;
    s.method = key.first;
    s.input_sdr_db = key.second;
    s.count = acc.delta.size();
    s.failures = acc.failures;
    if (!acc.delta.empty()) {
      s.median_delta_sdr_db = median(acc.delta);
      s.median_time_per_iter_s = median(acc.time);
    }
    out.push_back(s);
  }
  return out;
}

std::string records_to_csv(const std::vector<MetricRecord>& records,
                           bool include_timing) {
  std::ostringstream os;
  const auto& timing = timing_columns();
  auto keep = [&](const std::string& c) {
    return include_timing ||
           std::find(timing.begin(), timing.end(), c) == timing.end();
  };
  bool first = true;
  for (const std::string& c : metric_columns()) {
    if (!keep(c)) continue;
    os << (first ? "" : ",") << c;
    first = false;
  }
  os << '\n';
  for (const MetricRecord& r : records) {
    std::vector<std::string> cells{
        r.signal_id,
        r.method,
        format_double(r.input_sdr_db),
        format_double(r.tau),
        format_double(r.p),
        format_double(r.delta_sdr_db),
        std::to_string(r.iterations),
        format_double(r.time_per_iter_s),
        format_double(r.total_time_s),
        r.time_to_95_s ? format_double(*r.time_to_95_s) : "",
        r.status};
    first = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!keep(metric_columns()[i])) continue;
      os << (first ? "" : ",") << cells[i];
      first = false;
    }
    os << '\n';
  }
  return os.str();
}

std::string summary_to_json(const ExperimentSpec& spec,
                            const std::vector<LevelSummary>& summary) {
  auto number = [](std::optional<double> v) -> json {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
  };
  json j;
  j["corpus"] = spec.wav_dir
                    ? json{{"type", "wav_dir"}, {"path", spec.wav_dir->string()}}
                    : json{{"type", "synthetic"},
                           {"seed", spec.seed},
                           {"count", spec.count}};
  j["input_sdr_db"] = spec.input_sdr_db;
  json rows = json::array();
  for (const LevelSummary& s : summary) {
    rows.push_back({{"method", s.method},
                    {"input_sdr_db", s.input_sdr_db},
                    {"count", s.count},
                    {"failures", s.failures},
                    {"median_delta_sdr_db", number(s.median_delta_sdr_db)},
                    {"median_time_per_iter_s", number(s.median_time_per_iter_s)}});
  }
  j["medians"] = rows;
  return j.dump(2) + "\n";
}

SolverConfig make_solver(const MethodSpec& method, double clip_ratio,
                         const Signal* truth, const GaborConfig& cfg,
                         const EstimatorPtr& dnn) {
  SolverConfig s;
  s.iterations = method.iterations;
  s.rho = method.rho;
  s.epsilon = method.epsilon;
  s.parabola_weights = method.parabola_weights;
  s.lambda = method.lambda.resolve(method.kind, clip_ratio);
  switch (method.kind) {
    case MethodKind::kClipOnly:
      throw InvalidArgument("clip-only has no solver");
    case MethodKind::kPwl1:
      s.method = Method::kPwl1;
      break;
    case MethodKind::kAppladeOracle:
      if (truth == nullptr) throw InvalidArgument("applade-oracle needs the true signal");
      s.method = Method::kApplade;
      s.estimator = oracle_estimator(*truth, cfg);
      break;
    case MethodKind::kAppladeIdentity:
      s.method = Method::kApplade;
      s.estimator = identity_estimator();
      break;
    case MethodKind::kAppladeDnn:
      if (!dnn) throw InvalidArgument("applade-dnn needs a loaded model");
      s.method = Method::kApplade;
      s.estimator = dnn;
      break;
  }
  return s;
}

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::optional<fs::path>& out_dir) {
  spec.validate();
  const std::vector<NamedSignal> corpus = load_corpus(spec);

  // One network per distinct model path, shared by all workers.
  std::map<std::string, EstimatorPtr> models;
  for (const MethodSpec& m : spec.methods) {
    if (m.kind == MethodKind::kAppladeDnn && !models.contains(m.model)) {
      models[m.model] = load_unet(m.model);
    }
  }

  fs::path audio_dir;
  if (out_dir) {
    fs::create_directories(*out_dir);
    if (spec.write_audio) {
      audio_dir = *out_dir / "audio";
      fs::create_directories(audio_dir);
    }
  }

  std::vector<Job> jobs;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    for (std::size_t l = 0; l < spec.input_sdr_db.size(); ++l) {
      jobs.push_back({s, l});
    }
  }

  std::mutex mu;
  std::vector<std::pair<std::array<std::size_t, 3>, MetricRecord>> rows;
  std::atomic<std::size_t> next{0};

  auto run_job = [&](const Job& job) {
    const NamedSignal& item = corpus[job.signal];
    const Signal& truth = item.signal;
    const double level = spec.input_sdr_db[job.level];
    MetricRecord base;
    base.signal_id = item.id;
    base.input_sdr_db = level;

    std::optional<Signal> clipped;
    std::optional<ClipMask> mask;
    std::string setup_error;
    try {
      base.tau = threshold_for_input_sdr(truth, level);
      clipped = hard_clip(truth, base.tau);
      mask = clip_mask(*clipped, base.tau);
      base.p = mask->clip_ratio();
    } catch (const std::exception& e) {
      setup_error = std::string("error: ") + e.what();
    }
    std::string stem;
    if (!audio_dir.empty() && clipped) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "_%gdB", level);
      stem = item.id + buf;
      write_wav(audio_dir / (stem + "_clipped.wav"), *clipped);
    }

    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
      const MethodSpec& method = spec.methods[mi];
      MetricRecord r = base;
      r.method = method.label;
      if (!setup_error.empty()) {
        r.status = setup_error;
        r.delta_sdr_db = std::nan("");
      } else if (method.kind == MethodKind::kClipOnly) {
        r.delta_sdr_db = delta_sdr(truth, *clipped, *clipped);
      } else {
        try {
          const GaborConfig cfg = GaborConfig::standard(truth.size());
          SolverConfig solver = make_solver(
              method, r.p, &truth, cfg,
              method.kind == MethodKind::kAppladeDnn ? models.at(method.model)
                                                     : nullptr);
          solver.trace_every = spec.trace_every;
          const DeclipResult res = declip(*clipped, *mask, cfg, solver, &truth);
          r.delta_sdr_db = delta_sdr(truth, res.restored, *clipped);
          r.iterations = res.iterations;
          r.total_time_s = res.loop_seconds;
          r.time_per_iter_s = res.loop_seconds / res.iterations;
          r.time_to_95_s = res.trace.time_to_fraction(0.95);
          if (!is_clipping_consistent(res.restored.samples(), *mask,
                                      clipped->samples())) {
            r.status = "inconsistent";
          }
          if (!stem.empty()) {
            const fs::path out = audio_dir / (stem + "_" + method.label + ".wav");
            write_wav(out, res.restored);
            // Re-verify against what is on disk.
            const Signal disk_y = read_wav(audio_dir / (stem + "_clipped.wav"));
            const Signal disk_x = read_wav(out);
            const double disk_tau = static_cast<float>(base.tau);
            const ClipMask disk_mask = clip_mask(disk_y, disk_tau);
            if (!is_clipping_consistent(disk_x.samples(), disk_mask,
                                        disk_y.samples())) {
              r.status = "inconsistent-on-disk";
            }
          }
        } catch (const DivergenceError& e) {
          r.status = std::string("diverged: ") + e.what();
          r.delta_sdr_db = std::nan("");
          r.iterations = e.iteration();
        } catch (const std::exception& e) {
          r.status = std::string("error: ") + e.what();
          r.delta_sdr_db = std::nan("");
        }
      }
      std::lock_guard lock(mu);
      rows.push_back({{job.signal, job.level, mi}, std::move(r)});
    }
  };

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(jobs[i]);
  };
  std::size_t n_workers =
      spec.workers > 0 ? static_cast<std::size_t>(spec.workers)
                       : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min(n_workers, jobs.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
  }

  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  ExperimentResult result;
  for (auto& row : rows) result.records.push_back(std::move(row.second));
  result.summary = summarize(result.records);

  if (out_dir) {
    std::ofstream csv(*out_dir / "metrics.csv");
    csv << records_to_csv(result.records);
    std::ofstream js(*out_dir / "summary.json");
    js << summary_to_json(spec, result.summary);
    if (!csv || !js) throw IoError("failed writing results to " + out_dir->string());
  }
  return result;
}

}  // namespace pnpdeclip
