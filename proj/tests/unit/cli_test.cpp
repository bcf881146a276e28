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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pnpdeclip/signal.hpp"
#include "pnpdeclip/wav.hpp"
#include "test_util.hpp"

namespace pnpdeclip {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pnpdeclip_cli_" + std::string(::testing::UnitTest::GetInstance()
                                               ->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    clean_ = path("clean.wav");
    write_wav(clean_, testing::multisine(8192, {220.0, 440.0, 1250.0}, {1.0, 0.6, 0.3}));
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::string clean_;
};

TEST_F(CliTest, BadArguments) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"declip", "--in", clean_, "--out", path("o.wav")}).code, 2);
  EXPECT_EQ(run_cli({"declip", "--in", clean_, "--out", path("o.wav"), "--method", "nope"}).code, 2);
  EXPECT_EQ(run_cli({"declip", "--in", clean_, "--out", path("o.wav"), "--method", "pwl1",
                     "--tau", "0.5", "--input-sdr", "5"}).code, 2);
  EXPECT_EQ(run_cli({"declip", "--in", clean_, "--out", path("o.wav"), "--method", "pwl1",
                     "--lambda", "1", "--auto-lambda"}).code, 2);
  EXPECT_EQ(run_cli({"declip", "--in", clean_, "--out", path("o.wav"), "--method", "pwl1",
                     "--iters", "0"}).code, 2);
  EXPECT_EQ(run_cli({"declip", "--in", clean_, "--out", path("o.wav"), "--method",
                     "applade-oracle", "--tau", "0.5"}).code, 2);
  EXPECT_EQ(run_cli({"declip", "--in", clean_, "--out", path("o.wav"), "--method",
                     "applade-dnn", "--tau", "0.5"}).code, 2);
  // Input exceeding the stated threshold is inconsistent.
  EXPECT_EQ(run_cli({"declip", "--in", clean_, "--out", path("o.wav"), "--method", "pwl1",
                     "--tau", "0.5"}).code, 2);
  EXPECT_EQ(run_cli({"clip", "--in", clean_, "--out", path("c.wav")}).code, 2);
  EXPECT_EQ(run_cli({"synth", "--out-dir", path("s"), "--count", "0"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(CliTest, IoFailures) {
  EXPECT_EQ(run_cli({"declip", "--in", path("missing.wav"), "--out", path("o.wav"),
                     "--method", "pwl1"}).code, 3);
  std::ofstream(path("junk.wav")) << "not a wav file at all";
  EXPECT_EQ(run_cli({"clip", "--in", path("junk.wav"), "--out", path("c.wav"),
                     "--tau", "0.5"}).code, 3);
  EXPECT_EQ(run_cli({"declip", "--in", clean_, "--out", path("no/such/dir/o.wav"),
                     "--method", "pwl1", "--iters", "2"}).code, 3);
  EXPECT_EQ(run_cli({"bench", "--spec", path("missing.json"), "--out-dir", path("b")}).code, 3);
  std::ofstream(path("bad.json")) << "{ nope";
  EXPECT_EQ(run_cli({"bench", "--spec", path("bad.json"), "--out-dir", path("b")}).code, 3);
}

TEST_F(CliTest, ClipThenDeclip) {
  const Outcome c = run_cli({"clip", "--in", clean_, "--out", path("clipped.wav"),
                             "--input-sdr", "5"});
  ASSERT_EQ(c.code, 0) << c.err;
  const double level = std::stod(c.out.substr(c.out.find("input_sdr_db=") + 13));
  EXPECT_NEAR(level, 5.0, 0.01) << c.out;
  const Signal y = read_wav(path("clipped.wav"));
  const double tau = y.peak();

  const Outcome d = run_cli({"declip", "--in", path("clipped.wav"), "--out",
                             path("restored.wav"), "--method", "pwl1", "--iters", "40",
                             "--truth", clean_, "--trace", path("trace.csv")});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_NE(d.out.find("delta_sdr_db="), std::string::npos);
  const Signal x = read_wav(path("restored.wav"));
  ASSERT_EQ(x.size(), y.size());
  EXPECT_TRUE(is_clipping_consistent(x.samples(), clip_mask(y, tau), y.samples()));
  EXPECT_GT(delta_sdr(read_wav(clean_), x, y), 0.0);

  std::ifstream trace(path("trace.csv"));
  std::string line;
  std::getline(trace, line);
  EXPECT_EQ(line, "iteration,primal_residual,dual_change,delta_sdr_db,elapsed_s");
  int rows = 0;
  while (std::getline(trace, line)) ++rows;
  EXPECT_EQ(rows, 40);
}

TEST_F(CliTest, DeclipFromCleanInputAndOddLength) {
  std::vector<double> v(3001);
  for (std::size_t t = 0; t < v.size(); ++t) v[t] = std::sin(0.05 * t) * (t % 7 ? 1.0 : 0.8);
  write_wav(path("odd.wav"), Signal(v));
  for (const char* method : {"pwl1", "applade-oracle", "applade-identity"}) {
    const Outcome d = run_cli({"declip", "--in", path("odd.wav"), "--out", path("o.wav"),
                               "--method", method, "--input-sdr", "3", "--iters", "20"});
    ASSERT_EQ(d.code, 0) << method << ": " << d.err;
    EXPECT_EQ(read_wav(path("o.wav")).size(), 3001u);
  }
}

TEST_F(CliTest, DnnWithFixtureModel) {
  const std::string model = std::string(PNPDECLIP_FIXTURE_DIR) + "/golden_unet.aplw";
  const Outcome d = run_cli({"declip", "--in", clean_, "--out", path("o.wav"), "--method",
                             "applade-dnn", "--model", model, "--input-sdr", "5",
                             "--iters", "5"});
  // The fixture network has depth 3 and runs on any frame count that is a
  // multiple of 8.
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(run_cli({"declip", "--in", clean_, "--out", path("o.wav"), "--method",
                     "applade-dnn", "--model", path("none.aplw"), "--input-sdr", "5"})
                .code,
            3);
}

TEST_F(CliTest, Divergence) {
  // Restoring the peaks always raises the norm above that of the input.
  const Outcome d = run_cli({"declip", "--in", clean_, "--out", path("o.wav"), "--method",
                             "pwl1", "--input-sdr", "1", "--max-growth", "1.0",
                             "--trace", path("t.csv")});
  EXPECT_EQ(d.code, 4) << d.err;
  EXPECT_NE(d.err.find("diverged at iteration"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("t.csv")));
  EXPECT_FALSE(fs::exists(path("o.wav")));
  EXPECT_EQ(run_cli({"declip", "--in", clean_, "--out", path("o.wav"), "--method", "pwl1",
                     "--max-growth", "0"}).code,
            2);
}

TEST_F(CliTest, SynthAndBench) {
  ASSERT_EQ(run_cli({"synth", "--seed", "7", "--count", "2", "--out-dir", path("corpus")}).code, 0);
  EXPECT_TRUE(fs::exists(path("corpus/syn-0000.wav")));
  EXPECT_TRUE(fs::exists(path("corpus/syn-0001.wav")));
  std::ofstream(path("spec.json"))
      << R"({"corpus": {"type": "wav_dir", "path": "corpus"}, "input_sdr_db": [5],
            "iterations": 3, "methods": ["clip-only", "pwl1"]})";
  const Outcome b = run_cli({"bench", "--spec", path("spec.json"), "--out-dir", path("out")});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.out.find("4 rows, 0 failed"), std::string::npos) << b.out;
  EXPECT_TRUE(fs::exists(path("out/metrics.csv")));
  EXPECT_TRUE(fs::exists(path("out/summary.json")));
}

}  // namespace
}  // namespace pnpdeclip
