//
// Copyright 2026 The dpcp Authors
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
//

// Runs the dpcp binary end to end in a scratch directory.

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "dpcp/harness.h"
#include "dpcp/io.h"
#include "dpcp/random.h"

namespace dpcp {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void Spit(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("dpcp_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult Run(const std::string& args, const std::string& env = "") {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && " + env + " '" +
                            DPCP_CLI_PATH + "' " + args + " > '" + out.string() +
                            "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  fs::path WriteUniformScores(const std::string& name, std::size_t n,
                              uint64_t seed) {
    Rng rng(seed);
    std::ostringstream s;
    s.precision(17);
    for (std::size_t i = 0; i < n; ++i) s << rng.Uniform() << "\n";
    Spit(dir_ / name, s.str());
    return dir_ / name;
  }

  void WriteThreshold(const std::string& name, double s_hat) {
    Threshold t;
    t.s_hat = s_hat;
    t.bin = 1;
    t.n = 1;
    t.config.m = 2;
    Spit(dir_ / name, ToJson(t).dump());
  }

  fs::path dir_;
};

TEST_F(CliTest, CalibrateIsDeterministic) {
  WriteUniformScores("calib.csv", 5000, 1);
  const std::string args =
      "calibrate --scores calib.csv --alpha 0.1 --epsilon 8 --seed 7 --grid "
      "1000,5000,20000 --out t.json";
  const RunResult a = Run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  const std::string first = Slurp(dir_ / "t.json");
  const RunResult b = Run(args);
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(first, Slurp(dir_ / "t.json"));
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("s_hat "), std::string::npos);
  EXPECT_NE(a.out.find("q_tilde "), std::string::npos);

  const Json manifest = Json::parse(Slurp(dir_ / "t.json.manifest.json"));
  EXPECT_EQ(manifest.at("command"), "calibrate");
  EXPECT_EQ(manifest.at("seed"), 7);
  EXPECT_EQ(manifest.at("inputs")[0].at("sha256").get<std::string>().size(), 64u);
}

TEST_F(CliTest, EmptyScoreFile) {
  Spit(dir_ / "empty.csv", "");
  const RunResult r = Run("calibrate --scores empty.csv --epsilon 1 --m 10 --seed 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("no scores"), std::string::npos);
}

TEST_F(CliTest, ParseErrorReportsLine) {
  Spit(dir_ / "bad.csv", "0.1\n0.2\nzzz\n");
  const RunResult r = Run("calibrate --scores bad.csv --epsilon 1 --m 10 --seed 1");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.csv:3"), std::string::npos);
}

TEST_F(CliTest, DomainErrorExitCode) {
  WriteUniformScores("calib.csv", 10, 1);
  EXPECT_EQ(Run("calibrate --scores calib.csv --epsilon -1 --m 10 --seed 1").code, 3);
  Spit(dir_ / "range.csv", "0.5\n1.5\n");
  EXPECT_EQ(Run("calibrate --scores range.csv --epsilon 1 --m 10 --seed 1").code, 3);
}

TEST_F(CliTest, NonPrivateLimit) {
  const auto path = WriteUniformScores("calib.csv", 1000, 3);
  const RunResult r = Run(
      "calibrate --scores calib.csv --alpha 0.1 --epsilon 1e12 --gamma 1e-12 "
      "--m 100000 --seed 5 --out t.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const Threshold t = ThresholdFromJson(Json::parse(Slurp(dir_ / "t.json")));
  const double reference = NonPrivateQuantile(ReadScoresFile(path, false), 0.1);
  EXPECT_LE(std::abs(t.s_hat - reference), 1e-5);
}

TEST_F(CliTest, PredictWorkedExample) {
  WriteThreshold("t.json", 0.5);
  Spit(dir_ / "probs.csv", "c0,c1,c2,label\n0.95,0.6,0.2,0\n0.1,0.1,0.8,2\n");
  const RunResult r = Run("predict --threshold t.json --probs probs.csv --out sets.csv");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = Slurp(dir_ / "sets.csv");
  EXPECT_NE(csv.find("\n0,2,0;1\n"), std::string::npos) << csv;
  EXPECT_NE(csv.find("\n1,1,2\n"), std::string::npos) << csv;
  EXPECT_NE(r.out.find("coverage 1"), std::string::npos) << r.out;
}

TEST_F(CliTest, PredictFullThreshold) {
  WriteThreshold("t.json", 1.0);
  Spit(dir_ / "probs.csv", "a,b,c,label\n0.9,0.05,0.05,1\n0.2,0.3,0.5,0\n");
  const RunResult r = Run("predict --threshold t.json --probs probs.csv --coverage");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("coverage 1 (2/2)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("mean_set_size 3"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("median_set_size 3"), std::string::npos) << r.out;
}

TEST_F(CliTest, PredictCoverageNeedsLabels) {
  WriteThreshold("t.json", 0.5);
  Spit(dir_ / "probs.csv", "a,b\n0.5,0.5\n");
  EXPECT_EQ(Run("predict --threshold t.json --probs probs.csv --coverage").code, 2);
  EXPECT_EQ(Run("predict --threshold t.json --probs probs.csv").code, 0);
}

TEST_F(CliTest, PredictTrueLabelScores) {
  WriteThreshold("t.json", 0.5);
  Spit(dir_ / "scores.json", "[0.1, 0.2, 0.9]");
  const RunResult r = Run("predict --threshold t.json --scores scores.json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("(2/3)"), std::string::npos) << r.out;
}

TEST_F(CliTest, TuneSingleCandidateAndDeterminism) {
  RunResult r = Run("tune --n 1000 --alpha 0.1 --epsilon 1 --grid 256 --seed 1 --out a.json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(Slurp(dir_ / "a.json")).at("m_star"), 256);

  const std::string args =
      "tune --n 1000 --alpha 0.1 --epsilon 1 --trials 5 --seed 3 --out %s";
  char buf[256];
  std::snprintf(buf, sizeof(buf), args.c_str(), "b.json");
  ASSERT_EQ(Run(buf).code, 0);
  std::snprintf(buf, sizeof(buf), args.c_str(), "c.json");
  ASSERT_EQ(Run(buf).code, 0);
  const Json b = Json::parse(Slurp(dir_ / "b.json"));
  EXPECT_EQ(b, Json::parse(Slurp(dir_ / "c.json")));

  // Stationarity of the returned gamma.
  const std::size_t m = b.at("m_star");
  const double g = b.at("gamma_star");
  const double h = g * 1e-4;
  const double fd = (AdjustedQuantile(1000, 0.1, 1, g + h, m) -
                     AdjustedQuantile(1000, 0.1, 1, g - h, m)) / (2 * h);
  EXPECT_LT(std::abs(fd) / (2.0 / (1000 * g)), 1e-6);
}

TEST_F(CliTest, SimulateSmokeAndThreads) {
  Spit(dir_ / "spec.json", R"({"law": "uniform", "n_calib": 200, "n_test": 100,
    "alpha": 0.1, "epsilon": 1, "m": 500, "trials": 10, "seed": 4})");
  ASSERT_EQ(Run("simulate --spec spec.json --out-dir a --threads 1").code, 0);
  ASSERT_EQ(Run("simulate --spec spec.json --out-dir b --threads 4").code, 0);
  const std::string a = Slurp(dir_ / "a" / "report.json");
  EXPECT_EQ(a, Slurp(dir_ / "b" / "report.json"));
  EXPECT_EQ(Json::parse(a).at("coverages").size(), 10u);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "coverage_histogram.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "set_size_histogram.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "manifest.json"));
}

TEST_F(CliTest, DpCheck) {
  EXPECT_EQ(Run("dp-check --seed 1").code, 0);
  const RunResult r = Run("dp-check --seed 1 --exponent-scale as_published");
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("VIOLATED"), std::string::npos);
}

TEST_F(CliTest, SeedResolution) {
  WriteUniformScores("calib.csv", 50, 1);
  EXPECT_EQ(Run("calibrate --scores calib.csv --epsilon 1 --m 10 --strict").code, 2);
  const RunResult env =
      Run("calibrate --scores calib.csv --epsilon 1 --m 10 --strict --out t.json",
          "DPCP_SEED=99");
  ASSERT_EQ(env.code, 0) << env.err;
  EXPECT_EQ(Json::parse(Slurp(dir_ / "t.json")).at("seed"), 99);
  const RunResult entropy =
      Run("calibrate --scores calib.csv --epsilon 1 --m 10 --out e.json");
  ASSERT_EQ(entropy.code, 0);
  const Json m = Json::parse(Slurp(dir_ / "e.json.manifest.json"));
  EXPECT_EQ(m.at("seed_source"), "entropy");
  EXPECT_EQ(m.at("seed"), Json::parse(Slurp(dir_ / "e.json")).at("seed"));
}

TEST_F(CliTest, ConfigFile) {
  WriteUniformScores("calib.csv", 100, 2);
  Spit(dir_ / "cfg.json", R"({"alpha": 0.2, "epsilon": 2, "m": 50, "seed": 11})");
  const RunResult r = Run("calibrate --scores calib.csv --config cfg.json --out t.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const Threshold t = ThresholdFromJson(Json::parse(Slurp(dir_ / "t.json")));
  EXPECT_EQ(t.config.alpha, 0.2);
  EXPECT_EQ(t.config.m, 50u);
  EXPECT_EQ(t.seed, 11u);
}

}  // namespace
}  // namespace dpcp
