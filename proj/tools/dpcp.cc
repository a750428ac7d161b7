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

// dpcp: differentially private conformal prediction from score files.
//
//   dpcp calibrate --scores calib.csv --alpha 0.1 --epsilon 1 --seed 7
//   dpcp predict   --threshold threshold.json --probs test.csv
//   dpcp tune      --n 1000 --alpha 0.1 --epsilon 1 --seed 7
//   dpcp simulate  --spec experiment.json --out-dir run/
//   dpcp dp-check  --instances 100 --seed 1

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpcp/dpcp.h"
#include "dpcp/io.h"

namespace {

constexpr const char* kToolVersion = "0.1.0";

using dpcp::InputError;
using dpcp::Json;

std::string Sha256Hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw dpcp::InvariantError("sha256 failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return out.str();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << contents;
}

Json ParseJsonFile(const std::string& path) {
  try {
    return Json::parse(ReadFile(path));
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": invalid JSON: " + e.what());
  }
}

std::vector<std::size_t> ParseGrid(const std::string& text) {
  std::vector<std::size_t> grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto value = dpcp::internal::ParseDouble(item);
    if (!value || *value < 1.0 || *value != std::floor(*value)) {
      throw InputError("bad --grid entry '" + item + "'");
    }
    grid.push_back(static_cast<std::size_t>(*value));
  }
  if (grid.empty()) throw InputError("--grid is empty");
  return grid;
}

std::vector<double> ParseList(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto value = dpcp::internal::ParseDouble(item);
    if (!value) throw InputError(std::string("bad ") + flag + " entry '" + item + "'");
    out.push_back(*value);
  }
  return out;
}

// Flags shared by every verb.
struct CommonFlags {
  std::optional<uint64_t> seed;
  std::size_t threads = 1;
  bool strict = false;
  std::string manifest;
};

// Resolved seed and where it came from.
struct SeedChoice {
  uint64_t value = 0;
  std::string source;
};

SeedChoice ResolveSeed(const CommonFlags& flags,
                       std::optional<uint64_t> from_config = std::nullopt) {
  if (flags.seed) return {*flags.seed, "flag"};
  if (from_config) return {*from_config, "config"};
  if (const char* env = std::getenv("DPCP_SEED")) {
    uint64_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw InputError("DPCP_SEED is not an unsigned integer: " + std::string(s));
    }
    return {v, "env"};
  }
  if (flags.strict) throw InputError("--strict requires --seed or DPCP_SEED");
  std::random_device rd;
  const uint64_t v = (static_cast<uint64_t>(rd()) << 32) ^ rd();
  return {v, "entropy"};
}

class Manifest {
 public:
  explicit Manifest(std::string command)
      : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

  void AddInput(const std::string& path, const std::string& contents) {
    inputs_.push_back(Json{{"path", path}, {"sha256", Sha256Hex(contents)}});
  }
  void AddOutput(const std::string& path) { outputs_.push_back(path); }
  void SetConfig(Json config) { config_ = std::move(config); }
  void SetSeed(const SeedChoice& seed) { seed_ = seed; }

  void Write(const std::string& path) const {
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start_)
                               .count();
    Json j{{"command", command_},
           {"config", config_},
           {"inputs", inputs_},
           {"seed", seed_.value},
           {"seed_source", seed_.source},
           {"tool_version", kToolVersion},
           {"outputs", outputs_},
           {"duration_seconds", seconds}};
    WriteFile(path, j.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  Json config_ = Json::object();
  Json inputs_ = Json::array();
  std::vector<std::string> outputs_;
  SeedChoice seed_;
};

std::string ManifestPath(const CommonFlags& flags, const std::string& out) {
  return flags.manifest.empty() ? out + ".manifest.json" : flags.manifest;
}

// ---- calibrate ----

struct CalibrateArgs {
  std::string scores;
  bool header = false;
  std::string config;
  std::optional<double> alpha, epsilon, gamma;
  std::optional<std::size_t> m, trials;
  std::string grid;
  std::string scale;
  std::string out = "threshold.json";
};

int RunCalibrate(const CalibrateArgs& args, const CommonFlags& flags) {
  Manifest manifest("calibrate");
  const std::string text = ReadFile(args.scores);
  manifest.AddInput(args.scores, text);
  const std::vector<double> raw =
      dpcp::ParseScores(text, args.header, args.scores);

  dpcp::CalibrationSettings settings;
  if (!args.config.empty()) {
    const std::string config_text = ReadFile(args.config);
    manifest.AddInput(args.config, config_text);
    try {
      settings = dpcp::CalibrationSettingsFromJson(Json::parse(config_text));
    } catch (const Json::parse_error& e) {
      throw InputError(args.config + ": invalid JSON: " + e.what());
    }
  }
  const double alpha = args.alpha ? *args.alpha : settings.alpha.value_or(0.1);
  if (!args.epsilon && !settings.epsilon) {
    throw InputError("calibrate: --epsilon is required");
  }
  const double epsilon = args.epsilon ? *args.epsilon : *settings.epsilon;
  dpcp::CalibrateOptions options;
  options.m = args.m ? args.m : settings.m;
  options.gamma = args.gamma ? args.gamma : settings.gamma;
  options.threads = flags.threads;
  if (settings.bins_grid) options.bins_grid = *settings.bins_grid;
  if (!args.grid.empty()) options.bins_grid = ParseGrid(args.grid);
  if (settings.tune_trials) options.tune_trials = *settings.tune_trials;
  if (args.trials) options.tune_trials = *args.trials;
  if (settings.scale) options.scale = *settings.scale;
  if (!args.scale.empty()) options.scale = dpcp::ParseExponentScale(args.scale);
  const SeedChoice seed = ResolveSeed(flags, settings.seed);

  const dpcp::Threshold threshold =
      dpcp::Calibrate(dpcp::ScoreSet(raw), alpha, epsilon, seed.value, options);
  if (threshold.bin < 1 || threshold.bin > threshold.config.m ||
      threshold.s_hat <= 0.0 || threshold.s_hat > 1.0) {
    throw dpcp::InvariantError("calibrated cutoff is not a grid edge");
  }

  WriteFile(args.out, ToJson(threshold).dump(2) + "\n");
  manifest.AddOutput(args.out);
  Json config{{"alpha", alpha},
              {"epsilon", epsilon},
              {"m", options.m ? Json(*options.m) : Json(nullptr)},
              {"gamma", options.gamma ? Json(*options.gamma) : Json(nullptr)},
              {"tune_trials", options.tune_trials},
              {"header", args.header},
              {"exponent_scale", std::string(dpcp::ToString(options.scale))}};
  if (!options.m) config["bins_grid"] = options.bins_grid;
  manifest.SetConfig(config);
  manifest.SetSeed(seed);
  manifest.Write(ManifestPath(flags, args.out));

  std::cout << std::setprecision(17) << "s_hat " << threshold.s_hat << "\n"
            << "q_tilde " << threshold.config.q_tilde << "\n"
            << "m " << threshold.config.m << "\n"
            << "gamma " << threshold.config.gamma << "\n"
            << "n " << threshold.n << "\n"
            << "seed " << seed.value << "\n";
  for (const auto& w : threshold.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

// ---- predict ----

struct PredictArgs {
  std::string threshold;
  std::string probs;
  std::string scores;
  bool header = false;
  bool coverage = false;
  std::string out = "sets.csv";
};

int RunPredict(const PredictArgs& args, const CommonFlags& flags) {
  Manifest manifest("predict");
  if (args.probs.empty() == args.scores.empty()) {
    throw InputError("predict: give exactly one of --probs or --scores");
  }
  const std::string threshold_text = ReadFile(args.threshold);
  manifest.AddInput(args.threshold, threshold_text);
  Json threshold_json;
  try {
    threshold_json = Json::parse(threshold_text);
  } catch (const Json::parse_error& e) {
    throw InputError(args.threshold + ": invalid JSON: " + e.what());
  }
  const dpcp::Threshold threshold = dpcp::ThresholdFromJson(threshold_json);
  std::cout << std::setprecision(6);

  if (!args.scores.empty()) {
    const std::string text = ReadFile(args.scores);
    manifest.AddInput(args.scores, text);
    const auto scores = dpcp::ParseScores(text, args.header, args.scores);
    const auto est = dpcp::Evaluate(scores, threshold);
    std::ostringstream csv;
    csv << std::setprecision(17) << "id,score,covered\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
      csv << i << ',' << scores[i] << ',' << (scores[i] <= threshold.s_hat)
          << '\n';
    }
    WriteFile(args.out, csv.str());
    std::cout << "coverage " << est.coverage << " (" << est.covered << "/"
              << est.total << ")\n";
  } else {
    const std::string text = ReadFile(args.probs);
    manifest.AddInput(args.probs, text);
    const auto table = dpcp::ParseProbabilityTable(text, args.probs);
    if (args.coverage && !table.has_labels()) {
      throw InputError("predict: --coverage needs a 'label' column in " +
                       args.probs);
    }
    const auto label_scores = dpcp::LabelScores(table);
    std::vector<dpcp::PredictionSet> sets;
    sets.reserve(label_scores.size());
    std::vector<std::size_t> sizes;
    for (const auto& row : label_scores) {
      sets.push_back(dpcp::FormSet(row, threshold));
      sizes.push_back(sets.back().size());
    }
    WriteFile(args.out, dpcp::PredictionSetsCsv(sets));
    if (table.has_labels()) {
      std::vector<double> truth(label_scores.size());
      for (std::size_t i = 0; i < truth.size(); ++i) {
        truth[i] = label_scores[i][table.labels[i]];
      }
      const auto est = dpcp::Evaluate(truth, threshold);
      std::sort(sizes.begin(), sizes.end());
      double mean = 0.0;
      for (auto s : sizes) mean += static_cast<double>(s);
      mean /= static_cast<double>(sizes.size());
      const std::size_t k = sizes.size();
      const double median =
          k % 2 == 1 ? static_cast<double>(sizes[k / 2])
                     : 0.5 * static_cast<double>(sizes[k / 2 - 1] + sizes[k / 2]);
      std::cout << "coverage " << est.coverage << " (" << est.covered << "/"
                << est.total << ")\n"
                << "mean_set_size " << mean << "\n"
                << "median_set_size " << median << "\n";
    }
    std::cout << "sets " << sets.size() << "\n";
  }
  manifest.AddOutput(args.out);
  manifest.SetConfig(Json{{"s_hat", threshold.s_hat}, {"header", args.header}});
  manifest.SetSeed({threshold.seed, "threshold"});
  manifest.Write(ManifestPath(flags, args.out));
  return 0;
}

// ---- tune ----

struct TuneArgs {
  std::size_t n = 0;
  double alpha = 0.1;
  double epsilon = 0.0;
  std::size_t trials = dpcp::kDefaultTuneTrials;
  std::string grid;
  std::string scale;
  std::string out = "tune.json";
};

int RunTune(const TuneArgs& args, const CommonFlags& flags) {
  Manifest manifest("tune");
  const SeedChoice seed = ResolveSeed(flags);
  dpcp::TuneOptions options;
  if (!args.grid.empty()) options.bins_grid = ParseGrid(args.grid);
  options.trials = args.trials;
  options.seed = seed.value;
  options.threads = flags.threads;
  if (!args.scale.empty()) options.scale = dpcp::ParseExponentScale(args.scale);
  const auto result = dpcp::TuneMStar(args.n, args.alpha, args.epsilon, options);

  Json candidates = Json::array();
  for (std::size_t c = 0; c < result.candidates.size(); ++c) {
    candidates.push_back(
        Json{{"m", result.candidates[c]}, {"mean_s_hat", result.mean_s_hat[c]}});
  }
  const double q_tilde = dpcp::AdjustedQuantile(
      args.n, args.alpha, args.epsilon, result.gamma_star, result.m_star);
  Json out{{"m_star", result.m_star},
           {"gamma_star", result.gamma_star},
           {"q_tilde", q_tilde},
           {"n", args.n},
           {"alpha", args.alpha},
           {"epsilon", args.epsilon},
           {"trials", args.trials},
           {"seed", seed.value},
           {"exponent_scale", std::string(dpcp::ToString(options.scale))},
           {"candidates", candidates}};
  WriteFile(args.out, out.dump(2) + "\n");
  manifest.AddOutput(args.out);
  manifest.SetConfig(Json{{"n", args.n},
                          {"alpha", args.alpha},
                          {"epsilon", args.epsilon},
                          {"trials", args.trials},
                          {"bins_grid", options.bins_grid}});
  manifest.SetSeed(seed);
  manifest.Write(ManifestPath(flags, args.out));
  std::cout << std::setprecision(17) << "m_star " << result.m_star << "\n"
            << "gamma_star " << result.gamma_star << "\n"
            << "q_tilde " << q_tilde << "\n";
  return 0;
}

// ---- simulate ----

struct SimulateArgs {
  std::string spec;
  std::string out_dir = ".";
  std::optional<std::size_t> trials;
};

int RunSimulate(const SimulateArgs& args, const CommonFlags& flags) {
  Manifest manifest("simulate");
  const std::string text = ReadFile(args.spec);
  manifest.AddInput(args.spec, text);
  Json spec_json;
  try {
    spec_json = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(args.spec + ": invalid JSON: " + e.what());
  }
  std::optional<uint64_t> spec_seed;
  if (spec_json.contains("seed")) spec_seed = spec_json.at("seed").get<uint64_t>();
  const SeedChoice seed = ResolveSeed(flags, spec_seed);
  spec_json["seed"] = seed.value;
  if (args.trials) spec_json["trials"] = *args.trials;
  dpcp::ExperimentSpec spec = dpcp::ExperimentSpecFromJson(spec_json);

  const dpcp::CoverageReport report =
      dpcp::RunCoverageExperiment(spec, flags.threads);
  if (report.coverages.size() != report.trials) {
    throw dpcp::InvariantError("report has the wrong number of trials");
  }

  const std::filesystem::path dir(args.out_dir);
  const std::string report_path = (dir / "report.json").string();
  const std::string coverage_path = (dir / "coverage_histogram.csv").string();
  const std::string sizes_path = (dir / "set_size_histogram.csv").string();
  WriteFile(report_path, ToJson(report).dump(2) + "\n");
  WriteFile(coverage_path, dpcp::CoverageHistogramCsv(report));
  WriteFile(sizes_path, dpcp::SetSizeHistogramCsv(report));
  for (const auto& p : {report_path, coverage_path, sizes_path}) {
    manifest.AddOutput(p);
  }
  manifest.SetConfig(ToJson(spec));
  manifest.SetSeed(seed);
  manifest.Write(flags.manifest.empty() ? (dir / "manifest.json").string()
                                        : flags.manifest);

  std::cout << std::setprecision(6) << "trials " << report.trials << "\n"
            << "m " << report.config.m << "\n"
            << "gamma " << report.config.gamma << "\n"
            << "q_tilde " << report.config.q_tilde << "\n"
            << "mean_coverage " << report.mean_coverage << "\n"
            << "std_err " << report.std_err << "\n";
  if (report.bounds) {
    std::cout << "lower_bound " << report.bounds->lower << "\n"
              << "upper_bound " << report.bounds->upper << "\n";
  }
  return 0;
}

// ---- dp-check ----

struct DpCheckArgs {
  std::size_t instances = 100;
  std::size_t max_n = 20;
  std::size_t max_m = 8;
  std::string epsilons = "0.5,1,8";
  std::string qs = "0.3,0.5,0.9";
  std::string scale;
  std::string out = "dp_check.json";
};

int RunDpCheck(const DpCheckArgs& args, const CommonFlags& flags) {
  Manifest manifest("dp-check");
  const SeedChoice seed = ResolveSeed(flags);
  dpcp::DpSweepOptions options;
  options.instances = args.instances;
  options.max_n = args.max_n;
  options.max_m = args.max_m;
  options.epsilons = ParseList(args.epsilons, "--epsilons");
  options.qs = ParseList(args.qs, "--qs");
  options.seed = seed.value;
  if (!args.scale.empty()) options.scale = dpcp::ParseExponentScale(args.scale);
  const auto report = dpcp::RunDpSweep(options);

  Json instances = Json::array();
  for (const auto& inst : report.instances) {
    instances.push_back(Json{{"n", inst.n},
                             {"m", inst.m},
                             {"q", inst.q},
                             {"epsilon", inst.epsilon},
                             {"max_ratio", std::isfinite(inst.max_ratio)
                                               ? Json(inst.max_ratio)
                                               : Json("inf")},
                             {"bound", inst.bound}});
  }
  Json out{{"worst_ratio_over_bound",
            std::isfinite(report.worst_normalized) ? Json(report.worst_normalized)
                                                   : Json("inf")},
           {"holds", report.holds()},
           {"exponent_scale", std::string(dpcp::ToString(options.scale))},
           {"instances", instances}};
  WriteFile(args.out, out.dump(2) + "\n");
  manifest.AddOutput(args.out);
  manifest.SetConfig(Json{{"instances", args.instances},
                          {"max_n", args.max_n},
                          {"max_m", args.max_m},
                          {"epsilons", options.epsilons},
                          {"qs", options.qs}});
  manifest.SetSeed(seed);
  manifest.Write(ManifestPath(flags, args.out));
  std::cout << std::setprecision(12) << "instances " << report.instances.size()
            << "\nworst_ratio_over_bound " << report.worst_normalized << "\n"
            << (report.holds() ? "privacy bound holds\n"
                               : "PRIVACY BOUND VIOLATED\n");
  return report.holds() ? 0 : 4;
}

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Random seed (falls back to DPCP_SEED)");
  cmd->add_option("--threads", flags.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--strict", flags.strict, "Refuse to seed from entropy");
  cmd->add_option("--manifest", flags.manifest, "Run manifest path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private conformal prediction sets"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CommonFlags flags;
  CalibrateArgs cal;
  PredictArgs pred;
  TuneArgs tune;
  SimulateArgs sim;
  DpCheckArgs dp;

  auto* c = app.add_subcommand("calibrate", "Private cutoff from calibration scores");
  c->add_option("--scores", cal.scores, "Score file (CSV or JSON array)")->required();
  c->add_flag("--header", cal.header, "CSV score file has a header line");
  c->add_option("--config", cal.config, "Config JSON");
  c->add_option("--alpha", cal.alpha, "Miscoverage level");
  c->add_option("--epsilon", cal.epsilon, "Privacy level");
  c->add_option("--m", cal.m, "Number of bins (tuned when omitted)");
  c->add_option("--gamma", cal.gamma, "Free parameter (optimal when omitted)");
  c->add_option("--trials", cal.trials, "Tuning trials");
  c->add_option("--grid", cal.grid, "Candidate bin counts for tuning, comma separated");
  c->add_option("--exponent-scale", cal.scale,
                "sensitivity_calibrated (default) or as_published");
  c->add_option("--out", cal.out, "Threshold JSON output");
  AddCommonFlags(c, flags);

  auto* p = app.add_subcommand("predict", "Prediction sets from a threshold");
  p->add_option("--threshold", pred.threshold, "Threshold JSON")->required();
  p->add_option("--probs", pred.probs, "CSV of class probabilities (+ label)");
  p->add_option("--scores", pred.scores, "True-label score file");
  p->add_flag("--header", pred.header, "CSV score file has a header line");
  p->add_flag("--coverage", pred.coverage, "Require labels and report coverage");
  p->add_option("--out", pred.out, "Output CSV");
  AddCommonFlags(p, flags);

  auto* t = app.add_subcommand("tune", "Choose the number of bins and gamma");
  t->add_option("--n", tune.n, "Calibration size")->required();
  t->add_option("--alpha", tune.alpha, "Miscoverage level");
  t->add_option("--epsilon", tune.epsilon, "Privacy level")->required();
  t->add_option("--trials", tune.trials, "Simulated calibration sets per candidate");
  t->add_option("--grid", tune.grid, "Candidate bin counts, comma separated");
  t->add_option("--exponent-scale", tune.scale,
                "sensitivity_calibrated (default) or as_published");
  t->add_option("--out", tune.out, "Output JSON");
  AddCommonFlags(t, flags);

  auto* s = app.add_subcommand("simulate", "Monte Carlo coverage experiment");
  s->add_option("--spec", sim.spec, "Experiment spec JSON")->required();
  s->add_option("--out-dir", sim.out_dir, "Output directory");
  s->add_option("--trials", sim.trials, "Override the spec's trial count");
  AddCommonFlags(s, flags);

  auto* d = app.add_subcommand("dp-check", "Exact privacy-ratio sweep");
  d->add_option("--instances", dp.instances, "Number of neighboring pairs");
  d->add_option("--max-n", dp.max_n, "Largest dataset size");
  d->add_option("--max-m", dp.max_m, "Largest number of bins");
  d->add_option("--epsilons", dp.epsilons, "Comma separated privacy levels");
  d->add_option("--qs", dp.qs, "Comma separated quantile levels");
  d->add_option("--exponent-scale", dp.scale,
                "sensitivity_calibrated (default) or as_published");
  d->add_option("--out", dp.out, "Output JSON");
  AddCommonFlags(d, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c->parsed()) return RunCalibrate(cal, flags);
    if (p->parsed()) return RunPredict(pred, flags);
    if (t->parsed()) return RunTune(tune, flags);
    if (s->parsed()) return RunSimulate(sim, flags);
    if (d->parsed()) return RunDpCheck(dp, flags);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 4;
}
