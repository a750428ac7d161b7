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

// Private split-conformal calibration: the inflated quantile level, the
// choice of gamma and of the number of bins, and the end-to-end cutoff.

#ifndef DPCP_CALIBRATE_H_
#define DPCP_CALIBRATE_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpcp/mechanism.h"
#include "dpcp/parallel.h"
#include "dpcp/random.h"
#include "dpcp/scores.h"

namespace dpcp {

// Fallback gamma when the stationary point of q~ is outside (0, 1).
inline constexpr double kGammaFallback = 1e-12;
inline constexpr std::size_t kDefaultTuneTrials = 20;

struct CalibConfig {
  double alpha = 0.1;
  double epsilon = 1.0;
  double gamma = 0.0;
  std::size_t m = 0;
  double q_tilde = 0.0;  // bound to the calibration size n
  ExponentScale scale = ExponentScale::kSensitivityCalibrated;

  // The level handed to the mechanism.
  double level() const { return std::min(q_tilde, 1.0); }
};

struct Threshold {
  double s_hat = 1.0;
  std::size_t bin = 0;  // 1-based index of s_hat in the grid
  CalibConfig config;
  std::size_t n = 0;
  uint64_t seed = 0;
  std::vector<std::string> warnings;
};

namespace internal {

inline void CheckDomain(std::size_t n, double alpha, double epsilon,
                        std::size_t m) {
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (!(epsilon > 0.0) || std::isinf(epsilon)) {
    throw std::invalid_argument("epsilon must be positive and finite");
  }
  if (m == 0) throw std::invalid_argument("m must be >= 1");
}

inline void CheckGamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in (0, 1)");
  }
}

}  // namespace internal

// q~ = (n+1)(1-alpha) / (n(1-gamma*alpha)) + 2/(eps*n) * log(m/(gamma*alpha)).
// Not clamped; the mechanism runs at min{q~, 1}.
inline double AdjustedQuantile(std::size_t n, double alpha, double epsilon,
                               double gamma, std::size_t m) {
  internal::CheckDomain(n, alpha, epsilon, m);
  internal::CheckGamma(gamma);
  const auto nd = static_cast<double>(n);
  return (nd + 1.0) * (1.0 - alpha) / (nd * (1.0 - gamma * alpha)) +
         2.0 / (epsilon * nd) *
             std::log(static_cast<double>(m) / (gamma * alpha));
}

// Minimizer of q~ over gamma. The stationary points solve
//   alpha^2 g^2 - (alpha(1-alpha) eps (n+1)/2 + 2 alpha) g + 1 = 0;
// the candidates are the roots inside (0, 1) plus kGammaFallback.
inline double GammaStar(std::size_t n, double alpha, double epsilon,
                        std::size_t m) {
  internal::CheckDomain(n, alpha, epsilon, m);
  const double a = alpha * alpha;
  const double b = alpha * (1.0 - alpha) * epsilon *
                       (static_cast<double>(n) + 1.0) / 2.0 +
                   2.0 * alpha;
  std::vector<double> candidates;
  const double disc = b * b - 4.0 * a;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    // Product of the roots is 1/a; avoids cancellation in the small root.
    const double large = (b + root) / (2.0 * a);
    const double small = 2.0 / (b + root);
    for (double g : {small, large}) {
      if (g > 0.0 && g < 1.0) candidates.push_back(g);
    }
  }
  candidates.push_back(kGammaFallback);
  double best = candidates.front();
  double best_q = AdjustedQuantile(n, alpha, epsilon, best, m);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double q = AdjustedQuantile(n, alpha, epsilon, candidates[i], m);
    if (q < best_q) {
      best = candidates[i];
      best_q = q;
    }
  }
  return best;
}

// 50 logarithmically spaced integers in [1e2, 1e6].
inline std::vector<std::size_t> DefaultBinsGrid() {
  std::vector<std::size_t> grid;
  constexpr int kCount = 50;
  for (int k = 0; k < kCount; ++k) {
    const double exponent = 2.0 + 4.0 * k / (kCount - 1);
    const auto m = static_cast<std::size_t>(std::llround(std::pow(10.0, exponent)));
    if (grid.empty() || grid.back() != m) grid.push_back(m);
  }
  return grid;
}

namespace internal {

inline std::vector<std::size_t> CountsOnGrid(std::span<const double> raw,
                                             const BinGrid& grid) {
  std::vector<std::size_t> counts(grid.size() + 1, 0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    ScoreSet::CheckScore(raw[i], i);
    ++counts[grid.BinOf(raw[i])];
  }
  return counts;
}

}  // namespace internal

struct TuneResult {
  std::size_t m_star = 0;
  double gamma_star = 0.0;
  std::vector<std::size_t> candidates;
  std::vector<double> mean_s_hat;  // per candidate, same order
};

struct TuneOptions {
  std::vector<std::size_t> bins_grid = DefaultBinsGrid();
  std::size_t trials = kDefaultTuneTrials;
  uint64_t seed = 0;
  std::size_t threads = 1;
  ExponentScale scale = ExponentScale::kSensitivityCalibrated;
};

// Chooses m by simulating uniform calibration sets of size n and minimizing
// the Monte Carlo mean of the private cutoff. All candidates see the same
// score sets and mechanism seeds; ties go to the smaller m.
inline TuneResult TuneMStar(std::size_t n, double alpha, double epsilon,
                            const TuneOptions& options) {
  internal::CheckDomain(n, alpha, epsilon, 1);
  if (options.trials == 0) {
    throw std::invalid_argument("TuneMStar: trials must be >= 1");
  }
  if (options.bins_grid.empty()) {
    throw std::invalid_argument("TuneMStar: empty bins grid");
  }
  std::vector<std::size_t> candidates = options.bins_grid;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  if (candidates.front() == 0) {
    throw std::invalid_argument("TuneMStar: candidate m must be >= 1");
  }

  std::vector<std::vector<double>> score_sets(options.trials);
  std::vector<uint64_t> mechanism_seeds(options.trials);
  for (std::size_t t = 0; t < options.trials; ++t) {
    Rng rng(DeriveSeed(options.seed, t));
    score_sets[t].resize(n);
    for (double& s : score_sets[t]) s = rng.Uniform();
    mechanism_seeds[t] = rng.NextU64();
  }

  TuneResult result;
  result.candidates = candidates;
  result.mean_s_hat.assign(candidates.size(), 0.0);
  ParallelFor(candidates.size(), options.threads, [&](std::size_t c) {
    const std::size_t m = candidates[c];
    const double gamma = GammaStar(n, alpha, epsilon, m);
    const double level =
        std::min(AdjustedQuantile(n, alpha, epsilon, gamma, m), 1.0);
    const BinGrid grid = UniformGrid(m);
    const QuantileQuery query(level, epsilon, grid, options.scale);
    double total = 0.0;
    for (std::size_t t = 0; t < options.trials; ++t) {
      const auto dist = MechanismFromCounts(
          internal::CountsOnGrid(score_sets[t], grid), query);
      total += SamplePrivateQuantile(dist, grid, mechanism_seeds[t]).value;
    }
    result.mean_s_hat[c] = total / static_cast<double>(options.trials);
  });

  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    if (result.mean_s_hat[c] < result.mean_s_hat[best]) best = c;
  }
  result.m_star = candidates[best];
  result.gamma_star = GammaStar(n, alpha, epsilon, result.m_star);
  return result;
}

struct CalibrateOptions {
  std::optional<std::size_t> m;
  std::optional<double> gamma;
  ExponentScale scale = ExponentScale::kSensitivityCalibrated;
  // Used only when m is omitted.
  std::vector<std::size_t> bins_grid = DefaultBinsGrid();
  std::size_t tune_trials = kDefaultTuneTrials;
  std::size_t threads = 1;
};

// Stream index reserved for tuning inside Calibrate.
inline constexpr uint64_t kTuneStream = 0x74756e65;  // "tune"

// Private cutoff s_hat for the given calibration scores. The mechanism draw
// uses `seed` directly; tuning (when m is omitted) uses a derived stream.
inline Threshold Calibrate(const ScoreSet& scores, double alpha,
                           double epsilon, uint64_t seed,
                           const CalibrateOptions& options = {}) {
  if (scores.empty()) {
    throw std::invalid_argument("Calibrate: no scores");
  }
  const std::size_t n = scores.size();
  internal::CheckDomain(n, alpha, epsilon, options.m.value_or(1));
  if (options.gamma) internal::CheckGamma(*options.gamma);

  Threshold out;
  out.n = n;
  out.seed = seed;
  out.config.alpha = alpha;
  out.config.epsilon = epsilon;
  out.config.scale = options.scale;
  if (options.m) {
    out.config.m = *options.m;
  } else {
    TuneOptions tune;
    tune.bins_grid = options.bins_grid;
    tune.trials = options.tune_trials;
    tune.seed = DeriveSeed(seed, kTuneStream);
    tune.threads = options.threads;
    tune.scale = options.scale;
    out.config.m = TuneMStar(n, alpha, epsilon, tune).m_star;
  }
  out.config.gamma =
      options.gamma ? *options.gamma : GammaStar(n, alpha, epsilon, out.config.m);
  out.config.q_tilde =
      AdjustedQuantile(n, alpha, epsilon, out.config.gamma, out.config.m);
  if (alpha >= 0.5) {
    out.warnings.push_back(
        "alpha >= 0.5: coverage guarantee is usually applied with small alpha");
  }
  if (out.config.q_tilde >= 1.0) {
    out.warnings.push_back("q_tilde >= 1: mechanism run at level 1");
  }

  const BinGrid grid = UniformGrid(out.config.m);
  const QuantileQuery query(out.config.level(), epsilon, grid, options.scale);
  const ScoreSet disc = Discretize(scores, grid);
  const PrivateQuantile pq = SamplePrivateQuantile(disc, query, seed);
  out.s_hat = pq.value;
  out.bin = pq.bin;
  return out;
}

}  // namespace dpcp

#endif  // DPCP_CALIBRATE_H_
