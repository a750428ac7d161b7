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

// Monte Carlo verification of the coverage guarantees, the coverage upper
// bound, the mechanism's rank accuracy, and the Beta order-statistic
// dominance used in the coverage proofs.

#ifndef DPCP_HARNESS_H_
#define DPCP_HARNESS_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "dpcp/calibrate.h"
#include "dpcp/laws.h"
#include "dpcp/mechanism.h"
#include "dpcp/parallel.h"
#include "dpcp/predict.h"
#include "dpcp/random.h"
#include "dpcp/scores.h"

namespace dpcp {

// Constant used for the simplified (order-term) upper bound.
inline constexpr double kEnvelopeConstant = 5.0;

// Coverage upper bound
//   1 - (1-g)a + (1-g a)(2 p_max + 2(1 + max{q~/(1-q~), 1}) log(m/(g a)) / ((n+1) eps)).
// +inf when q~ >= 1. Not capped at 1.
inline double Theorem3Upper(std::size_t n, double alpha, double epsilon,
                            double gamma, std::size_t m, double p_max) {
  if (!(p_max >= 0.0 && p_max <= 1.0)) {
    throw std::invalid_argument("p_max must lie in [0, 1]");
  }
  const double q_tilde = AdjustedQuantile(n, alpha, epsilon, gamma, m);
  if (q_tilde >= 1.0) return std::numeric_limits<double>::infinity();
  const double ratio = std::max(q_tilde / (1.0 - q_tilde), 1.0);
  const double log_term =
      2.0 * (1.0 + ratio) * std::log(static_cast<double>(m) / (gamma * alpha)) /
      ((static_cast<double>(n) + 1.0) * epsilon);
  return 1.0 - (1.0 - gamma) * alpha +
         (1.0 - gamma * alpha) * (2.0 * p_max + log_term);
}

// 1 - alpha + c * log(n eps / alpha) / (n eps).
inline double CoverageEnvelope(std::size_t n, double alpha, double epsilon,
                               double c = kEnvelopeConstant) {
  const double ne = static_cast<double>(n) * epsilon;
  return 1.0 - alpha + c * std::log(ne / alpha) / ne;
}

struct BoundReport {
  double lower = 0.0;
  double upper = 0.0;
  double upper_simplified = 0.0;
  double p_max = 0.0;
};

struct ExperimentSpec {
  ScoreLaw law;
  std::size_t n_calib = 1000;
  std::size_t n_test = 1000;
  double alpha = 0.1;
  double epsilon = 1.0;
  std::optional<std::size_t> m;
  std::optional<double> gamma;
  std::size_t trials = 100;
  uint64_t seed = 0;
  ExponentScale scale = ExponentScale::kSensitivityCalibrated;
  std::vector<std::size_t> bins_grid = DefaultBinsGrid();
  std::size_t tune_trials = kDefaultTuneTrials;
};

struct CoverageReport {
  ExperimentSpec spec;
  CalibConfig config;
  std::size_t trials = 0;
  std::vector<double> coverages;
  std::vector<double> s_hats;
  // Non-private split-conformal cutoff of each trial's calibration set.
  std::vector<double> nonprivate_s_hats;
  SizeHistogram set_sizes;  // pooled over trials; empty for scalar laws
  double mean_coverage = 0.0;
  double std_err = 0.0;
  std::optional<BoundReport> bounds;
};

// The ceil((n+1)(1-alpha))-th smallest score, or 1 if that rank exceeds n.
inline double NonPrivateQuantile(std::vector<double> scores, double alpha) {
  const auto n = scores.size();
  const auto rank = static_cast<std::size_t>(
      std::ceil((static_cast<double>(n) + 1.0) * (1.0 - alpha)));
  if (rank == 0 || n == 0) throw std::invalid_argument("no scores");
  if (rank > n) return 1.0;
  std::nth_element(scores.begin(), scores.begin() + (rank - 1), scores.end());
  return scores[rank - 1];
}

inline double Mean(const std::vector<double>& xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return xs.empty() ? 0.0 : total / static_cast<double>(xs.size());
}

// Sample standard deviation over sqrt(count); 0 for fewer than two values.
inline double StdErr(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = Mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  const auto k = static_cast<double>(xs.size());
  return std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
}

// Repeats: draw a calibration set, calibrate privately, draw a test set from
// the same law, record coverage. Trial t uses stream DeriveSeed(seed, t), so
// the report is identical for every thread count.
inline CoverageReport RunCoverageExperiment(const ExperimentSpec& spec,
                                            std::size_t threads = 1) {
  if (spec.trials == 0) {
    throw std::invalid_argument("RunCoverageExperiment: trials must be >= 1");
  }
  if (spec.n_calib == 0 || spec.n_test == 0) {
    throw std::invalid_argument(
        "RunCoverageExperiment: n_calib and n_test must be >= 1");
  }
  CoverageReport report;
  report.spec = spec;
  report.trials = spec.trials;
  CalibConfig& config = report.config;
  config.alpha = spec.alpha;
  config.epsilon = spec.epsilon;
  config.scale = spec.scale;
  if (spec.m) {
    config.m = *spec.m;
  } else {
    TuneOptions tune;
    tune.bins_grid = spec.bins_grid;
    tune.trials = spec.tune_trials;
    tune.seed = DeriveSeed(spec.seed, kTuneStream);
    tune.threads = threads;
    tune.scale = spec.scale;
    config.m = TuneMStar(spec.n_calib, spec.alpha, spec.epsilon, tune).m_star;
  }
  config.gamma = spec.gamma ? *spec.gamma
                            : GammaStar(spec.n_calib, spec.alpha, spec.epsilon,
                                        config.m);
  config.q_tilde = AdjustedQuantile(spec.n_calib, spec.alpha, spec.epsilon,
                                    config.gamma, config.m);

  const BinGrid grid = UniformGrid(config.m);
  const QuantileQuery query(config.level(), spec.epsilon, grid, spec.scale);

  report.coverages.assign(spec.trials, 0.0);
  report.s_hats.assign(spec.trials, 0.0);
  report.nonprivate_s_hats.assign(spec.trials, 0.0);
  std::vector<SizeHistogram> sizes(spec.trials);
  const bool labeled = spec.law.has_labels();

  ParallelFor(spec.trials, threads, [&](std::size_t t) {
    Rng rng(DeriveSeed(spec.seed, t));
    std::vector<double> calib(spec.n_calib);
    for (double& s : calib) s = spec.law.Sample(rng);
    const uint64_t mechanism_seed = rng.NextU64();
    const auto dist =
        MechanismFromCounts(internal::CountsOnGrid(calib, grid), query);
    const double s_hat = SamplePrivateQuantile(dist, grid, mechanism_seed).value;

    std::size_t covered = 0;
    for (std::size_t i = 0; i < spec.n_test; ++i) {
      if (labeled) {
        const LabeledExample ex = spec.law.SampleExample(rng);
        const PredictionSet set = FormSet(ex.label_scores, s_hat);
        ++sizes[t][set.size()];
        if (ex.true_score() <= s_hat) ++covered;
      } else if (spec.law.Sample(rng) <= s_hat) {
        ++covered;
      }
    }
    report.coverages[t] =
        static_cast<double>(covered) / static_cast<double>(spec.n_test);
    report.s_hats[t] = s_hat;
    report.nonprivate_s_hats[t] = NonPrivateQuantile(std::move(calib), spec.alpha);
  });

  for (const auto& h : sizes) {
    for (const auto& [size, count] : h) report.set_sizes[size] += count;
  }
  report.mean_coverage = Mean(report.coverages);
  report.std_err = StdErr(report.coverages);

  if (spec.law.has_cdf()) {
    BoundReport b;
    b.lower = 1.0 - spec.alpha;
    b.p_max = PMax(spec.law, grid);
    b.upper = Theorem3Upper(spec.n_calib, spec.alpha, spec.epsilon,
                            config.gamma, config.m, b.p_max);
    b.upper_simplified =
        CoverageEnvelope(spec.n_calib, spec.alpha, spec.epsilon);
    report.bounds = b;
  }
  return report;
}

struct Lemma1Report {
  double lower_freq = 0.0;
  double upper_freq = 0.0;
  // Exact probabilities of the same events under the mechanism.
  double lower_exact = 0.0;
  double upper_exact = 0.0;
  // The rank bounds: lower event is #{[s_i] <= s}/n >= lower_bound, upper
  // event is #{[s_i] < s}/n <= upper_bound.
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  // Binomial standard deviation of a frequency whose success rate is 1-delta.
  double sigma = 0.0;
  std::size_t trials = 0;
};

// Empirical frequencies of the two rank-accuracy events over repeated draws
// of the mechanism on one fixed uniform score set.
inline Lemma1Report Lemma1Frequency(
    std::size_t n, double q, double epsilon, std::size_t m, double delta,
    std::size_t trials, uint64_t seed,
    ExponentScale scale = ExponentScale::kSensitivityCalibrated) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("Lemma1Frequency: q must lie in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("Lemma1Frequency: delta must lie in (0, 1)");
  }
  if (n == 0 || trials == 0) {
    throw std::invalid_argument("Lemma1Frequency: n and trials must be >= 1");
  }
  const BinGrid grid = UniformGrid(m);
  Rng rng(DeriveSeed(seed, 0));
  std::vector<double> scores(n);
  for (double& s : scores) s = rng.Uniform();
  const auto counts = internal::CountsOnGrid(scores, grid);
  const auto dist = MechanismFromCounts(counts, QuantileQuery(q, epsilon, grid, scale));

  const auto nd = static_cast<double>(n);
  const double log_term = std::log(static_cast<double>(m) / delta) / (nd * epsilon);
  Lemma1Report r;
  r.trials = trials;
  r.lower_bound = q - 2.0 * std::max((1.0 - q) / q, 1.0) * log_term;
  r.upper_bound = q + 2.0 * std::max(q / (1.0 - q), 1.0) * log_term;
  r.sigma = std::sqrt(delta * (1.0 - delta) / static_cast<double>(trials));

  // at_most[j] = #{[s_i] <= e_j}; below[j] = #{[s_i] < e_j}.
  std::vector<bool> lower_ok(m + 1), upper_ok(m + 1);
  std::size_t cumulative = 0;
  for (std::size_t j = 1; j <= m; ++j) {
    const std::size_t below = cumulative;
    cumulative += counts[j];
    lower_ok[j] = static_cast<double>(cumulative) / nd >= r.lower_bound;
    upper_ok[j] = static_cast<double>(below) / nd <= r.upper_bound;
    if (lower_ok[j]) r.lower_exact += dist.probabilities[j - 1];
    if (upper_ok[j]) r.upper_exact += dist.probabilities[j - 1];
  }
  std::size_t lower_hits = 0, upper_hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t j =
        SamplePrivateQuantile(dist, grid, DeriveSeed(seed, t + 1)).bin;
    lower_hits += lower_ok[j];
    upper_hits += upper_ok[j];
  }
  r.lower_freq = static_cast<double>(lower_hits) / static_cast<double>(trials);
  r.upper_freq = static_cast<double>(upper_hits) / static_cast<double>(trials);
  return r;
}

// Confidence 1 - 0.001 DKW half-width for an empirical CDF of `trials` draws.
inline double DkwBand(std::size_t trials) {
  return std::sqrt(std::log(2.0 / 0.001) / (2.0 * static_cast<double>(trials)));
}

struct DominanceReport {
  std::size_t rank = 0;  // ceil(n q)
  double beta_a = 0.0;
  double beta_b = 0.0;
  double p_max = 0.0;
  double dkw = 0.0;
  // max_u [ECDF(u) - BetaCdf(u)]: positive means the statistic is not
  // stochastically above the Beta law.
  double lower_violation = 0.0;
  // max_u [BetaCdf(u - p_max) - ECDF(u)]: positive means the statistic is not
  // stochastically below the shifted Beta law.
  double upper_violation = 0.0;
  double mean = 0.0;
  double std_err = 0.0;
  double beta_mean = 0.0;  // rank / (n + 1)
  std::vector<double> samples;

  bool lower_holds() const { return lower_violation <= dkw; }
  bool upper_holds() const { return upper_violation <= dkw; }
};

// Samples F(F^-1_n(q)) for discretized scores, where F^-1_n is the empirical
// quantile, and compares its law with Beta(k, n-k+1) and Beta(k, n-k+1) +
// p_max, k = ceil(n q).
inline DominanceReport Lemma2DominanceCheck(const ScoreLaw& law, std::size_t n,
                                            double q, const BinGrid& grid,
                                            std::size_t trials, uint64_t seed,
                                            std::size_t threads = 1) {
  if (!law.has_cdf()) {
    throw std::invalid_argument("Lemma2DominanceCheck: law has no CDF");
  }
  if (n == 0 || trials == 0) {
    throw std::invalid_argument("Lemma2DominanceCheck: n, trials must be >= 1");
  }
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument("Lemma2DominanceCheck: q must lie in (0, 1]");
  }
  DominanceReport r;
  r.rank = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(static_cast<double>(n) * q)), 1, n);
  r.beta_a = static_cast<double>(r.rank);
  r.beta_b = static_cast<double>(n - r.rank + 1);
  r.p_max = PMax(law, grid);
  r.dkw = DkwBand(trials);
  r.beta_mean = r.beta_a / (static_cast<double>(n) + 1.0);

  std::vector<double> edge_cdf(grid.size() + 1);
  for (std::size_t j = 0; j <= grid.size(); ++j) edge_cdf[j] = law.Cdf(grid.edge(j));

  r.samples.assign(trials, 0.0);
  ParallelFor(trials, threads, [&](std::size_t t) {
    Rng rng(DeriveSeed(seed, t));
    std::vector<std::size_t> bins(n);
    for (auto& j : bins) j = grid.BinOf(law.Sample(rng));
    std::nth_element(bins.begin(), bins.begin() + (r.rank - 1), bins.end());
    r.samples[t] = edge_cdf[bins[r.rank - 1]];
  });
  r.mean = Mean(r.samples);
  r.std_err = StdErr(r.samples);

  std::vector<double> sorted = r.samples;
  std::sort(sorted.begin(), sorted.end());
  const auto total = static_cast<double>(trials);
  auto beta_cdf = [&](double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return boost::math::ibeta(r.beta_a, r.beta_b, u);
  };
  r.lower_violation = -1.0;
  r.upper_violation = -1.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t k = i;
    while (k < sorted.size() && sorted[k] == sorted[i]) ++k;
    const double u = sorted[i];
    const double ecdf_left = static_cast<double>(i) / total;
    const double ecdf = static_cast<double>(k) / total;
    // ECDF is right-continuous and the Beta CDFs are continuous, so both
    // suprema are attained at (or just before) a jump.
    r.lower_violation = std::max(r.lower_violation, ecdf - beta_cdf(u));
    r.upper_violation =
        std::max(r.upper_violation, beta_cdf(u - r.p_max) - ecdf_left);
    i = k;
  }
  return r;
}

struct DpSweepOptions {
  std::size_t instances = 100;
  std::size_t max_n = 20;
  std::size_t max_m = 8;
  std::vector<double> epsilons = {0.5, 1.0, 8.0};
  std::vector<double> qs = {0.3, 0.5, 0.9};
  uint64_t seed = 0;
  ExponentScale scale = ExponentScale::kSensitivityCalibrated;
};

struct DpSweepInstance {
  std::size_t n = 0;  // size of the larger dataset
  std::size_t m = 0;
  double q = 0.0;
  double epsilon = 0.0;
  // max over edges and both directions of the probability ratio
  double max_ratio = 0.0;
  double bound = 0.0;  // exp(epsilon)
};

struct DpSweepReport {
  std::vector<DpSweepInstance> instances;
  // max over instances of max_ratio / exp(epsilon)
  double worst_normalized = 0.0;

  bool holds(double rel_tol = 1e-9) const {
    return worst_normalized <= 1.0 + rel_tol;
  }
};

// Random neighboring pairs: a dataset of 1..max_n scores and the same
// dataset with one score removed. Scores are drawn from a coarse lattice half
// the time so that ties and shared bins are common.
inline DpSweepReport RunDpSweep(const DpSweepOptions& options) {
  if (options.max_n == 0 || options.max_m == 0 || options.epsilons.empty() ||
      options.qs.empty()) {
    throw std::invalid_argument("RunDpSweep: empty parameter ranges");
  }
  DpSweepReport report;
  for (std::size_t k = 0; k < options.instances; ++k) {
    Rng rng(DeriveSeed(options.seed, k));
    DpSweepInstance inst;
    inst.n = 1 + rng.NextU64() % options.max_n;
    inst.m = 1 + rng.NextU64() % options.max_m;
    inst.q = options.qs[rng.NextU64() % options.qs.size()];
    inst.epsilon = options.epsilons[rng.NextU64() % options.epsilons.size()];
    inst.bound = std::exp(inst.epsilon);
    const bool lattice = rng.Uniform() < 0.5;
    std::vector<double> big(inst.n);
    for (double& s : big) {
      s = lattice ? static_cast<double>(rng.NextU64() % 5) / 4.0 : rng.Uniform();
    }
    std::vector<double> small = big;
    small.erase(small.begin() +
                static_cast<std::ptrdiff_t>(rng.NextU64() % inst.n));
    const QuantileQuery query(inst.q, inst.epsilon, UniformGrid(inst.m),
                              options.scale);
    const ScoreSet a(big), b(small);
    inst.max_ratio = std::max(DpRatio(a, b, query), DpRatio(b, a, query));
    report.worst_normalized =
        std::max(report.worst_normalized, inst.max_ratio / inst.bound);
    report.instances.push_back(inst);
  }
  return report;
}

}  // namespace dpcp

#endif  // DPCP_HARNESS_H_
