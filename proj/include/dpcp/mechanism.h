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

// Differentially private quantile: the exponential mechanism over bin edges.
//
// Every edge e_j is scored by the rank discrepancy
//
//   w_j = max{ #{i : [s_i] < e_j} / q , #{i : [s_i] > e_j} / (1 - q) }
//
// and e_j is released with probability proportional to exp(-eps * u_j), where
// u_j is a rescaling of w_j (see ExponentScale). The output distribution is
// closed-form, so privacy can be checked exactly rather than statistically.

#ifndef DPCP_MECHANISM_H_
#define DPCP_MECHANISM_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dpcp/random.h"
#include "dpcp/scores.h"

namespace dpcp {

enum class ExponentScale {
  // u_j = min(q, 1-q) * w_j. Adding or removing one score moves u_j by at
  // most 1 and only in one direction, so the release is eps-DP for every q.
  // Equal to kAsPublished at q = 1/2. At q = 1 the utility is the limit
  // #{i : [s_i] > e_j}.
  kSensitivityCalibrated,
  // u_j = w_j / 2. eps-DP only at q = 1/2; for other q the worst-case
  // probability ratio is exp(eps * max(1/q, 1/(1-q)) / 2). At q = 1 a
  // positive count over a zero denominator is +infinity, so only edges at or
  // above the largest discretized score can be released.
  kAsPublished,
};

inline std::string_view ToString(ExponentScale scale) {
  return scale == ExponentScale::kAsPublished ? "as_published"
                                              : "sensitivity_calibrated";
}

inline ExponentScale ParseExponentScale(std::string_view name) {
  if (name == "sensitivity_calibrated") {
    return ExponentScale::kSensitivityCalibrated;
  }
  if (name == "as_published") return ExponentScale::kAsPublished;
  throw std::invalid_argument("unknown exponent scale: " + std::string(name));
}

struct QuantileQuery {
  QuantileQuery(double q, double epsilon, BinGrid grid,
                ExponentScale scale = ExponentScale::kSensitivityCalibrated)
      : q(q), epsilon(epsilon), grid(std::move(grid)), scale(scale) {
    if (!(q > 0.0 && q <= 1.0)) {
      throw std::invalid_argument("QuantileQuery: q must lie in (0, 1]");
    }
    if (!(epsilon > 0.0)) {
      throw std::invalid_argument("QuantileQuery: epsilon must be positive");
    }
  }

  double q;
  double epsilon;
  BinGrid grid;
  ExponentScale scale;
};

// Output law of the mechanism. Vectors are indexed by j - 1 for edge e_j.
struct MechanismDistribution {
  std::vector<double> weights;        // w_j; may be +inf at q = 1
  std::vector<double> utilities;      // u_j, the value actually exponentiated
  std::vector<double> probabilities;  // P(release e_j)
  std::vector<double> log_probabilities;

  std::size_t size() const { return probabilities.size(); }
};

namespace internal {

// c / (1 - q), with c / 0 read as 0 when c == 0 and +inf otherwise.
inline double AboveTerm(double count, double q) {
  if (q == 1.0) {
    return count == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return count / (1.0 - q);
}

inline const ScoreSet& EnsureDiscretized(const ScoreSet& scores,
                                         const BinGrid& grid,
                                         ScoreSet& storage) {
  if (scores.empty()) return scores;
  if (!scores.is_discretized()) {
    storage = Discretize(scores, grid);
    return storage;
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const std::size_t j = scores.bins()[i];
    if (j == 0 || j > grid.size() || scores.discretized()[i] != grid.edge(j)) {
      throw std::invalid_argument(
          "scores were discretized on a different grid (index " +
          std::to_string(i) + ")");
    }
  }
  return scores;
}

}  // namespace internal

// Exact output distribution for per-bin counts (index 0 unused, 1..m).
inline MechanismDistribution MechanismFromCounts(
    const std::vector<std::size_t>& counts, const QuantileQuery& query) {
  const std::size_t m = query.grid.size();
  if (m == 0 || counts.size() != m + 1) {
    throw std::invalid_argument("mechanism: counts do not match the grid");
  }
  const double q = query.q;
  std::size_t n = 0;
  for (std::size_t j = 1; j <= m; ++j) n += counts[j];

  // Calibrated utility: u_j = max{below_coef * below, above_coef * above}.
  const double lo = std::min(q, 1.0 - q);
  const double below_coef = lo / q;
  const double above_coef = q == 1.0 ? 1.0 : lo / (1.0 - q);

  MechanismDistribution dist;
  dist.weights.resize(m);
  dist.utilities.resize(m);
  std::size_t below = 0;
  for (std::size_t j = 1; j <= m; ++j) {
    const std::size_t above = n - below - counts[j];
    const auto b = static_cast<double>(below);
    const auto a = static_cast<double>(above);
    dist.weights[j - 1] = std::max(b / q, internal::AboveTerm(a, q));
    if (query.scale == ExponentScale::kAsPublished) {
      dist.utilities[j - 1] = 0.5 * dist.weights[j - 1];
    } else {
      dist.utilities[j - 1] = std::max(b * below_coef, a * above_coef);
    }
    below += counts[j];
  }

  // exp(-eps (u_j - u_min)) keeps the largest term at exactly 1.
  const double u_min =
      *std::min_element(dist.utilities.begin(), dist.utilities.end());
  std::vector<double> log_unnorm(m);
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    log_unnorm[j] = -query.epsilon * (dist.utilities[j] - u_min);
    total += std::exp(log_unnorm[j]);
  }
  const double log_total = std::log(total);
  dist.probabilities.resize(m);
  dist.log_probabilities.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    dist.log_probabilities[j] = log_unnorm[j] - log_total;
    dist.probabilities[j] = std::exp(log_unnorm[j]) / total;
  }
  return dist;
}

inline MechanismDistribution MechanismWeights(const ScoreSet& scores,
                                              const QuantileQuery& query) {
  ScoreSet storage;
  const ScoreSet& disc =
      internal::EnsureDiscretized(scores, query.grid, storage);
  return MechanismFromCounts(BinCounts(disc, query.grid), query);
}

// Index (0-based) drawn by inverse CDF from a single uniform.
inline std::size_t SampleIndex(const std::vector<double>& probabilities,
                               double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < probabilities.size(); ++j) {
    if (probabilities[j] > 0.0) last_positive = j;
    cumulative += probabilities[j];
    if (u < cumulative) return j;
  }
  // Rounding left the cumulative sum just short of 1.
  return last_positive;
}

struct PrivateQuantile {
  double value;     // the released edge e_j
  std::size_t bin;  // j, 1-based
};

inline PrivateQuantile SamplePrivateQuantile(const MechanismDistribution& dist,
                                             const BinGrid& grid,
                                             uint64_t seed) {
  Rng rng(seed);
  const std::size_t j = SampleIndex(dist.probabilities, rng.Uniform()) + 1;
  return {grid.edge(j), j};
}

// Draws one edge from the mechanism. Consumes exactly one engine word of the
// stream seeded by `seed`.
inline PrivateQuantile SamplePrivateQuantile(const ScoreSet& scores,
                                             const QuantileQuery& query,
                                             uint64_t seed) {
  return SamplePrivateQuantile(MechanismWeights(scores, query), query.grid,
                               seed);
}

namespace internal {

inline bool IsSubMultiset(std::vector<double> small, std::vector<double> big) {
  std::sort(small.begin(), small.end());
  std::sort(big.begin(), big.end());
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace internal

// max_j P_scores(e_j) / P_neighbor(e_j) for datasets differing by exactly one
// score. Edges with probability 0 under both are skipped; an edge reachable
// only under `scores` yields +inf.
inline double DpRatio(const ScoreSet& scores, const ScoreSet& neighbor,
                      const QuantileQuery& query) {
  const std::size_t a = scores.size();
  const std::size_t b = neighbor.size();
  if (a != b + 1 && b != a + 1) {
    throw std::invalid_argument(
        "DpRatio: datasets must differ by exactly one score");
  }
  const bool nested = a > b ? internal::IsSubMultiset(neighbor.raw(), scores.raw())
                            : internal::IsSubMultiset(scores.raw(), neighbor.raw());
  if (!nested) {
    throw std::invalid_argument(
        "DpRatio: one dataset must equal the other with one score removed");
  }
  const MechanismDistribution p = MechanismWeights(scores, query);
  const MechanismDistribution p_prime = MechanismWeights(neighbor, query);
  const double inf = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double lp = p.log_probabilities[j];
    const double lq = p_prime.log_probabilities[j];
    if (lp == -inf) continue;
    if (lq == -inf) return inf;
    worst = std::max(worst, std::exp(lp - lq));
  }
  return worst;
}

}  // namespace dpcp

#endif  // DPCP_MECHANISM_H_
