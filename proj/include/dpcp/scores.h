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

// Conformity scores and their discretization onto a grid of bin edges.

#ifndef DPCP_SCORES_H_
#define DPCP_SCORES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dpcp {

// Ordered bin edges 0 = e_0 < e_1 < ... < e_m = 1. Bin j (1-based) is the
// interval (e_{j-1}, e_j]; the first bin is also closed on the left so that
// a score of exactly 0 lands in bin 1.
class BinGrid {
 public:
  explicit BinGrid(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 2) {
      throw std::invalid_argument("BinGrid: need at least one bin");
    }
    if (edges_.front() != 0.0 || edges_.back() != 1.0) {
      throw std::invalid_argument("BinGrid: edges must start at 0 and end at 1");
    }
    for (std::size_t j = 1; j < edges_.size(); ++j) {
      if (!(edges_[j - 1] < edges_[j])) {
        throw std::invalid_argument("BinGrid: edges must be strictly increasing");
      }
    }
  }

  // Number of bins m.
  std::size_t size() const { return edges_.size() - 1; }
  const std::vector<double>& edges() const { return edges_; }
  // e_j for j in [0, m].
  double edge(std::size_t j) const { return edges_[j]; }

  double max_width() const {
    double w = 0.0;
    for (std::size_t j = 1; j < edges_.size(); ++j) {
      w = std::max(w, edges_[j] - edges_[j - 1]);
    }
    return w;
  }

  // 1-based index j of the bin containing s, i.e. e_{j-1} < s <= e_j, with 0
  // mapped to bin 1. Membership is decided by exact comparisons against the
  // stored edges. Requires s in [0, 1].
  std::size_t BinOf(double s) const {
    const std::size_t m = size();
    if (uniform_) {
      // Start from the arithmetic guess and settle against the stored edges.
      auto j = static_cast<std::size_t>(
          std::clamp(std::ceil(s * static_cast<double>(m)), 1.0,
                     static_cast<double>(m)));
      while (j > 1 && s <= edges_[j - 1]) --j;
      while (j < m && s > edges_[j]) ++j;
      return j;
    }
    auto it = std::lower_bound(edges_.begin() + 1, edges_.end(), s);
    return static_cast<std::size_t>(it - edges_.begin());
  }

  bool operator==(const BinGrid& other) const { return edges_ == other.edges_; }

 private:
  friend BinGrid UniformGrid(std::size_t m);

  std::vector<double> edges_;
  bool uniform_ = false;
};

// Edges j/m for j = 0..m.
inline BinGrid UniformGrid(std::size_t m) {
  if (m == 0) throw std::invalid_argument("UniformGrid: m must be >= 1");
  std::vector<double> edges(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    edges[j] = static_cast<double>(j) / static_cast<double>(m);
  }
  BinGrid grid(std::move(edges));
  grid.uniform_ = true;
  return grid;
}

// A batch of conformity scores in [0, 1], optionally with their discretized
// values on a grid.
class ScoreSet {
 public:
  ScoreSet() = default;
  explicit ScoreSet(std::vector<double> raw) : raw_(std::move(raw)) {
    for (std::size_t i = 0; i < raw_.size(); ++i) {
      CheckScore(raw_[i], i);
    }
  }

  std::size_t size() const { return raw_.size(); }
  bool empty() const { return raw_.empty(); }
  const std::vector<double>& raw() const { return raw_; }

  bool is_discretized() const { return !bins_.empty() || raw_.empty(); }
  // [s_i]; empty until Discretize has run.
  const std::vector<double>& discretized() const { return discretized_; }
  // 1-based bin index of each score; empty until Discretize has run.
  const std::vector<std::size_t>& bins() const { return bins_; }

  static void CheckScore(double s, std::size_t index) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw std::out_of_range("score at index " + std::to_string(index) +
                              " is outside [0, 1]: " + std::to_string(s));
    }
  }

 private:
  friend ScoreSet Discretize(const ScoreSet& scores, const BinGrid& grid);

  std::vector<double> raw_;
  std::vector<double> discretized_;
  std::vector<std::size_t> bins_;
};

// Rounds every score up to the right edge of its bin.
inline ScoreSet Discretize(const ScoreSet& scores, const BinGrid& grid) {
  ScoreSet out;
  out.raw_ = scores.raw_;
  out.discretized_.resize(out.raw_.size());
  out.bins_.resize(out.raw_.size());
  for (std::size_t i = 0; i < out.raw_.size(); ++i) {
    ScoreSet::CheckScore(out.raw_[i], i);
    const std::size_t j = grid.BinOf(out.raw_[i]);
    out.bins_[i] = j;
    out.discretized_[i] = grid.edge(j);
  }
  return out;
}

// Per-bin counts c_1..c_m (index 0 unused) of already discretized scores.
inline std::vector<std::size_t> BinCounts(const ScoreSet& scores,
                                          const BinGrid& grid) {
  std::vector<std::size_t> counts(grid.size() + 1, 0);
  for (std::size_t j : scores.bins()) ++counts[j];
  return counts;
}

// S(x, y) = 1 - f(x)_y.
inline double SoftmaxScore(std::span<const double> probabilities,
                           std::size_t label) {
  if (label >= probabilities.size()) {
    throw std::invalid_argument("SoftmaxScore: label " + std::to_string(label) +
                                " out of range for " +
                                std::to_string(probabilities.size()) +
                                " classes");
  }
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (!(probabilities[k] >= 0.0 && probabilities[k] <= 1.0)) {
      throw std::invalid_argument("SoftmaxScore: probability " +
                                  std::to_string(k) + " is outside [0, 1]");
    }
  }
  return 1.0 - probabilities[label];
}

}  // namespace dpcp

#endif  // DPCP_SCORES_H_
