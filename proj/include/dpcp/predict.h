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

#ifndef DPCP_PREDICT_H_
#define DPCP_PREDICT_H_

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpcp/calibrate.h"

namespace dpcp {

// C(x) = {y : S(x, y) <= s_hat}.
struct PredictionSet {
  std::vector<std::size_t> included_labels;
  double threshold_used = 0.0;

  std::size_t size() const { return included_labels.size(); }
};

inline PredictionSet FormSet(std::span<const double> label_scores,
                             double s_hat) {
  PredictionSet set;
  set.threshold_used = s_hat;
  for (std::size_t y = 0; y < label_scores.size(); ++y) {
    if (!(label_scores[y] >= 0.0 && label_scores[y] <= 1.0)) {
      throw std::invalid_argument("FormSet: score for label " +
                                  std::to_string(y) + " is outside [0, 1]");
    }
    if (label_scores[y] <= s_hat) set.included_labels.push_back(y);
  }
  return set;
}

inline PredictionSet FormSet(std::span<const double> label_scores,
                             const Threshold& threshold) {
  return FormSet(label_scores, threshold.s_hat);
}

struct CoverageEstimate {
  std::size_t covered = 0;
  std::size_t total = 0;
  double coverage = 0.0;  // covered / total
};

// Empirical coverage from the true-label scores of a test batch.
inline CoverageEstimate Evaluate(std::span<const double> test_scores,
                                 double s_hat) {
  if (test_scores.empty()) {
    throw std::invalid_argument("Evaluate: no test scores");
  }
  CoverageEstimate est;
  est.total = test_scores.size();
  for (std::size_t i = 0; i < test_scores.size(); ++i) {
    ScoreSet::CheckScore(test_scores[i], i);
    if (test_scores[i] <= s_hat) ++est.covered;
  }
  est.coverage =
      static_cast<double>(est.covered) / static_cast<double>(est.total);
  return est;
}

inline CoverageEstimate Evaluate(std::span<const double> test_scores,
                                 const Threshold& threshold) {
  return Evaluate(test_scores, threshold.s_hat);
}

// Set size -> number of sets.
using SizeHistogram = std::map<std::size_t, std::size_t>;

}  // namespace dpcp

#endif  // DPCP_PREDICT_H_
