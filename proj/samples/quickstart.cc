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

// Calibrates a private cutoff on synthetic classifier scores and reports the
// coverage of the resulting prediction sets on fresh examples.

#include <iostream>
#include <vector>

#include "dpcp/dpcp.h"

int main() {
  const dpcp::ScoreLaw law(dpcp::ClassifierLaw{10, 2.5});
  dpcp::Rng rng(2026);

  std::vector<double> calibration(2000);
  for (double& s : calibration) s = law.Sample(rng);

  const double alpha = 0.1, epsilon = 1.0;
  const dpcp::Threshold threshold =
      dpcp::Calibrate(dpcp::ScoreSet(calibration), alpha, epsilon, /*seed=*/7);

  std::size_t covered = 0, total_size = 0;
  const std::size_t n_test = 5000;
  for (std::size_t i = 0; i < n_test; ++i) {
    const dpcp::LabeledExample ex = law.SampleExample(rng);
    const dpcp::PredictionSet set = dpcp::FormSet(ex.label_scores, threshold);
    total_size += set.size();
    covered += ex.true_score() <= threshold.s_hat;
  }
  std::cout << "m=" << threshold.config.m << " gamma=" << threshold.config.gamma
            << " q_tilde=" << threshold.config.q_tilde
            << " s_hat=" << threshold.s_hat << "\n"
            << "coverage=" << static_cast<double>(covered) / n_test
            << " mean_set_size=" << static_cast<double>(total_size) / n_test
            << "\n";
}
