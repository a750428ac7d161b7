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

#include "dpcp/laws.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "dpcp/harness.h"

namespace dpcp {
namespace {

TEST(PMaxTest, UniformEqualMasses) {
  EXPECT_EQ(PMax(ScoreLaw(UniformLaw{}), UniformGrid(4)), 0.25);
  EXPECT_EQ(PMax(ScoreLaw(UniformLaw{}), UniformGrid(8)), 0.125);
  EXPECT_NEAR(PMax(ScoreLaw(UniformLaw{}), UniformGrid(1000)), 1e-3, 1e-15);
}

TEST(PMaxTest, PointMass) {
  const ScoreLaw law(AtomMixtureLaw{0.3, 1.0, 1.0, 1.0});
  for (std::size_t m : {1u, 4u, 7u, 1000u}) {
    EXPECT_EQ(PMax(law, UniformGrid(m)), 1.0);
  }
}

TEST(PMaxTest, BetaTwoTwo) {
  // F(x) = 3x^2 - 2x^3: masses 0.15625, 0.34375, 0.34375, 0.15625.
  EXPECT_NEAR(PMax(ScoreLaw(BetaLaw{2, 2}), UniformGrid(4)), 0.34375, 1e-15);
}

TEST(PMaxTest, AtomAtZeroCountsInFirstBin) {
  const ScoreLaw law(AtomMixtureLaw{0.0, 0.4, 1.0, 1.0});
  EXPECT_NEAR(PMax(law, UniformGrid(10)), 0.4 + 0.06, 1e-15);
}

TEST(PMaxTest, ClassifierUnsupported) {
  EXPECT_THROW(PMax(ScoreLaw(ClassifierLaw{}), UniformGrid(4)),
               std::invalid_argument);
}

TEST(ScoreLawTest, Validation) {
  EXPECT_THROW(ScoreLaw(BetaLaw{0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(ScoreLaw(AtomMixtureLaw{1.5, 0.5, 1, 1}), std::invalid_argument);
  EXPECT_THROW(ScoreLaw(ClassifierLaw{1, 1.0}), std::invalid_argument);
}

// Kolmogorov-Smirnov distance between samples and the analytic CDF.
double KsDistance(const ScoreLaw& law, std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  const auto n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = law.Cdf(xs[i]);
    const double f_left = law.Cdf(std::nextafter(xs[i], -1.0));
    d = std::max({d, (i + 1) / n - f, f_left - i / n});
  }
  return d;
}

TEST(ScoreLawTest, SamplesFollowCdf) {
  const std::size_t n = 20000;
  // 99.9% DKW band.
  const double band = std::sqrt(std::log(2.0 / 0.001) / (2.0 * n));
  for (const ScoreLaw& law :
       {ScoreLaw(UniformLaw{}), ScoreLaw(BetaLaw{2, 5}), ScoreLaw(BetaLaw{0.5, 0.5}),
        ScoreLaw(AtomMixtureLaw{0.3, 0.2, 2, 2})}) {
    Rng rng(21);
    std::vector<double> xs(n);
    for (double& x : xs) {
      x = law.Sample(rng);
      ASSERT_GE(x, 0.0);
      ASSERT_LE(x, 1.0);
    }
    EXPECT_LT(KsDistance(law, xs), band) << law.name();
  }
}

TEST(ScoreLawTest, ClassifierExamples) {
  const ScoreLaw law(ClassifierLaw{3, 2.0});
  Rng rng(4);
  std::vector<int> label_counts(3, 0);
  for (int i = 0; i < 3000; ++i) {
    const LabeledExample ex = law.SampleExample(rng);
    ASSERT_EQ(ex.label_scores.size(), 3u);
    double total = 0.0;
    for (double s : ex.label_scores) total += 1.0 - s;
    EXPECT_NEAR(total, 1.0, 1e-12);
    ++label_counts[ex.label];
  }
  for (int c : label_counts) EXPECT_NEAR(c, 1000, 120);
}

}  // namespace
}  // namespace dpcp
