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

#include "dpcp/scores.h"

#include <vector>

#include "gtest/gtest.h"
#include "dpcp/random.h"

namespace dpcp {
namespace {

TEST(UniformGridTest, Edges) {
  EXPECT_EQ(UniformGrid(1).edges(), (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(UniformGrid(2).edges(), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(UniformGrid(4).edges(),
            (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(UniformGrid(4).size(), 4u);
}

TEST(UniformGridTest, ZeroBinsRejected) {
  EXPECT_THROW(UniformGrid(0), std::invalid_argument);
}

TEST(BinGridTest, RejectsBadEdges) {
  EXPECT_THROW(BinGrid({0.0}), std::invalid_argument);
  EXPECT_THROW(BinGrid({0.1, 1.0}), std::invalid_argument);
  EXPECT_THROW(BinGrid({0.0, 0.9}), std::invalid_argument);
  EXPECT_THROW(BinGrid({0.0, 0.5, 0.5, 1.0}), std::invalid_argument);
  EXPECT_NO_THROW(BinGrid({0.0, 0.1, 0.7, 1.0}));
}

TEST(DiscretizeTest, RightClosedBins) {
  const BinGrid grid = UniformGrid(4);
  const ScoreSet d = Discretize(ScoreSet({0.25, 0.3, 0.0, 1.0, 0.75}), grid);
  EXPECT_EQ(d.discretized(), (std::vector<double>{0.25, 0.5, 0.25, 1.0, 0.75}));
  EXPECT_EQ(d.bins(), (std::vector<std::size_t>{1, 2, 1, 4, 3}));
}

TEST(DiscretizeTest, NonUniformGridMatchesDefinition) {
  const BinGrid grid({0.0, 0.1, 0.7, 1.0});
  const ScoreSet d = Discretize(ScoreSet({0.0, 0.1, 0.1000001, 0.7, 0.99}), grid);
  EXPECT_EQ(d.discretized(), (std::vector<double>{0.1, 0.1, 0.7, 0.7, 1.0}));
}

TEST(DiscretizeTest, OutOfRangeNamesIndex) {
  EXPECT_THROW(ScoreSet({0.5, 1.5}), std::out_of_range);
  try {
    ScoreSet({0.1, 0.2, -0.01});
    FAIL();
  } catch (const std::out_of_range& e) {
    EXPECT_NE(std::string(e.what()).find("index 2"), std::string::npos);
  }
}

// Bin membership e_{j-1} < s <= e_j, checked against the stored edges for
// random scores and for the edges themselves.
TEST(DiscretizeTest, PropertiesOnRandomScores) {
  Rng rng(11);
  for (std::size_t m : {1u, 3u, 7u, 10u, 100u, 997u, 100000u}) {
    const BinGrid grid = UniformGrid(m);
    std::vector<double> raw;
    for (int i = 0; i < 2000; ++i) raw.push_back(rng.Uniform());
    for (std::size_t j = 0; j <= m; j += std::max<std::size_t>(1, m / 50)) {
      raw.push_back(grid.edge(j));
    }
    const ScoreSet d = Discretize(ScoreSet(raw), grid);
    std::vector<std::size_t> brute_counts(m + 1, 0);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const std::size_t j = d.bins()[i];
      ASSERT_GE(j, 1u);
      ASSERT_LE(j, m);
      const double s = raw[i];
      EXPECT_TRUE(s <= grid.edge(j));
      EXPECT_TRUE(s > grid.edge(j - 1) || (j == 1 && s == 0.0));
      EXPECT_GE(d.discretized()[i], s);
      EXPECT_LT(d.discretized()[i] - s, grid.max_width() + 1e-15);
      // Linear scan is the definition.
      std::size_t k = 1;
      while (!(s <= grid.edge(k))) ++k;
      ++brute_counts[k];
    }
    EXPECT_EQ(BinCounts(d, grid), brute_counts);
    // Idempotent.
    const ScoreSet again = Discretize(ScoreSet(d.discretized()), grid);
    EXPECT_EQ(again.discretized(), d.discretized());
  }
}

TEST(SoftmaxScoreTest, Examples) {
  EXPECT_NEAR(SoftmaxScore(std::vector<double>{0.95, 0.03, 0.02}, 0), 0.05, 1e-15);
  EXPECT_NEAR(SoftmaxScore(std::vector<double>{0.2, 0.2, 0.6}, 2), 0.4, 1e-15);
  EXPECT_EQ(SoftmaxScore(std::vector<double>{1.0, 0.0, 0.0}, 0), 0.0);
}

TEST(SoftmaxScoreTest, LabelOutOfRange) {
  EXPECT_THROW(SoftmaxScore(std::vector<double>{0.5, 0.5}, 2),
               std::invalid_argument);
}

}  // namespace
}  // namespace dpcp
