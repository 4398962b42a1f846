// Copyright 2026 The Simple Surveys Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "simplesurvey/evaluation.h"

#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "simplesurvey/error.h"
#include "test_util.h"

namespace simplesurvey {
namespace {

TEST(IndividualTestErrorTest, CountsMistakesAndHalfTies) {
  const std::vector<double> scores{3.0, 1.0, 2.0, 2.0};
  const ComparisonSet heldout{
      {0, 0, 1, Winner::kLeft, 0},   // correct
      {0, 1, 2, Winner::kLeft, 0},   // wrong
      {0, 2, 3, Winner::kRight, 0},  // tie
      {0, 0, 2, Winner::kRight, 0},  // wrong
  };
  EXPECT_DOUBLE_EQ(IndividualTestError(scores, heldout), 2.5 / 4.0);
  EXPECT_ERROR_CODE(IndividualTestError(scores, {}), ErrorCode::kEmptyInput);
  const ComparisonSet far{{0, 0, 9, Winner::kLeft, 0}};
  EXPECT_ERROR_CODE(IndividualTestError(scores, far), ErrorCode::kOutOfRange);
}

TEST(ModelTestErrorTest, MeanOfRespondents) {
  EXPECT_DOUBLE_EQ(ModelTestError(std::vector<double>{0.1, 0.3, 0.2}), 0.2);
  EXPECT_ERROR_CODE(ModelTestError({}), ErrorCode::kEmptyInput);
}

TEST(BordaScoresTest, HandWorkedTable) {
  // 0 beats 1 twice and loses once; 1 beats 2; 0 and 2 never met.
  const ComparisonSet comps{{0, 0, 1, Winner::kLeft, 0},
                            {1, 1, 0, Winner::kRight, 0},
                            {2, 0, 1, Winner::kRight, 0},
                            {0, 1, 2, Winner::kLeft, 0}};
  const BordaTable t = BordaScores(comps, 3);
  EXPECT_DOUBLE_EQ(t.P(0, 1), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(t.P(1, 0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(t.P(0, 2), 0.5);
  EXPECT_DOUBLE_EQ(t.P(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(t.scores[0], (2.0 / 3.0 + 0.5) / 2.0);
  EXPECT_DOUBLE_EQ(t.scores[1], (1.0 / 3.0 + 1.0) / 2.0);
  EXPECT_DOUBLE_EQ(t.scores[2], (0.5 + 0.0) / 2.0);
  EXPECT_ERROR_CODE(BordaScores(comps, 1), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(BordaScores(comps, 2), ErrorCode::kOutOfRange);
}

TEST(BordaScoresTest, StrictOrderIsRecoveredExactly) {
  const std::size_t n = 20;
  std::mt19937_64 rng(1);
  std::vector<std::size_t> truth(n);  // truth[r] = item at rank r
  std::iota(truth.begin(), truth.end(), 0);
  std::shuffle(truth.begin(), truth.end(), rng);
  std::vector<std::size_t> rank_of(n);
  for (std::size_t r = 0; r < n; ++r) rank_of[truth[r]] = r;

  ComparisonSet comps;
  std::bernoulli_distribution flip(0.5);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t rep = 0; rep < 5; ++rep) {
        const bool swap = flip(rng);
        const std::size_t left = swap ? b : a, right = swap ? a : b;
        const bool left_wins = rank_of[left] < rank_of[right];
        comps.push_back({rep, left, right, left_wins ? Winner::kLeft : Winner::kRight, 0});
      }
  const GlobalRanking ranking = RankByScore(BordaScores(comps, n).scores);
  EXPECT_EQ(ranking.order, truth);
  const auto matrix = BuildAggregateTestMatrix(comps, n);
  EXPECT_EQ(AggregateTestError(ranking, matrix), 0.0);

  // The reversed order contradicts every comparison.
  GlobalRanking reversed = ranking;
  std::reverse(reversed.order.begin(), reversed.order.end());
  EXPECT_EQ(AggregateTestError(reversed, matrix), 1.0);
}

TEST(RankByScoreTest, DescendingWithIndexTieBreak) {
  const GlobalRanking r = RankByScore({1.0, 3.0, 3.0, 2.0});
  EXPECT_EQ(r.order, (std::vector<std::size_t>{1, 2, 3, 0}));
  EXPECT_EQ(r.score_per_item[1], 3.0);
}

TEST(AggregateTestErrorTest, CountWeighted) {
  // 0 beat 1 three times; 1 beat 0 once; 1 beat 2 once.
  const ComparisonSet heldout{{0, 0, 1, Winner::kLeft, 0}, {1, 0, 1, Winner::kLeft, 0},
                              {2, 1, 0, Winner::kRight, 0}, {3, 0, 1, Winner::kRight, 0},
                              {0, 2, 1, Winner::kRight, 0}};
  const auto c = BuildAggregateTestMatrix(heldout, 3);
  EXPECT_EQ(c.C(0, 1), 3u);
  EXPECT_EQ(c.C(1, 0), 1u);
  EXPECT_EQ(c.C(1, 2), 1u);
  GlobalRanking r;
  r.order = {0, 1, 2};
  EXPECT_DOUBLE_EQ(AggregateTestError(r, c), 1.0 / 5.0);
  r.order = {2, 1, 0};
  EXPECT_DOUBLE_EQ(AggregateTestError(r, c), 4.0 / 5.0);
  r.order = {0, 0, 1};
  EXPECT_ERROR_CODE(AggregateTestError(r, c), ErrorCode::kInvalidArgument);
  r.order = {0, 1};
  EXPECT_ERROR_CODE(AggregateTestError(r, c), ErrorCode::kDimensionMismatch);
  r.order = {0, 1, 2};
  EXPECT_ERROR_CODE(AggregateTestError(r, BuildAggregateTestMatrix({}, 3)),
                    ErrorCode::kEmptyInput);
}

SparseRatingMatrix RandomRatings(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> value(lo, hi);
  std::bernoulli_distribution keep(0.5);
  std::vector<MatrixEntry> entries;
  for (std::size_t i = 0; i < 15; ++i)
    for (std::size_t j = 0; j < 25; ++j)
      if (keep(rng)) entries.push_back({i, j, static_cast<double>(value(rng))});
  return SparseRatingMatrix(15, 25, std::move(entries));
}

TEST(MeanRatingRankingTest, InvariantToPositiveAffineMapsPerRespondent) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> scale(0.2, 5.0), shift(-50.0, 50.0);
  for (const char* name : {"r5", "r100"}) {
    const SurveyScale s = SurveyScale::Parse(name);
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = RandomRatings(rng, s.min_value(), s.max_value());
      std::vector<double> a(15), b(15);
      for (std::size_t i = 0; i < 15; ++i) {
        a[i] = scale(rng);
        b[i] = shift(rng);
      }
      std::vector<double> values;
      for (const auto& e : x.entries()) values.push_back(a[e.row] * e.value + b[e.row]);
      const auto base = MeanRatingRanking(x, s);
      const auto mapped = MeanRatingRanking(x.WithValues(values), s);
      for (std::size_t j = 0; j < 25; ++j) {
        EXPECT_NEAR(base.score_per_item[j], mapped.score_per_item[j], 1e-9);
      }
      // Same order unless two scores are within rounding of each other.
      for (std::size_t r = 0; r + 1 < 25; ++r) {
        const double gap = base.score_per_item[base.order[r]] -
                           base.score_per_item[base.order[r + 1]];
        if (gap > 1e-9) EXPECT_EQ(base.order[r], mapped.order[r]);
      }
    }
  }
}

TEST(MeanRatingRankingTest, BinaryScaleUsesRawMeansAndGlobalFallback) {
  const SparseRatingMatrix x(2, 3, {{0, 0, 1.0}, {1, 0, 1.0}, {0, 1, 0.0}});
  const auto r = MeanRatingRanking(x, SurveyScale::Parse("r2"));
  EXPECT_DOUBLE_EQ(r.score_per_item[0], 1.0);
  EXPECT_DOUBLE_EQ(r.score_per_item[1], 0.0);
  EXPECT_DOUBLE_EQ(r.score_per_item[2], 2.0 / 3.0);
  EXPECT_EQ(r.order, (std::vector<std::size_t>{0, 2, 1}));
}

}  // namespace
}  // namespace simplesurvey
