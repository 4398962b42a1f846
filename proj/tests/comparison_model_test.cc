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

#include "simplesurvey/comparison_model.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "simplesurvey/error.h"
#include "simplesurvey/evaluation.h"
#include "simplesurvey/experiment.h"
#include "test_util.h"

namespace simplesurvey {
namespace {

ComparisonModel RandomModel(std::size_t m, std::size_t n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ComparisonModel model;
  model.U.resize(static_cast<Eigen::Index>(m), k);
  model.V.resize(static_cast<Eigen::Index>(n), k);
  for (Eigen::Index e = 0; e < model.U.size(); ++e) model.U.data()[e] = gauss(rng);
  for (Eigen::Index e = 0; e < model.V.size(); ++e) model.V.data()[e] = gauss(rng);
  return model;
}

TEST(PredictComparisonTest, ExactAntisymmetry) {
  const ComparisonModel model = RandomModel(6, 15, 3, 1);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t a = 0; a < 15; ++a) {
      for (std::size_t b = 0; b < 15; ++b) {
        if (a == b) continue;
        const auto ab = PredictComparison(model, i, a, b);
        const auto ba = PredictComparison(model, i, b, a);
        ASSERT_EQ(ab.score, -ba.score);
        if (ab.winner == Preference::kLeft) {
          EXPECT_EQ(ba.winner, Preference::kRight);
        }
      }
    }
  }
  EXPECT_ERROR_CODE(PredictComparison(model, 0, 2, 2), ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(PredictComparison(model, 6, 0, 1), ErrorCode::kOutOfRange);
}

TEST(PredictComparisonTest, PredictionsAreTransitive) {
  const ComparisonModel model = RandomModel(4, 12, 2, 2);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t a = 0; a < 12; ++a)
      for (std::size_t b = 0; b < 12; ++b)
        for (std::size_t c = 0; c < 12; ++c) {
          if (a == b || b == c || a == c) continue;
          if (PredictComparison(model, i, a, b).winner == Preference::kLeft &&
              PredictComparison(model, i, b, c).winner == Preference::kLeft) {
            EXPECT_EQ(PredictComparison(model, i, a, c).winner, Preference::kLeft);
          }
        }
}

TEST(ComparisonLossTest, InvariantToCommonItemShiftWithoutPenalty) {
  const ComparisonModel model = RandomModel(3, 8, 2, 3);
  ComparisonSet comps;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t a = 0; a + 1 < 8; ++a)
      comps.push_back({i, a, a + 1, a % 2 ? Winner::kLeft : Winner::kRight, 0});
  Eigen::MatrixXd shifted = model.V;
  shifted.rowwise() += Eigen::RowVector2d(0.7, -1.3);
  EXPECT_NEAR(ComparisonLoss(model.U, model.V, 0.0, comps),
              ComparisonLoss(model.U, shifted, 0.0, comps), 1e-10);
}

TEST(FitComparisonsTest, SplitOutcomesGiveNoPreference) {
  // The same respondent saw the pair twice with opposite outcomes.
  const ComparisonSet comps{{0, 0, 1, Winner::kLeft, 0}, {0, 0, 1, Winner::kRight, 0}};
  FitConfig config;
  config.k = 2;
  config.gamma = 0.1;
  const ComparisonModel model = FitComparisons(comps, 1, 2, config);
  const double score = PredictComparison(model, 0, 0, 1).score;
  // Logistic probability of either outcome is one half.
  EXPECT_NEAR(1.0 / (1.0 + std::exp(-score)), 0.5, 1e-2);
}

TEST(FitComparisonsTest, LossTraceNeverIncreases) {
  const auto world = SimulateWorld(20, 30, 2, 1.0, 4);
  const Dataset ds = GenerateResponses(world, SurveyScale::Parse("pc"), 40, 10);
  for (double gamma : {0.0, 1.0}) {
    FitConfig config;
    config.k = 2;
    config.gamma = gamma;
    config.seed = 9;
    SgdSchedule schedule;
    schedule.step_size = 0.5;  // aggressive, so rollbacks actually happen
    schedule.epochs = 60;
    const ComparisonModel model =
        FitComparisons(ds.training_comparisons, 20, 30, config, schedule);
    ASSERT_EQ(model.loss_trace.size(), 60u);
    for (std::size_t e = 1; e < model.loss_trace.size(); ++e) {
      EXPECT_LE(model.loss_trace[e], model.loss_trace[e - 1]);
    }
    EXPECT_DOUBLE_EQ(model.loss_trace.back(),
                     ComparisonLoss(model.U, model.V, gamma, ds.training_comparisons));
  }
}

TEST(FitComparisonsTest, SeededFitIsReproducible) {
  const auto world = SimulateWorld(10, 20, 2, 0.5, 5);
  const Dataset ds = GenerateResponses(world, SurveyScale::Parse("pc"), 30, 5);
  FitConfig config;
  config.seed = 17;
  SgdSchedule schedule;
  schedule.epochs = 20;
  const auto a = FitComparisons(ds.training_comparisons, 10, 20, config, schedule);
  const auto b = FitComparisons(ds.training_comparisons, 10, 20, config, schedule);
  EXPECT_TRUE(a.U == b.U);
  EXPECT_TRUE(a.V == b.V);
}

TEST(FitComparisonsTest, RecoversNoiselessPreferences) {
  const auto world = SimulateWorld(50, 100, 3, 0.0, 6);
  const Dataset ds = GenerateResponses(world, SurveyScale::Parse("pc"), 80, 20);
  FitConfig config;
  config.k = 3;
  config.seed = 1;
  const ComparisonModel model = FitComparisons(ds.training_comparisons, 50, 100, config);
  std::size_t correct = 0;
  for (const auto& c : ds.heldout_comparisons) {
    const auto p = PredictComparison(model, c.respondent, c.left, c.right);
    const bool left = p.winner == Preference::kLeft;
    if (left == (c.winner == Winner::kLeft)) ++correct;
  }
  const double accuracy =
      static_cast<double>(correct) / static_cast<double>(ds.heldout_comparisons.size());
  EXPECT_GT(accuracy, 0.9);
}

TEST(FitComparisonsTest, RejectsBadInput) {
  FitConfig config;
  EXPECT_ERROR_CODE(FitComparisons({}, 2, 2, config), ErrorCode::kEmptyInput);
  const ComparisonSet self{{0, 1, 1, Winner::kLeft, 0}};
  EXPECT_ERROR_CODE(FitComparisons(self, 1, 2, config), ErrorCode::kInvalidArgument);
  const ComparisonSet out{{0, 0, 5, Winner::kLeft, 0}};
  EXPECT_ERROR_CODE(FitComparisons(out, 1, 2, config), ErrorCode::kOutOfRange);
  SgdSchedule bad;
  bad.batch_size = 0;
  const ComparisonSet ok{{0, 0, 1, Winner::kLeft, 0}};
  EXPECT_ERROR_CODE(FitComparisons(ok, 1, 2, config, bad), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace simplesurvey
