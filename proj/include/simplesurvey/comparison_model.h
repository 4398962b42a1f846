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

// Factorized model for pairwise-comparison surveys. Respondent i prefers item
// a over b when u_i . (v_a - v_b) > 0. Fitted by minimizing the logistic loss
//
//   sum_c log(1 + exp(-y_c * u_i . (v_a - v_b))) + gamma (||U||^2 + ||V||^2)
//
// with seeded mini-batch gradient descent.

#ifndef SIMPLESURVEY_COMPARISON_MODEL_H_
#define SIMPLESURVEY_COMPARISON_MODEL_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "simplesurvey/factorization.h"
#include "simplesurvey/survey_data.h"

namespace simplesurvey {

struct SgdSchedule {
  double step_size = 0.05;  // epoch e uses step_size / sqrt(e)
  int epochs = 200;
  std::size_t batch_size = 32;
};

struct ComparisonModel {
  Eigen::MatrixXd U;  // m x k
  Eigen::MatrixXd V;  // n x k
  double gamma = 0.0;
  SgdSchedule schedule;
  // Training loss after each epoch; nonincreasing.
  std::vector<double> loss_trace;

  int k() const { return static_cast<int>(U.cols()); }
  std::size_t rows() const { return static_cast<std::size_t>(U.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(V.rows()); }
};

// Regularized logistic training loss of the given factors.
double ComparisonLoss(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                      double gamma, std::span<const ComparisonRecord> comparisons);

// Uses config.k, config.gamma, config.seed and config.init_scale (default 0.1).
// An epoch whose loss exceeds the previous epoch's is rolled back and the step
// size halved, so loss_trace never increases.
ComparisonModel FitComparisons(std::span<const ComparisonRecord> comparisons,
                               std::size_t m, std::size_t n,
                               const FitConfig& config,
                               const SgdSchedule& schedule = {});

enum class Preference { kLeft, kRight, kTie };

struct ComparisonPrediction {
  Preference winner = Preference::kTie;
  double score = 0.0;  // u_i . (v_a - v_b)
};

ComparisonPrediction PredictComparison(const ComparisonModel& model,
                                       std::size_t i, std::size_t a,
                                       std::size_t b);

// u_i . v_j for every item j; differences of these are the pairwise scores.
std::vector<double> ItemScores(const ComparisonModel& model, std::size_t i);

}  // namespace simplesurvey

#endif  // SIMPLESURVEY_COMPARISON_MODEL_H_
