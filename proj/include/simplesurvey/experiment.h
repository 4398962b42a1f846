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

// Synthetic respondents and the subsampling sweep that produces
// error-vs-number-of-questions curves.

#ifndef SIMPLESURVEY_EXPERIMENT_H_
#define SIMPLESURVEY_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "simplesurvey/comparison_model.h"
#include "simplesurvey/factorization.h"
#include "simplesurvey/survey_data.h"

namespace simplesurvey {

struct SyntheticWorld {
  Eigen::MatrixXd true_U;  // m x true_rank
  Eigen::MatrixXd true_V;  // n x true_rank
  int true_rank = 1;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;

  std::size_t num_respondents() const { return static_cast<std::size_t>(true_U.rows()); }
  std::size_t num_items() const { return static_cast<std::size_t>(true_V.rows()); }
  double Utility(std::size_t i, std::size_t j) const {
    return true_U.row(static_cast<Eigen::Index>(i))
        .dot(true_V.row(static_cast<Eigen::Index>(j)));
  }
};

// Factors drawn from a seeded standard Gaussian.
SyntheticWorld SimulateWorld(std::size_t m, std::size_t n, int true_rank,
                             double noise_sd, std::uint64_t seed);

// Per respondent: sample items without replacement, perturb utilities with
// Gaussian noise and discretize onto the scale:
//   R100  affine map of the respondent's sampled noisy utilities onto
//         [1, 100], rounded;
//   R5    quintile of the item's rank among the respondent's sampled items;
//   R2    1 iff the noisy utility is at or above the respondent's median.
// PC respondents answer ratings_per_respondent training comparisons instead.
// Held-out comparisons use fresh noise and never repeat an unordered pair
// within a respondent (for PC, also not a training pair).
Dataset GenerateResponses(const SyntheticWorld& world, const SurveyScale& scale,
                          std::size_t ratings_per_respondent = 80,
                          std::size_t heldout_pc_per_respondent = 20);

enum class SweepMode { kIndividual, kAggregate };

struct SweepConfig {
  std::vector<std::size_t> sizes{8, 16, 24, 32, 40, 48, 56, 64, 72};
  int draws = 100;
  SweepMode mode = SweepMode::kIndividual;
  std::uint64_t seed = 0;
  FitConfig fit;
  SgdSchedule schedule;  // PC datasets only
  // kOpenMP runs (size, draw) tasks concurrently; kSerial is the reference.
  Backend backend = Backend::kOpenMP;
};

struct ErrorPoint {
  std::size_t size = 0;
  double mean_error = 0.0;
  double sd = 0.0;  // sample standard deviation across draws
  int draws = 0;
};

struct ErrorCurve {
  std::vector<ErrorPoint> points;
};

// For each size s and draw d, subsample s training queries per respondent
// from the stream derived from (seed, s, d), then score: Individual mode fits
// a factorization (ratings) or comparison model (PC) and averages per-
// respondent held-out errors; Aggregate mode ranks items by mean rating
// (ratings) or borda score (PC) and scores against the pooled held-out
// comparisons. Output is independent of thread count and scheduling.
ErrorCurve RunSweep(const Dataset& dataset, const SweepConfig& config);

// Error of a single (size, draw) task; RunSweep aggregates these.
double SweepDrawError(const Dataset& dataset, const SweepConfig& config,
                      std::size_t size, int draw);

// Individual model test error after uniformly permuting each respondent's
// item scores, averaged over `permutations` draws. Its expectation is 0.5
// whenever scores are distinct.
double PermutedScoreError(const std::vector<std::vector<double>>& scores,
                          const Dataset& dataset, int permutations,
                          std::uint64_t seed);

// Held-out comparisons grouped by respondent.
std::vector<ComparisonSet> HeldoutByRespondent(const Dataset& dataset);

}  // namespace simplesurvey

#endif  // SIMPLESURVEY_EXPERIMENT_H_
