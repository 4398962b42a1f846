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

// Individual and aggregate test errors, borda aggregation and mean-rating
// global rankings.

#ifndef SIMPLESURVEY_EVALUATION_H_
#define SIMPLESURVEY_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "simplesurvey/survey_data.h"

namespace simplesurvey {

// Fraction of held-out comparisons whose winner did not get the higher
// predicted score; exact ties count 0.5.
double IndividualTestError(std::span<const double> predicted_scores,
                           std::span<const ComparisonRecord> heldout);

// Mean of per-respondent errors.
double ModelTestError(std::span<const double> per_respondent_errors);

struct BordaTable {
  std::size_t n = 0;
  // Row-major n x n; p[i*n + j] = share of observed i-vs-j comparisons won by
  // i, 0.5 when the pair was never compared. Diagonal is 0 and ignored.
  std::vector<double> p;
  std::vector<double> scores;

  double P(std::size_t i, std::size_t j) const { return p[i * n + j]; }
};

// bs_i = (1 / (n - 1)) * sum_{j != i} p_ij over comparisons pooled across
// respondents.
BordaTable BordaScores(std::span<const ComparisonRecord> comparisons, std::size_t n);

struct GlobalRanking {
  std::vector<std::size_t> order;     // best first
  std::vector<double> score_per_item;  // indexed by item
};

// Sort by score descending, ties by item index ascending.
GlobalRanking RankByScore(std::vector<double> scores);

// Mean rating per item (after per-respondent z-normalization for R5/R100);
// items without observations get the global mean.
GlobalRanking MeanRatingRanking(const SparseRatingMatrix& matrix,
                                const SurveyScale& scale);

struct AggregateTestMatrix {
  std::size_t n = 0;
  // Row-major; counts[i*n + j] = times item i beat item j.
  std::vector<std::uint64_t> counts;

  std::uint64_t C(std::size_t i, std::size_t j) const { return counts[i * n + j]; }
};

AggregateTestMatrix BuildAggregateTestMatrix(
    std::span<const ComparisonRecord> heldout, std::size_t n);

// Count-weighted share of pooled comparisons contradicted by the ranking.
double AggregateTestError(const GlobalRanking& ranking,
                          const AggregateTestMatrix& matrix);

}  // namespace simplesurvey

#endif  // SIMPLESURVEY_EVALUATION_H_
