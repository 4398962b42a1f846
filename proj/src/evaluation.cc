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

#include "simplesurvey/error.h"

namespace simplesurvey {

double IndividualTestError(std::span<const double> predicted_scores,
                           std::span<const ComparisonRecord> heldout) {
  if (heldout.empty()) throw Error(ErrorCode::kEmptyInput, "empty held-out set");
  double wrong = 0.0;
  for (const ComparisonRecord& c : heldout) {
    const std::size_t w = c.winner_item();
    const std::size_t l = c.loser_item();
    if (w >= predicted_scores.size() || l >= predicted_scores.size()) {
      throw Error(ErrorCode::kOutOfRange, "held-out item has no predicted score");
    }
    if (predicted_scores[w] < predicted_scores[l]) {
      wrong += 1.0;
    } else if (predicted_scores[w] == predicted_scores[l]) {
      wrong += 0.5;
    }
  }
  return wrong / static_cast<double>(heldout.size());
}

double ModelTestError(std::span<const double> per_respondent_errors) {
  if (per_respondent_errors.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no respondent errors to average");
  }
  return std::accumulate(per_respondent_errors.begin(), per_respondent_errors.end(), 0.0) /
         static_cast<double>(per_respondent_errors.size());
}

BordaTable BordaScores(std::span<const ComparisonRecord> comparisons, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "borda needs n >= 2");
  std::vector<std::uint64_t> wins(n * n, 0);
  for (const ComparisonRecord& c : comparisons) {
    if (c.left >= n || c.right >= n) {
      throw Error(ErrorCode::kOutOfRange, "comparison item out of range");
    }
    ++wins[c.winner_item() * n + c.loser_item()];
  }
  BordaTable table;
  table.n = n;
  table.p.assign(n * n, 0.0);
  table.scores.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::uint64_t w = wins[i * n + j];
      const std::uint64_t total = w + wins[j * n + i];
      const double p = total == 0 ? 0.5 : static_cast<double>(w) / static_cast<double>(total);
      table.p[i * n + j] = p;
      sum += p;
    }
    table.scores[i] = sum / static_cast<double>(n - 1);
  }
  return table;
}

GlobalRanking RankByScore(std::vector<double> scores) {
  GlobalRanking ranking;
  ranking.order.resize(scores.size());
  std::iota(ranking.order.begin(), ranking.order.end(), 0);
  std::stable_sort(ranking.order.begin(), ranking.order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  ranking.score_per_item = std::move(scores);
  return ranking;
}

GlobalRanking MeanRatingRanking(const SparseRatingMatrix& matrix,
                                const SurveyScale& scale) {
  if (matrix.empty()) throw Error(ErrorCode::kEmptyInput, "empty rating matrix");
  const bool normalize =
      scale.kind() == ScaleKind::kR5 || scale.kind() == ScaleKind::kR100;
  const SparseRatingMatrix values = normalize ? ZNormalize(matrix) : matrix;

  std::vector<double> sums(values.cols(), 0.0);
  std::vector<std::size_t> counts(values.cols(), 0);
  double total = 0.0;
  for (const MatrixEntry& e : values.entries()) {
    sums[e.col] += e.value;
    ++counts[e.col];
    total += e.value;
  }
  const double global = total / static_cast<double>(values.nnz());
  for (std::size_t j = 0; j < sums.size(); ++j) {
    sums[j] = counts[j] > 0 ? sums[j] / static_cast<double>(counts[j]) : global;
  }
  return RankByScore(std::move(sums));
}

AggregateTestMatrix BuildAggregateTestMatrix(
    std::span<const ComparisonRecord> heldout, std::size_t n) {
  AggregateTestMatrix out;
  out.n = n;
  out.counts.assign(n * n, 0);
  for (const ComparisonRecord& c : heldout) {
    if (c.left >= n || c.right >= n) {
      throw Error(ErrorCode::kOutOfRange, "held-out item out of range");
    }
    if (c.left == c.right) continue;
    ++out.counts[c.winner_item() * n + c.loser_item()];
  }
  return out;
}

double AggregateTestError(const GlobalRanking& ranking,
                          const AggregateTestMatrix& matrix) {
  const std::size_t n = matrix.n;
  if (ranking.order.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "ranking and test matrix sizes differ");
  }
  std::vector<std::size_t> position(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (ranking.order[r] >= n || position[ranking.order[r]] != n) {
      throw Error(ErrorCode::kInvalidArgument, "ranking is not a permutation");
    }
    position[ranking.order[r]] = r;
  }
  std::uint64_t total = 0;
  std::uint64_t mistakes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::uint64_t c = matrix.C(i, j);
      total += c;
      // i beat j c times; those are mistakes when j is ranked above i.
      if (position[j] < position[i]) mistakes += c;
    }
  }
  if (total == 0) {
    throw Error(ErrorCode::kEmptyInput, "aggregate test matrix has no comparisons");
  }
  return static_cast<double>(mistakes) / static_cast<double>(total);
}

}  // namespace simplesurvey
