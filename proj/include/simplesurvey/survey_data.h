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

// Survey domain types: scales, response and comparison records, the sparse
// respondent x item rating matrix, and CSV ingestion for whole datasets.

#ifndef SIMPLESURVEY_SURVEY_DATA_H_
#define SIMPLESURVEY_SURVEY_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simplesurvey {

enum class ScaleKind { kR2, kR5, kR100, kPC };

class SurveyScale {
 public:
  static SurveyScale Of(ScaleKind kind);
  // Accepts "r2", "r5", "r100", "pc" (case-insensitive).
  static SurveyScale Parse(std::string_view name);

  ScaleKind kind() const { return kind_; }
  bool is_rating() const { return kind_ != ScaleKind::kPC; }
  // PC carries no rating range; both bounds are 0 for it.
  int min_value() const { return min_value_; }
  int max_value() const { return max_value_; }
  bool Contains(int value) const {
    return is_rating() && value >= min_value_ && value <= max_value_;
  }
  std::string_view name() const;

  bool operator==(const SurveyScale&) const = default;

 private:
  SurveyScale(ScaleKind kind, int lo, int hi)
      : kind_(kind), min_value_(lo), max_value_(hi) {}

  ScaleKind kind_;
  int min_value_;
  int max_value_;
};

enum class Winner { kLeft, kRight };

// A single rating query. Indices refer to the owning Dataset's id maps.
struct ResponseRecord {
  std::size_t respondent = 0;
  std::size_t item = 0;
  int value = 0;
  std::int64_t elapsed_ms = 0;

  bool operator==(const ResponseRecord&) const = default;
};

struct ComparisonRecord {
  std::size_t respondent = 0;
  std::size_t left = 0;
  std::size_t right = 0;
  Winner winner = Winner::kLeft;
  std::int64_t elapsed_ms = 0;

  std::size_t winner_item() const { return winner == Winner::kLeft ? left : right; }
  std::size_t loser_item() const { return winner == Winner::kLeft ? right : left; }

  bool operator==(const ComparisonRecord&) const = default;
};

// Models accept repeated pairs; survey files may not repeat an unordered pair
// within a respondent (see CheckUniquePairs).
using ComparisonSet = std::vector<ComparisonRecord>;

// Throws kDuplicatePair when a respondent compares the same unordered pair
// twice, kInvalidArgument when left == right.
void CheckUniquePairs(std::span<const ComparisonRecord> comparisons);

// Number of distinct unordered pairs among n items, n(n-1)/2.
std::uint64_t DistinctPairCount(std::uint64_t n);

struct MatrixEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;

  bool operator==(const MatrixEntry&) const = default;
};

// Observed entries X_obs of an m x n matrix, stored row-major (CSR order) with
// a column index on the side. Immutable once built.
class SparseRatingMatrix {
 public:
  SparseRatingMatrix() = default;
  // Validates ranges and rejects duplicate (row, col) cells.
  SparseRatingMatrix(std::size_t rows, std::size_t cols,
                     std::vector<MatrixEntry> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::span<const MatrixEntry> entries() const { return entries_; }
  std::span<const MatrixEntry> Row(std::size_t i) const;
  // Positions into entries() of the observations in column j, ascending row.
  std::span<const std::size_t> ColumnPositions(std::size_t j) const;

  std::optional<double> Get(std::size_t i, std::size_t j) const;

  // Same sparsity pattern with replaced values (ordered like entries()).
  SparseRatingMatrix WithValues(std::vector<double> values) const;

  bool operator==(const SparseRatingMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ &&
           entries_ == other.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<MatrixEntry> entries_;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> col_offsets_;
  std::vector<std::size_t> col_positions_;
};

struct Dataset {
  std::string context;
  SurveyScale scale = SurveyScale::Of(ScaleKind::kR5);
  // Lexicographically sorted; index i of a record refers to these.
  std::vector<std::string> respondent_ids;
  std::vector<std::string> item_ids;
  // Rating queries in file order (empty for PC datasets).
  std::vector<ResponseRecord> responses;
  SparseRatingMatrix ratings;
  ComparisonSet training_comparisons;
  ComparisonSet heldout_comparisons;

  std::size_t num_respondents() const { return respondent_ids.size(); }
  std::size_t num_items() const { return item_ids.size(); }

  bool operator==(const Dataset&) const = default;
};

struct LoadOptions {
  // PC datasets: the last this-many comparisons of each respondent (file
  // order) form the held-out set; the rest are training queries.
  std::size_t heldout_per_respondent = 20;
  std::string context;
};

// Ratings CSV:      respondent_id,item_id,value,elapsed_ms
// Comparisons CSV:  respondent_id,item_left,item_right,winner,elapsed_ms
// For rating scales ratings_path is required and every comparison is
// held-out. For PC, ratings_path must be empty.
Dataset LoadDataset(const std::filesystem::path& ratings_path,
                    const std::filesystem::path& comparisons_path,
                    SurveyScale scale, const LoadOptions& options = {});

// Writes files that LoadDataset reads back to an equal Dataset (given the same
// heldout_per_respondent for PC).
void WriteRatingsCsv(const Dataset& dataset, const std::filesystem::path& path);
void WriteComparisonsCsv(const Dataset& dataset,
                         const std::filesystem::path& path);

// Builds the m x n matrix from rating records.
SparseRatingMatrix RatingsFromResponses(std::span<const ResponseRecord> responses,
                                        std::size_t m, std::size_t n);

// Per-row standardization over observed entries with the population standard
// deviation. Constant rows map to zeros.
SparseRatingMatrix ZNormalize(const SparseRatingMatrix& matrix);

struct Summary {
  // Rating value -> count. For PC datasets keys are 0 (left won) and 1 (right
  // won).
  std::map<int, std::size_t> histogram;
  // Median over respondents of each block's summed elapsed time, seconds.
  std::vector<double> block_median_seconds;
  std::size_t block_size = 8;
};

// Queries are taken per respondent in file order: rating queries for rating
// scales, all comparisons (training then held-out) for PC. Trailing partial
// blocks are dropped.
Summary Summarize(const Dataset& dataset, std::size_t block_size = 8);

// Probability that a uniformly random pair of distinct items among `total`
// includes at least one of the (total - rated) unrated items.
double CoverageProbability(std::uint64_t rated, std::uint64_t total);

double Median(std::vector<double> values);

}  // namespace simplesurvey

#endif  // SIMPLESURVEY_SURVEY_DATA_H_
