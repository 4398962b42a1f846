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

#include "simplesurvey/survey_data.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <tuple>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "simplesurvey/error.h"

namespace simplesurvey {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kMalformedRow: return "malformed_row";
    case ErrorCode::kDuplicateEntry: return "duplicate_entry";
    case ErrorCode::kOutOfRange: return "out_of_range";
    case ErrorCode::kDuplicatePair: return "duplicate_pair";
    case ErrorCode::kUnknownId: return "unknown_id";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kNumerical: return "numerical";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// SurveyScale

SurveyScale SurveyScale::Of(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::kR2: return SurveyScale(kind, 0, 1);
    case ScaleKind::kR5: return SurveyScale(kind, 1, 5);
    case ScaleKind::kR100: return SurveyScale(kind, 1, 100);
    case ScaleKind::kPC: return SurveyScale(kind, 0, 0);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown scale kind");
}

SurveyScale SurveyScale::Parse(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "r2") return Of(ScaleKind::kR2);
  if (lower == "r5") return Of(ScaleKind::kR5);
  if (lower == "r100") return Of(ScaleKind::kR100);
  if (lower == "pc") return Of(ScaleKind::kPC);
  throw Error(ErrorCode::kInvalidArgument,
              "unknown scale '" + std::string(name) + "' (expected r2|r5|r100|pc)");
}

std::string_view SurveyScale::name() const {
  switch (kind_) {
    case ScaleKind::kR2: return "r2";
    case ScaleKind::kR5: return "r5";
    case ScaleKind::kR100: return "r100";
    case ScaleKind::kPC: return "pc";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Comparison helpers

void CheckUniquePairs(std::span<const ComparisonRecord> comparisons) {
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  for (const ComparisonRecord& c : comparisons) {
    if (c.left == c.right) {
      throw Error(ErrorCode::kInvalidArgument,
                  "comparison of an item with itself");
    }
    auto key = std::make_tuple(c.respondent, std::min(c.left, c.right),
                               std::max(c.left, c.right));
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::kDuplicatePair,
                  "respondent " + std::to_string(c.respondent) +
                      " repeats an unordered item pair");
    }
  }
}

std::uint64_t DistinctPairCount(std::uint64_t n) {
  return n < 2 ? 0 : n * (n - 1) / 2;
}

// ---------------------------------------------------------------------------
// SparseRatingMatrix

SparseRatingMatrix::SparseRatingMatrix(std::size_t rows, std::size_t cols,
                                       std::vector<MatrixEntry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  for (const MatrixEntry& e : entries_) {
    if (e.row >= rows_ || e.col >= cols_) {
      throw Error(ErrorCode::kOutOfRange, "matrix entry index out of range");
    }
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const MatrixEntry& a, const MatrixEntry& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (std::size_t p = 1; p < entries_.size(); ++p) {
    if (entries_[p].row == entries_[p - 1].row &&
        entries_[p].col == entries_[p - 1].col) {
      throw Error(ErrorCode::kDuplicateEntry,
                  "duplicate matrix cell (" + std::to_string(entries_[p].row) +
                      "," + std::to_string(entries_[p].col) + ")");
    }
  }

  row_offsets_.assign(rows_ + 1, 0);
  col_offsets_.assign(cols_ + 1, 0);
  for (const MatrixEntry& e : entries_) {
    ++row_offsets_[e.row + 1];
    ++col_offsets_[e.col + 1];
  }
  for (std::size_t i = 0; i < rows_; ++i) row_offsets_[i + 1] += row_offsets_[i];
  for (std::size_t j = 0; j < cols_; ++j) col_offsets_[j + 1] += col_offsets_[j];

  col_positions_.resize(entries_.size());
  std::vector<std::size_t> cursor(col_offsets_.begin(), col_offsets_.end() - 1);
  for (std::size_t p = 0; p < entries_.size(); ++p) {
    col_positions_[cursor[entries_[p].col]++] = p;
  }
}

std::span<const MatrixEntry> SparseRatingMatrix::Row(std::size_t i) const {
  if (i >= rows_) throw Error(ErrorCode::kOutOfRange, "row index out of range");
  return std::span<const MatrixEntry>(entries_).subspan(
      row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]);
}

std::span<const std::size_t> SparseRatingMatrix::ColumnPositions(
    std::size_t j) const {
  if (j >= cols_) throw Error(ErrorCode::kOutOfRange, "column index out of range");
  return std::span<const std::size_t>(col_positions_)
      .subspan(col_offsets_[j], col_offsets_[j + 1] - col_offsets_[j]);
}

std::optional<double> SparseRatingMatrix::Get(std::size_t i,
                                              std::size_t j) const {
  auto row = Row(i);
  auto it = std::lower_bound(
      row.begin(), row.end(), j,
      [](const MatrixEntry& e, std::size_t col) { return e.col < col; });
  if (it != row.end() && it->col == j) return it->value;
  return std::nullopt;
}

SparseRatingMatrix SparseRatingMatrix::WithValues(
    std::vector<double> values) const {
  if (values.size() != entries_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "value count does not match nnz");
  }
  SparseRatingMatrix out = *this;
  for (std::size_t p = 0; p < values.size(); ++p) out.entries_[p].value = values[p];
  return out;
}

SparseRatingMatrix RatingsFromResponses(std::span<const ResponseRecord> responses,
                                        std::size_t m, std::size_t n) {
  std::vector<MatrixEntry> entries;
  entries.reserve(responses.size());
  for (const ResponseRecord& r : responses) {
    entries.push_back({r.respondent, r.item, static_cast<double>(r.value)});
  }
  return SparseRatingMatrix(m, n, std::move(entries));
}

SparseRatingMatrix ZNormalize(const SparseRatingMatrix& matrix) {
  if (matrix.empty()) throw Error(ErrorCode::kEmptyInput, "empty rating matrix");
  std::vector<double> values;
  values.reserve(matrix.nnz());
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    auto row = matrix.Row(i);
    if (row.empty()) continue;
    double mean = 0.0;
    for (const MatrixEntry& e : row) mean += e.value;
    mean /= static_cast<double>(row.size());
    double var = 0.0;
    for (const MatrixEntry& e : row) var += (e.value - mean) * (e.value - mean);
    const double sd = std::sqrt(var / static_cast<double>(row.size()));
    for (const MatrixEntry& e : row) {
      values.push_back(sd > 0.0 ? (e.value - mean) / sd : 0.0);
    }
  }
  return matrix.WithValues(std::move(values));
}

// ---------------------------------------------------------------------------
// CSV ingestion

namespace {

std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front())))
      field.remove_prefix(1);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back())))
      field.remove_suffix(1);
    fields.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

struct CsvRow {
  std::size_t line_number;
  std::vector<std::string> fields;
};

std::string Where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

std::vector<CsvRow> ReadCsv(const std::filesystem::path& path,
                            std::string_view expected_header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const auto expected = SplitCsv(expected_header);

  std::vector<CsvRow> rows;
  std::string line;
  std::size_t line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_number == 1 && line.size() >= 3 &&
        line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (line.empty() || line.front() == '#') continue;
    auto fields = SplitCsv(line);
    if (!header_seen) {
      if (fields.size() != expected.size() ||
          !std::equal(fields.begin(), fields.end(), expected.begin())) {
        throw Error(ErrorCode::kMalformedRow,
                    Where(path, line_number) + "expected header '" +
                        std::string(expected_header) + "'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != expected.size()) {
      throw Error(ErrorCode::kMalformedRow,
                  Where(path, line_number) + "expected " +
                      std::to_string(expected.size()) + " columns, got " +
                      std::to_string(fields.size()));
    }
    CsvRow row{line_number, {}};
    for (auto f : fields) {
      if (f.empty()) {
        throw Error(ErrorCode::kMalformedRow,
                    Where(path, line_number) + "empty field");
      }
      row.fields.emplace_back(f);
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen) {
    throw Error(ErrorCode::kMalformedRow, path.string() + ": missing header");
  }
  return rows;
}

std::int64_t ParseInt(const std::string& field, const std::filesystem::path& path,
                      std::size_t line, std::string_view column) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kMalformedRow,
                Where(path, line) + std::string(column) + " '" + field +
                    "' is not an integer");
  }
  return value;
}

std::int64_t ParseElapsed(const std::string& field,
                          const std::filesystem::path& path, std::size_t line) {
  std::int64_t ms = ParseInt(field, path, line, "elapsed_ms");
  if (ms < 0) {
    throw Error(ErrorCode::kOutOfRange,
                Where(path, line) + "elapsed_ms must be nonnegative");
  }
  return ms;
}

Winner ParseWinner(std::string field, const std::filesystem::path& path,
                   std::size_t line) {
  std::transform(field.begin(), field.end(), field.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (field == "left") return Winner::kLeft;
  if (field == "right") return Winner::kRight;
  throw Error(ErrorCode::kMalformedRow,
              Where(path, line) + "winner must be 'left' or 'right'");
}

std::unordered_map<std::string, std::size_t> IndexOf(
    const std::vector<std::string>& ids) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
  return index;
}

std::vector<std::string> SortedUnique(std::set<std::string> ids) {
  return {ids.begin(), ids.end()};
}

constexpr std::string_view kRatingsHeader = "respondent_id,item_id,value,elapsed_ms";
constexpr std::string_view kComparisonsHeader =
    "respondent_id,item_left,item_right,winner,elapsed_ms";

}  // namespace

Dataset LoadDataset(const std::filesystem::path& ratings_path,
                    const std::filesystem::path& comparisons_path,
                    SurveyScale scale, const LoadOptions& options) {
  Dataset ds;
  ds.context = options.context;
  ds.scale = scale;

  const bool has_ratings = !ratings_path.empty();
  if (scale.is_rating() && !has_ratings) {
    throw Error(ErrorCode::kInvalidArgument,
                "rating scale " + std::string(scale.name()) +
                    " requires a ratings file");
  }
  if (!scale.is_rating() && has_ratings) {
    throw Error(ErrorCode::kInvalidArgument,
                "pc datasets take comparisons only");
  }

  std::vector<CsvRow> rating_rows;
  if (has_ratings) rating_rows = ReadCsv(ratings_path, kRatingsHeader);
  std::vector<CsvRow> comparison_rows;
  if (!comparisons_path.empty()) {
    comparison_rows = ReadCsv(comparisons_path, kComparisonsHeader);
  }
  if (rating_rows.empty() && comparison_rows.empty()) {
    throw Error(ErrorCode::kEmptyInput, "dataset has no responses");
  }

  if (has_ratings) {
    std::set<std::string> respondents, items;
    for (const CsvRow& r : rating_rows) {
      respondents.insert(r.fields[0]);
      items.insert(r.fields[1]);
    }
    ds.respondent_ids = SortedUnique(std::move(respondents));
    ds.item_ids = SortedUnique(std::move(items));
  } else {
    std::set<std::string> respondents, items;
    for (const CsvRow& r : comparison_rows) {
      respondents.insert(r.fields[0]);
      items.insert(r.fields[1]);
      items.insert(r.fields[2]);
    }
    ds.respondent_ids = SortedUnique(std::move(respondents));
    ds.item_ids = SortedUnique(std::move(items));
  }
  const auto respondent_index = IndexOf(ds.respondent_ids);
  const auto item_index = IndexOf(ds.item_ids);

  auto resolve = [&](const std::unordered_map<std::string, std::size_t>& index,
                     const std::string& id, const std::filesystem::path& path,
                     std::size_t line, std::string_view what) {
    auto it = index.find(id);
    if (it == index.end()) {
      throw Error(ErrorCode::kUnknownId,
                  Where(path, line) + "unknown " + std::string(what) + " '" +
                      id + "' (not present in ratings)");
    }
    return it->second;
  };

  for (const CsvRow& r : rating_rows) {
    ResponseRecord rec;
    rec.respondent = respondent_index.at(r.fields[0]);
    rec.item = item_index.at(r.fields[1]);
    const std::int64_t value = ParseInt(r.fields[2], ratings_path, r.line_number, "value");
    if (value < scale.min_value() || value > scale.max_value()) {
      throw Error(ErrorCode::kOutOfRange,
                  Where(ratings_path, r.line_number) + "value " +
                      std::to_string(value) + " outside " +
                      std::string(scale.name()) + " range [" +
                      std::to_string(scale.min_value()) + "," +
                      std::to_string(scale.max_value()) + "]");
    }
    rec.value = static_cast<int>(value);
    rec.elapsed_ms = ParseElapsed(r.fields[3], ratings_path, r.line_number);
    ds.responses.push_back(rec);
  }
  if (has_ratings) {
    try {
      ds.ratings = RatingsFromResponses(ds.responses, ds.num_respondents(),
                                        ds.num_items());
    } catch (const Error& e) {
      throw Error(e.code(), ratings_path.string() + ": " + e.what());
    }
  }

  ComparisonSet all;
  all.reserve(comparison_rows.size());
  for (const CsvRow& r : comparison_rows) {
    ComparisonRecord c;
    c.respondent = resolve(respondent_index, r.fields[0], comparisons_path,
                           r.line_number, "respondent");
    c.left = resolve(item_index, r.fields[1], comparisons_path, r.line_number, "item");
    c.right = resolve(item_index, r.fields[2], comparisons_path, r.line_number, "item");
    if (c.left == c.right) {
      throw Error(ErrorCode::kMalformedRow,
                  Where(comparisons_path, r.line_number) +
                      "item_left equals item_right");
    }
    c.winner = ParseWinner(r.fields[3], comparisons_path, r.line_number);
    c.elapsed_ms = ParseElapsed(r.fields[4], comparisons_path, r.line_number);
    all.push_back(c);
  }
  CheckUniquePairs(all);

  if (scale.is_rating()) {
    ds.heldout_comparisons = std::move(all);
  } else {
    std::vector<std::size_t> per_respondent(ds.num_respondents(), 0);
    for (const ComparisonRecord& c : all) ++per_respondent[c.respondent];
    std::vector<std::size_t> seen(ds.num_respondents(), 0);
    for (const ComparisonRecord& c : all) {
      const std::size_t total = per_respondent[c.respondent];
      const std::size_t heldout = std::min(options.heldout_per_respondent, total);
      if (seen[c.respondent]++ < total - heldout) {
        ds.training_comparisons.push_back(c);
      } else {
        ds.heldout_comparisons.push_back(c);
      }
    }
  }
  return ds;
}

void WriteRatingsCsv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << kRatingsHeader << '\n';
  for (const ResponseRecord& r : dataset.responses) {
    out << dataset.respondent_ids[r.respondent] << ','
        << dataset.item_ids[r.item] << ',' << r.value << ',' << r.elapsed_ms
        << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

void WriteComparisonsCsv(const Dataset& dataset,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << kComparisonsHeader << '\n';
  auto emit = [&](const ComparisonSet& set) {
    for (const ComparisonRecord& c : set) {
      out << dataset.respondent_ids[c.respondent] << ','
          << dataset.item_ids[c.left] << ',' << dataset.item_ids[c.right] << ','
          << (c.winner == Winner::kLeft ? "left" : "right") << ','
          << c.elapsed_ms << '\n';
    }
  };
  emit(dataset.training_comparisons);
  emit(dataset.heldout_comparisons);
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Descriptive summaries

double Median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

Summary Summarize(const Dataset& dataset, std::size_t block_size) {
  if (block_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "block_size must be positive");
  }
  if (dataset.responses.empty() && dataset.training_comparisons.empty() &&
      dataset.heldout_comparisons.empty()) {
    throw Error(ErrorCode::kEmptyInput, "empty dataset");
  }
  Summary summary;
  summary.block_size = block_size;

  std::vector<std::vector<std::int64_t>> times(dataset.num_respondents());
  if (dataset.scale.is_rating()) {
    for (const ResponseRecord& r : dataset.responses) {
      ++summary.histogram[r.value];
      times[r.respondent].push_back(r.elapsed_ms);
    }
  } else {
    for (const auto* set : {&dataset.training_comparisons,
                            &dataset.heldout_comparisons}) {
      for (const ComparisonRecord& c : *set) {
        ++summary.histogram[c.winner == Winner::kLeft ? 0 : 1];
        times[c.respondent].push_back(c.elapsed_ms);
      }
    }
  }

  std::size_t max_blocks = 0;
  for (const auto& t : times) max_blocks = std::max(max_blocks, t.size() / block_size);
  for (std::size_t b = 0; b < max_blocks; ++b) {
    std::vector<double> totals;
    for (const auto& t : times) {
      if ((b + 1) * block_size > t.size()) continue;
      std::int64_t sum = 0;
      for (std::size_t q = b * block_size; q < (b + 1) * block_size; ++q) sum += t[q];
      totals.push_back(static_cast<double>(sum) / 1000.0);
    }
    summary.block_median_seconds.push_back(Median(std::move(totals)));
  }
  return summary;
}

double CoverageProbability(std::uint64_t rated, std::uint64_t total) {
  if (total < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two items");
  }
  if (rated > total) {
    throw Error(ErrorCode::kInvalidArgument, "rated count exceeds item count");
  }
  // 1 - P(both rated) for a uniformly random pair of distinct items.
  const double r = static_cast<double>(rated);
  const double n = static_cast<double>(total);
  const double both = rated == 0 ? 0.0 : r * (r - 1.0) / (n * (n - 1.0));
  return 1.0 - both;
}

}  // namespace simplesurvey
