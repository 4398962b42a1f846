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

#include "simplesurvey/export.h"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "simplesurvey/error.h"

namespace simplesurvey {

using Eigen::Index;
using Eigen::MatrixXd;
using nlohmann::json;

std::string FormatDouble(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw Error(ErrorCode::kNumerical, "cannot format double");
  return std::string(buffer, ptr);
}

namespace {

json RowMajor(const MatrixXd& m) {
  json flat = json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  return flat;
}

MatrixXd FromRowMajor(const json& flat, Index rows, Index cols, const char* name) {
  if (!flat.is_array() || flat.size() != static_cast<std::size_t>(rows * cols)) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string("model field ") + name + " has the wrong length");
  }
  MatrixXd m(rows, cols);
  std::size_t p = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = flat[p++].get<double>();
  return m;
}

void ExpectKind(const json& j, const char* kind) {
  if (!j.is_object() || j.value("model_kind", std::string()) != kind) {
    throw Error(ErrorCode::kMalformedRow,
                std::string("expected a model with model_kind '") + kind + "'");
  }
}

template <typename Fn>
auto Guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRow, std::string("bad model JSON: ") + e.what());
  }
}

}  // namespace

json FactorModelToJson(const FactorModel& model) {
  json j;
  j["model_kind"] = "factorization";
  j["k"] = model.k();
  j["gamma"] = model.gamma;
  j["m"] = model.rows();
  j["n"] = model.cols();
  j["U"] = RowMajor(model.U);
  j["V"] = RowMajor(model.V);
  j["row_counts"] = model.row_counts;
  j["col_counts"] = model.col_counts;
  j["row_means"] = model.row_means;
  j["col_means"] = model.col_means;
  j["global_mean"] = model.global_mean;
  j["objective_trace"] = model.objective_trace;
  return j;
}

FactorModel FactorModelFromJson(const json& j) {
  ExpectKind(j, "factorization");
  return Guarded([&] {
    FactorModel model;
    const Index k = j.at("k").get<Index>();
    const Index m = j.at("m").get<Index>();
    const Index n = j.at("n").get<Index>();
    model.gamma = j.at("gamma").get<double>();
    model.U = FromRowMajor(j.at("U"), m, k, "U");
    model.V = FromRowMajor(j.at("V"), n, k, "V");
    model.row_counts = j.at("row_counts").get<std::vector<std::size_t>>();
    model.col_counts = j.at("col_counts").get<std::vector<std::size_t>>();
    model.row_means = j.at("row_means").get<std::vector<double>>();
    model.col_means = j.at("col_means").get<std::vector<double>>();
    model.global_mean = j.at("global_mean").get<double>();
    model.objective_trace = j.value("objective_trace", std::vector<double>{});
    if (model.row_counts.size() != static_cast<std::size_t>(m) ||
        model.row_means.size() != static_cast<std::size_t>(m) ||
        model.col_counts.size() != static_cast<std::size_t>(n) ||
        model.col_means.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::kDimensionMismatch, "fallback statistics have the wrong length");
    }
    return model;
  });
}

json ComparisonModelToJson(const ComparisonModel& model) {
  json j;
  j["model_kind"] = "comparison";
  j["k"] = model.k();
  j["gamma"] = model.gamma;
  j["m"] = model.rows();
  j["n"] = model.cols();
  j["U"] = RowMajor(model.U);
  j["V"] = RowMajor(model.V);
  j["schedule"] = {{"step_size", model.schedule.step_size},
                   {"epochs", model.schedule.epochs},
                   {"batch_size", model.schedule.batch_size}};
  j["loss_trace"] = model.loss_trace;
  return j;
}

ComparisonModel ComparisonModelFromJson(const json& j) {
  ExpectKind(j, "comparison");
  return Guarded([&] {
    ComparisonModel model;
    const Index k = j.at("k").get<Index>();
    model.gamma = j.at("gamma").get<double>();
    model.U = FromRowMajor(j.at("U"), j.at("m").get<Index>(), k, "U");
    model.V = FromRowMajor(j.at("V"), j.at("n").get<Index>(), k, "V");
    if (j.contains("schedule")) {
      const json& s = j.at("schedule");
      model.schedule.step_size = s.at("step_size").get<double>();
      model.schedule.epochs = s.at("epochs").get<int>();
      model.schedule.batch_size = s.at("batch_size").get<std::size_t>();
    }
    model.loss_trace = j.value("loss_trace", std::vector<double>{});
    return model;
  });
}

json SummaryToJson(const Summary& summary, const SurveyScale& scale) {
  json j;
  j["scale"] = std::string(scale.name());
  j["block_size"] = summary.block_size;
  json histogram = json::array();
  for (const auto& [value, count] : summary.histogram) {
    json bin = {{"count", count}};
    if (scale.is_rating()) {
      bin["value"] = value;
    } else {
      bin["value"] = value == 0 ? "left" : "right";
    }
    histogram.push_back(bin);
  }
  j["histogram"] = histogram;
  j["block_median_seconds"] = summary.block_median_seconds;
  return j;
}

void WriteErrorCurveCsv(std::ostream& out, const ErrorCurve& curve) {
  out << "size,mean_error,sd,draws\n";
  for (const ErrorPoint& p : curve.points) {
    out << p.size << ',' << FormatDouble(p.mean_error) << ',' << FormatDouble(p.sd)
        << ',' << p.draws << '\n';
  }
}

void WriteCvReportCsv(std::ostream& out, const CvReport& report) {
  out << "k,gamma,mean_rmse,sd_rmse,best\n";
  for (const CvCell& c : report.grid) {
    const bool best = c.k == report.best.k && c.gamma == report.best.gamma;
    out << c.k << ',' << FormatDouble(c.gamma) << ',' << FormatDouble(c.mean_rmse)
        << ',' << FormatDouble(c.sd_rmse) << ',' << (best ? 1 : 0) << '\n';
  }
}

void WriteRankingCsv(std::ostream& out, const GlobalRanking& ranking,
                     std::span<const std::string> item_ids) {
  if (item_ids.size() != ranking.order.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "ranking and item ids differ in size");
  }
  out << "item_id,score,rank\n";
  for (std::size_t r = 0; r < ranking.order.size(); ++r) {
    const std::size_t item = ranking.order[r];
    out << item_ids[item] << ',' << FormatDouble(ranking.score_per_item[item]) << ','
        << r + 1 << '\n';
  }
}

void WriteAggregateMatrixCsv(std::ostream& out, const AggregateTestMatrix& matrix,
                             std::span<const std::string> item_ids) {
  if (item_ids.size() != matrix.n) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix and item ids differ in size");
  }
  out << "item_id";
  for (const std::string& id : item_ids) out << ',' << id;
  out << '\n';
  for (std::size_t i = 0; i < matrix.n; ++i) {
    out << item_ids[i];
    for (std::size_t j = 0; j < matrix.n; ++j) out << ',' << matrix.C(i, j);
    out << '\n';
  }
}

void WriteEmbeddingCsv(std::ostream& out, const ItemEmbedding& embedding,
                       std::span<const int> quartiles,
                       std::span<const std::string> item_ids) {
  const auto n = static_cast<std::size_t>(embedding.coords.rows());
  if (item_ids.size() != n || quartiles.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "embedding and item ids differ in size");
  }
  out << "item_id,dim1,dim2,quartile\n";
  for (std::size_t j = 0; j < n; ++j) {
    out << item_ids[j] << ',' << FormatDouble(embedding.coords(static_cast<Index>(j), 0))
        << ',' << FormatDouble(embedding.coords(static_cast<Index>(j), 1)) << ','
        << quartiles[j] << '\n';
  }
}

std::vector<int> ScoreQuartiles(std::span<const double> scores) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<int> quartiles(n, 1);
  for (std::size_t rank = 0; rank < n; ++rank) {
    quartiles[order[rank]] = 1 + static_cast<int>(4 * rank / n);
  }
  return quartiles;
}

}  // namespace simplesurvey
