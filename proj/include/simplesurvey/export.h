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

// JSON and CSV encodings of models, reports and curves.

#ifndef SIMPLESURVEY_EXPORT_H_
#define SIMPLESURVEY_EXPORT_H_

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "simplesurvey/comparison_model.h"
#include "simplesurvey/evaluation.h"
#include "simplesurvey/experiment.h"
#include "simplesurvey/factorization.h"
#include "simplesurvey/survey_data.h"

namespace simplesurvey {

// Shortest decimal that reads back to the same double.
std::string FormatDouble(double value);

// {"model_kind": "factorization", "k", "gamma", "m", "n", "U", "V" (row-major),
//  "row_counts", "col_counts", "row_means", "col_means", "global_mean",
//  "objective_trace"}
nlohmann::json FactorModelToJson(const FactorModel& model);
FactorModel FactorModelFromJson(const nlohmann::json& j);

// Same shape tagged "comparison", with "loss_trace" and "schedule".
nlohmann::json ComparisonModelToJson(const ComparisonModel& model);
ComparisonModel ComparisonModelFromJson(const nlohmann::json& j);

// {"scale", "block_size", "histogram": [{"value", "count"}...],
//  "block_median_seconds": [...]}
nlohmann::json SummaryToJson(const Summary& summary, const SurveyScale& scale);

// size,mean_error,sd,draws
void WriteErrorCurveCsv(std::ostream& out, const ErrorCurve& curve);
// k,gamma,mean_rmse,sd_rmse,best
void WriteCvReportCsv(std::ostream& out, const CvReport& report);
// item_id,score,rank  (rank 1 = best), in rank order
void WriteRankingCsv(std::ostream& out, const GlobalRanking& ranking,
                     std::span<const std::string> item_ids);
// Header row "item_id,<ids...>", then one row per winning item.
void WriteAggregateMatrixCsv(std::ostream& out, const AggregateTestMatrix& matrix,
                             std::span<const std::string> item_ids);
// item_id,dim1,dim2,quartile
void WriteEmbeddingCsv(std::ostream& out, const ItemEmbedding& embedding,
                       std::span<const int> quartiles,
                       std::span<const std::string> item_ids);

// Quartile label 1..4 (4 = highest scores) from each item's rank.
std::vector<int> ScoreQuartiles(std::span<const double> scores);

}  // namespace simplesurvey

#endif  // SIMPLESURVEY_EXPORT_H_
