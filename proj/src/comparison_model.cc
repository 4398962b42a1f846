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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "simplesurvey/error.h"
#include "simplesurvey/rng.h"

namespace simplesurvey {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;

namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Label(const ComparisonRecord& c) {
  return c.winner == Winner::kLeft ? 1.0 : -1.0;
}

double Margin(const MatrixXd& U, const MatrixXd& V, const ComparisonRecord& c) {
  return U.row(static_cast<Index>(c.respondent))
      .dot(V.row(static_cast<Index>(c.left)) - V.row(static_cast<Index>(c.right)));
}

}  // namespace

double ComparisonLoss(const MatrixXd& U, const MatrixXd& V, double gamma,
                      std::span<const ComparisonRecord> comparisons) {
  double loss = 0.0;
  for (const ComparisonRecord& c : comparisons) {
    loss += Softplus(-Label(c) * Margin(U, V, c));
  }
  return loss + gamma * (U.squaredNorm() + V.squaredNorm());
}

ComparisonModel FitComparisons(std::span<const ComparisonRecord> comparisons,
                               std::size_t m, std::size_t n,
                               const FitConfig& config,
                               const SgdSchedule& schedule) {
  config.Validate();
  if (comparisons.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no comparisons to fit");
  }
  if (schedule.epochs < 1 || schedule.batch_size < 1 || !(schedule.step_size > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid learning schedule");
  }
  for (const ComparisonRecord& c : comparisons) {
    if (c.respondent >= m || c.left >= n || c.right >= n) {
      throw Error(ErrorCode::kOutOfRange, "comparison index out of range");
    }
    if (c.left == c.right) {
      throw Error(ErrorCode::kInvalidArgument, "comparison of an item with itself");
    }
  }

  const Index k = config.k;
  const double init = config.init_scale.value_or(0.1);
  ComparisonModel model;
  model.gamma = config.gamma;
  model.schedule = schedule;
  model.U.resize(static_cast<Index>(m), k);
  model.V.resize(static_cast<Index>(n), k);
  Rng rng = MakeRng(config.seed, {0xbc});
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Index i = 0; i < model.U.rows(); ++i)
    for (Index d = 0; d < k; ++d) model.U(i, d) = init * gauss(rng);
  for (Index j = 0; j < model.V.rows(); ++j)
    for (Index d = 0; d < k; ++d) model.V(j, d) = init * gauss(rng);

  const double count = static_cast<double>(comparisons.size());
  std::vector<std::size_t> order(comparisons.size());
  std::iota(order.begin(), order.end(), 0);
  MatrixXd grad_u(model.U.rows(), k);
  MatrixXd grad_v(model.V.rows(), k);

  double previous = ComparisonLoss(model.U, model.V, config.gamma, comparisons);
  double damping = 1.0;
  for (int epoch = 1; epoch <= schedule.epochs; ++epoch) {
    const double step = damping * schedule.step_size / std::sqrt(static_cast<double>(epoch));
    const MatrixXd saved_u = model.U;
    const MatrixXd saved_v = model.V;
    std::shuffle(order.begin(), order.end(), rng);

    for (std::size_t start = 0; start < order.size(); start += schedule.batch_size) {
      const std::size_t stop = std::min(order.size(), start + schedule.batch_size);
      // The penalty is spread over batches in proportion to their size.
      const double reg = 2.0 * config.gamma * static_cast<double>(stop - start) / count;
      grad_u = reg * model.U;
      grad_v = reg * model.V;
      for (std::size_t p = start; p < stop; ++p) {
        const ComparisonRecord& c = comparisons[order[p]];
        const double y = Label(c);
        const double g = -y * Sigmoid(-y * Margin(model.U, model.V, c));
        const auto i = static_cast<Index>(c.respondent);
        const auto a = static_cast<Index>(c.left);
        const auto b = static_cast<Index>(c.right);
        const RowVectorXd diff = model.V.row(a) - model.V.row(b);
        grad_u.row(i) += g * diff;
        grad_v.row(a) += g * model.U.row(i);
        grad_v.row(b) -= g * model.U.row(i);
      }
      model.U -= step * grad_u;
      model.V -= step * grad_v;
    }

    const double loss = ComparisonLoss(model.U, model.V, config.gamma, comparisons);
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "non-finite training loss at epoch " << epoch << " (step size "
          << step << "); reduce step_size";
      throw Error(ErrorCode::kNumerical, msg.str());
    }
    if (loss > previous) {
      model.U = saved_u;
      model.V = saved_v;
      damping *= 0.5;
      model.loss_trace.push_back(previous);
      continue;
    }
    model.loss_trace.push_back(loss);
    previous = loss;
  }
  return model;
}

ComparisonPrediction PredictComparison(const ComparisonModel& model,
                                       std::size_t i, std::size_t a,
                                       std::size_t b) {
  if (i >= model.rows() || a >= model.cols() || b >= model.cols()) {
    throw Error(ErrorCode::kOutOfRange, "comparison index out of range");
  }
  if (a == b) throw Error(ErrorCode::kInvalidArgument, "items must differ");
  ComparisonPrediction out;
  const auto u = model.U.row(static_cast<Index>(i));
  // Both terms are formed separately so that swapping a and b negates the
  // score exactly.
  const double sa = u.dot(model.V.row(static_cast<Index>(a)));
  const double sb = u.dot(model.V.row(static_cast<Index>(b)));
  out.score = sa - sb;
  out.winner = out.score > 0.0   ? Preference::kLeft
               : out.score < 0.0 ? Preference::kRight
                                 : Preference::kTie;
  return out;
}

std::vector<double> ItemScores(const ComparisonModel& model, std::size_t i) {
  if (i >= model.rows()) throw Error(ErrorCode::kOutOfRange, "respondent out of range");
  std::vector<double> scores(model.cols());
  const auto u = model.U.row(static_cast<Index>(i));
  for (std::size_t j = 0; j < scores.size(); ++j) {
    scores[j] = u.dot(model.V.row(static_cast<Index>(j)));
  }
  return scores;
}

}  // namespace simplesurvey
