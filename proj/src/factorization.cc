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

#include "simplesurvey/factorization.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include <Eigen/SVD>

#include "simplesurvey/als_kernels.h"
#include "simplesurvey/error.h"
#include "simplesurvey/rng.h"

namespace simplesurvey {

using Eigen::Index;
using Eigen::MatrixXd;

void FitConfig::Validate() const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "rank k must be >= 1");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must be finite and >= 0");
  }
  if (max_sweeps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_sweeps must be >= 1");
  }
  if (!(rel_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rel_tol must be > 0");
  }
  if (init_scale && !(*init_scale > 0.0 && std::isfinite(*init_scale))) {
    throw Error(ErrorCode::kInvalidArgument, "init_scale must be > 0");
  }
}

double Objective(const MatrixXd& U, const MatrixXd& V, double gamma,
                 const SparseRatingMatrix& matrix) {
  if (static_cast<std::size_t>(U.rows()) != matrix.rows() ||
      static_cast<std::size_t>(V.rows()) != matrix.cols() || U.cols() != V.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "factor shapes do not match the rating matrix");
  }
  return kernels::SquaredResidualSerial(matrix, U, V) +
         gamma * (U.squaredNorm() + V.squaredNorm());
}

double Objective(const FactorModel& model, const SparseRatingMatrix& matrix) {
  return Objective(model.U, model.V, model.gamma, matrix);
}

namespace {

void RecordFallbacks(const SparseRatingMatrix& matrix, FactorModel* model) {
  model->row_counts.assign(matrix.rows(), 0);
  model->col_counts.assign(matrix.cols(), 0);
  model->row_means.assign(matrix.rows(), 0.0);
  model->col_means.assign(matrix.cols(), 0.0);
  double total = 0.0;
  for (const MatrixEntry& e : matrix.entries()) {
    ++model->row_counts[e.row];
    ++model->col_counts[e.col];
    model->row_means[e.row] += e.value;
    model->col_means[e.col] += e.value;
    total += e.value;
  }
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    if (model->row_counts[i] > 0) model->row_means[i] /= static_cast<double>(model->row_counts[i]);
  }
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    if (model->col_counts[j] > 0) model->col_means[j] /= static_cast<double>(model->col_counts[j]);
  }
  model->global_mean = matrix.empty() ? 0.0 : total / static_cast<double>(matrix.nnz());
}

// Adds the rank-k truncated SVD of the zero-filled, rescaled matrix, with
// sqrt(sigma) on each side. Ranks beyond min(m, n) are left as jitter.
void AddSpectralStart(const SparseRatingMatrix& matrix, MatrixXd* U, MatrixXd* V) {
  const Index m = U->rows();
  const Index n = V->rows();
  MatrixXd dense = MatrixXd::Zero(m, n);
  for (const MatrixEntry& e : matrix.entries()) {
    dense(static_cast<Index>(e.row), static_cast<Index>(e.col)) = e.value;
  }
  dense *= static_cast<double>(m) * static_cast<double>(n) /
           static_cast<double>(matrix.nnz());
  Eigen::BDCSVD<MatrixXd> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index r = std::min<Index>(U->cols(), svd.singularValues().size());
  for (Index d = 0; d < r; ++d) {
    const double root = std::sqrt(svd.singularValues()(d));
    U->col(d) += root * svd.matrixU().col(d);
    V->col(d) += root * svd.matrixV().col(d);
  }
}

}  // namespace

FactorModel Fit(const SparseRatingMatrix& matrix, const FitConfig& config) {
  config.Validate();
  if (matrix.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot fit an empty rating matrix");
  }
  const Index m = static_cast<Index>(matrix.rows());
  const Index n = static_cast<Index>(matrix.cols());
  const Index k = config.k;

  double scale = 0.0;
  if (config.init_scale) {
    scale = *config.init_scale;
  } else {
    double mean_abs = 0.0;
    for (const MatrixEntry& e : matrix.entries()) mean_abs += std::abs(e.value);
    mean_abs /= static_cast<double>(matrix.nnz());
    scale = std::sqrt(mean_abs / static_cast<double>(k));
  }

  FactorModel model;
  model.gamma = config.gamma;
  model.U.resize(m, k);
  model.V.resize(n, k);
  Rng rng = MakeRng(config.seed, {0x1417});
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double jitter = config.init == Init::kSpectral ? 1e-3 * scale : scale;
  for (Index i = 0; i < m; ++i)
    for (Index d = 0; d < k; ++d) model.U(i, d) = jitter * gauss(rng);
  for (Index j = 0; j < n; ++j)
    for (Index d = 0; d < k; ++d) model.V(j, d) = jitter * gauss(rng);
  if (config.init == Init::kSpectral) AddSpectralStart(matrix, &model.U, &model.V);

  const bool omp = config.backend == Backend::kOpenMP;
  auto objective = [&]() {
    const double fit_term = omp ? kernels::SquaredResidualOmp(matrix, model.U, model.V)
                                : kernels::SquaredResidualSerial(matrix, model.U, model.V);
    return fit_term + config.gamma * (model.U.squaredNorm() + model.V.squaredNorm());
  };

  double previous = objective();
  model.objective_trace.push_back(previous);
  MatrixXd last_U, last_V;
  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    last_U = model.U;
    last_V = model.V;
    if (omp) {
      kernels::SolveRowFactorsOmp(matrix, model.V, config.gamma, &model.U);
      kernels::SolveColFactorsOmp(matrix, model.U, config.gamma, &model.V);
    } else {
      kernels::SolveRowFactorsSerial(matrix, model.V, config.gamma, &model.U);
      kernels::SolveColFactorsSerial(matrix, model.U, config.gamma, &model.V);
    }
    const double current = objective();
    if (!std::isfinite(current)) {
      throw Error(ErrorCode::kNumerical,
                  "non-finite objective after sweep " + std::to_string(sweep + 1));
    }
    if (current > previous) {
      // Exact sweeps cannot raise the objective, so this is rounding at an
      // interpolating solution; keep the better factors and stop.
      model.U = std::move(last_U);
      model.V = std::move(last_V);
      break;
    }
    model.objective_trace.push_back(current);
    if (previous - current < config.rel_tol * previous) break;
    previous = current;
  }

  RecordFallbacks(matrix, &model);
  return model;
}

double Predict(const FactorModel& model, std::size_t i, std::size_t j) {
  if (i >= model.rows() || j >= model.cols()) {
    throw Error(ErrorCode::kOutOfRange, "prediction index out of range");
  }
  const bool row_seen = i < model.row_counts.size() && model.row_counts[i] > 0;
  const bool col_seen = j < model.col_counts.size() && model.col_counts[j] > 0;
  if (row_seen && col_seen) {
    return model.U.row(static_cast<Index>(i)).dot(model.V.row(static_cast<Index>(j)));
  }
  if (row_seen) return model.row_means[i];
  if (col_seen) return model.col_means[j];
  return model.global_mean;
}

std::vector<double> PredictRow(const FactorModel& model, std::size_t i) {
  std::vector<double> out(model.cols());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = Predict(model, i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Model selection

CvReport CrossValidate(const SparseRatingMatrix& matrix, const CvConfig& config) {
  if (config.k_grid.empty() || config.gamma_grid.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cross-validation grid is empty");
  }
  if (!(config.holdout_fraction > 0.0 && config.holdout_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "holdout_fraction must be in (0,1)");
  }
  if (config.repeats < 1) {
    throw Error(ErrorCode::kInvalidArgument, "repeats must be >= 1");
  }
  if (matrix.nnz() < 10) {
    throw Error(ErrorCode::kInvalidArgument,
                "cross-validation needs at least 10 observed entries");
  }

  std::vector<std::pair<int, double>> cells;
  {
    std::vector<int> ks = config.k_grid;
    std::vector<double> gammas = config.gamma_grid;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    std::sort(gammas.begin(), gammas.end());
    gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
    for (int k : ks)
      for (double g : gammas) cells.emplace_back(k, g);
  }
  for (const auto& [k, g] : cells) {
    FitConfig probe = config.fit;
    probe.k = k;
    probe.gamma = g;
    probe.Validate();
  }

  const std::size_t nnz = matrix.nnz();
  const auto holdout = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(config.holdout_fraction * static_cast<double>(nnz))),
      1, nnz - 1);

  // One split per repeat, shared by every cell.
  struct Split {
    SparseRatingMatrix train;
    std::vector<MatrixEntry> validation;
  };
  std::vector<Split> splits;
  splits.reserve(static_cast<std::size_t>(config.repeats));
  const auto entries = matrix.entries();
  for (int r = 0; r < config.repeats; ++r) {
    std::vector<std::size_t> order(nnz);
    std::iota(order.begin(), order.end(), 0);
    Rng rng = MakeRng(config.seed, {0xc5, static_cast<std::uint64_t>(r)});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<MatrixEntry> train;
    std::vector<MatrixEntry> validation;
    for (std::size_t p = 0; p < nnz; ++p) {
      (p < holdout ? validation : train).push_back(entries[order[p]]);
    }
    splits.push_back({SparseRatingMatrix(matrix.rows(), matrix.cols(), std::move(train)),
                      std::move(validation)});
  }

  const std::size_t tasks = cells.size() * splits.size();
  std::vector<double> rmse(tasks, 0.0);
  auto run_task = [&](std::size_t t) {
    const auto& [k, gamma] = cells[t / splits.size()];
    const std::size_t r = t % splits.size();
    FitConfig fc = config.fit;
    fc.k = k;
    fc.gamma = gamma;
    fc.seed = DeriveSeed(config.seed, {0xf1, r});
    fc.backend = Backend::kSerial;
    const FactorModel model = Fit(splits[r].train, fc);
    double sse = 0.0;
    for (const MatrixEntry& e : splits[r].validation) {
      const double d = e.value - Predict(model, e.row, e.col);
      sse += d * d;
    }
    rmse[t] = std::sqrt(sse / static_cast<double>(splits[r].validation.size()));
  };
  if (config.fit.backend == Backend::kOpenMP) {
    const auto count = static_cast<std::ptrdiff_t>(tasks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < count; ++t) run_task(static_cast<std::size_t>(t));
  } else {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  }

  CvReport report;
  std::ostringstream scheme;
  scheme << "holdout fraction=" << config.holdout_fraction
         << " repeats=" << config.repeats;
  report.scheme = scheme.str();
  std::size_t best = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < splits.size(); ++r) mean += rmse[c * splits.size() + r];
    mean /= static_cast<double>(splits.size());
    double var = 0.0;
    for (std::size_t r = 0; r < splits.size(); ++r) {
      const double d = rmse[c * splits.size() + r] - mean;
      var += d * d;
    }
    const double sd = splits.size() > 1 ? std::sqrt(var / static_cast<double>(splits.size() - 1)) : 0.0;
    report.grid.push_back({cells[c].first, cells[c].second, mean, sd});
    // Cells are ordered by (k, gamma), so strict improvement keeps the
    // tie-break on the smaller k, then the smaller gamma.
    if (mean < report.grid[best].mean_rmse) best = c;
  }
  report.best = config.fit;
  report.best.k = report.grid[best].k;
  report.best.gamma = report.grid[best].gamma;
  return report;
}

// ---------------------------------------------------------------------------
// Embedding

ItemEmbedding EmbedFactors(const MatrixXd& U, const MatrixXd& V) {
  if (U.cols() == 0 || U.cols() != V.cols() || U.rows() == 0 || V.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding needs a fitted model");
  }
  const Index k = U.cols();
  const MatrixXd completed = U * V.transpose();
  Eigen::BDCSVD<MatrixXd> svd(completed, Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const MatrixXd& right = svd.matrixV();

  ItemEmbedding out;
  out.coords = MatrixXd::Zero(V.rows(), 2);
  const Index dims = std::min<Index>({k, 2, sigma.size()});
  for (Index d = 0; d < dims; ++d) {
    Eigen::VectorXd axis = right.col(d) * sigma(d);
    Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0.0) axis = -axis;
    out.coords.col(d) = axis;
  }

  const double total = sigma.squaredNorm();
  out.variance_fractions.assign(static_cast<std::size_t>(k), 0.0);
  if (total > 0.0) {
    for (Index d = 0; d < std::min<Index>(k, sigma.size()); ++d) {
      out.variance_fractions[static_cast<std::size_t>(d)] = sigma(d) * sigma(d) / total;
    }
  }
  return out;
}

ItemEmbedding LatentEmbedding(const FactorModel& model,
                              const SparseRatingMatrix& matrix) {
  if (!model.fitted()) {
    throw Error(ErrorCode::kInvalidArgument, "embedding needs a fitted model");
  }
  if (model.rows() != matrix.rows() || model.cols() != matrix.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model shape does not match the rating matrix");
  }
  return EmbedFactors(model.U, model.V);
}

}  // namespace simplesurvey
