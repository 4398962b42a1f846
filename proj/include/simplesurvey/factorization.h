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

// Regularized low-rank completion of a sparse rating matrix X:
//
//   min_{U,V}  sum_{(i,j) observed} (x_ij - u_i . v_j)^2
//              + gamma * (||U||_F^2 + ||V||_F^2)
//
// gamma = 0 with small k is the pure low-rank regime; gamma > 0 with
// k = min(m, n) is the pure low-norm regime. Both are reachable through
// FitConfig.

#ifndef SIMPLESURVEY_FACTORIZATION_H_
#define SIMPLESURVEY_FACTORIZATION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simplesurvey/survey_data.h"

namespace simplesurvey {

// Serial is the reference path kept for testing; OpenMP splits the
// independent per-row solves across threads and must agree bit for bit.
enum class Backend { kSerial, kOpenMP };

// kGaussian draws every factor entry from N(0, init_scale^2). kSpectral starts
// from the top-k SVD of the zero-filled matrix (rescaled by mn/|observed|),
// split evenly between U and V, plus Gaussian jitter of 1e-3 * init_scale.
// With gamma = 0 a Gaussian start can descend into a valley where one factor
// grows without bound; the spectral start avoids that on small problems.
enum class Init { kSpectral, kGaussian };

struct FitConfig {
  int k = 3;
  double gamma = 1.0;
  int max_sweeps = 500;
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;
  // Standard deviation of the initial factor entries. Unset means
  // sqrt(mean|x| / k) over the observed entries.
  std::optional<double> init_scale;
  Init init = Init::kSpectral;
  Backend backend = Backend::kOpenMP;

  // Throws kInvalidArgument when out of range.
  void Validate() const;
};

struct FactorModel {
  Eigen::MatrixXd U;  // m x k, row i = respondent i
  Eigen::MatrixXd V;  // n x k, row j = item j
  double gamma = 0.0;

  // Cold-start fallbacks, from the training matrix.
  std::vector<std::size_t> row_counts;
  std::vector<std::size_t> col_counts;
  std::vector<double> row_means;
  std::vector<double> col_means;
  double global_mean = 0.0;

  // Objective at initialization followed by one value per ALS sweep.
  std::vector<double> objective_trace;

  int k() const { return static_cast<int>(U.cols()); }
  std::size_t rows() const { return static_cast<std::size_t>(U.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(V.rows()); }
  bool fitted() const { return U.cols() > 0 && U.cols() == V.cols(); }
};

// Value of the objective above for the given factors.
double Objective(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V,
                 double gamma, const SparseRatingMatrix& matrix);
double Objective(const FactorModel& model, const SparseRatingMatrix& matrix);

// Alternating ridge sweeps from a seeded start: every row of U is
// solved exactly against fixed V over that row's observations, then every row
// of V against fixed U. Stops when the relative objective decrease falls below
// rel_tol or after max_sweeps. A sweep that raises the objective, which only
// rounding can cause, is discarded and ends the fit.
FactorModel Fit(const SparseRatingMatrix& matrix, const FitConfig& config);

// u_i . v_j when respondent i and item j both had training observations;
// otherwise the row mean, then the column mean, then the global mean.
double Predict(const FactorModel& model, std::size_t i, std::size_t j);

// Predictions for every item for respondent i.
std::vector<double> PredictRow(const FactorModel& model, std::size_t i);

struct CvConfig {
  std::vector<int> k_grid{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> gamma_grid{0.0, 0.1, 1.0, 10.0, 100.0};
  double holdout_fraction = 0.2;
  int repeats = 10;
  std::uint64_t seed = 0;
  // Solver settings for every grid cell; k, gamma and seed are overwritten.
  FitConfig fit;
};

struct CvCell {
  int k = 0;
  double gamma = 0.0;
  double mean_rmse = 0.0;
  double sd_rmse = 0.0;
};

struct CvReport {
  std::vector<CvCell> grid;  // ordered by k, then gamma
  FitConfig best;
  std::string scheme;        // e.g. "holdout fraction=0.2 repeats=10"
};

// Repeated random holdout over observed entries. Each repeat draws one split
// shared by all grid cells; a cell's score is the mean held-out RMSE. Ties go
// to the smaller k, then the smaller gamma.
CvReport CrossValidate(const SparseRatingMatrix& matrix, const CvConfig& config);

struct ItemEmbedding {
  Eigen::MatrixXd coords;                // n x 2
  std::vector<double> variance_fractions;  // k values, descending
};

// SVD of the completed matrix U V^T. Item coordinates are the right singular
// vectors scaled by their singular values; each axis is signed so its largest
// magnitude coordinate is positive.
ItemEmbedding LatentEmbedding(const FactorModel& model,
                              const SparseRatingMatrix& matrix);
ItemEmbedding EmbedFactors(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V);

}  // namespace simplesurvey

#endif  // SIMPLESURVEY_FACTORIZATION_H_
