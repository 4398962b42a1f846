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

#include "simplesurvey/als_kernels.h"

#include <algorithm>
#include <cstddef>
#include <vector>

namespace simplesurvey::kernels {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Cholesky of the normal equations is used when the smallest pivot ratio of
// the factor stays above this; squaring the conditioning loses too many
// digits past it.
constexpr double kMinPivotRatio = 1e-4;

// Per-thread scratch sized for the longest row or column, so the inner loop
// does not allocate.
struct Workspace {
  Workspace(Eigen::Index max_count, Eigen::Index k)
      : A(max_count, k), b(max_count), gram(k, k), rhs(k), llt(k) {}
  MatrixXd A;
  VectorXd b;
  MatrixXd gram;
  VectorXd rhs;
  Eigen::LLT<MatrixXd, Eigen::Lower> llt;
};

// Writes the minimizer of |A x - b|^2 + gamma |x|^2 over the first `count`
// rows of the workspace into `out`. Without a penalty, well-conditioned
// normal equations are solved by Cholesky; otherwise the minimum-norm least
// squares solution comes from a complete orthogonal decomposition.
template <typename Row>
void SolveRidge(Workspace& ws, Eigen::Index count, double gamma, Row out) {
  const Eigen::Index k = ws.gram.cols();
  if (count == 0) {
    out.setZero();
    return;
  }
  const auto A = ws.A.topRows(count);
  const auto b = ws.b.head(count);
  if (gamma > 0.0 || count >= k) {
    // Lower triangle only; the factorization never reads the upper one.
    ws.gram.triangularView<Eigen::Lower>() = A.transpose().lazyProduct(A);
    ws.gram.diagonal().array() += gamma;
    ws.llt.compute(ws.gram);
    bool usable = gamma > 0.0;
    if (!usable && ws.llt.info() == Eigen::Success) {
      const auto pivots = ws.llt.matrixLLT().diagonal();
      usable = pivots.minCoeff() > kMinPivotRatio * pivots.maxCoeff();
    }
    if (usable) {
      ws.rhs.noalias() = A.transpose().lazyProduct(b);
      ws.llt.solveInPlace(ws.rhs);
      out = ws.rhs.transpose();
      return;
    }
  }
  out = MatrixXd(A).completeOrthogonalDecomposition().solve(VectorXd(b)).transpose();
}

Eigen::Index LongestRow(const SparseRatingMatrix& matrix) {
  std::size_t longest = 0;
  for (std::size_t i = 0; i < matrix.rows(); ++i) longest = std::max(longest, matrix.Row(i).size());
  return static_cast<Eigen::Index>(longest);
}

Eigen::Index LongestCol(const SparseRatingMatrix& matrix) {
  std::size_t longest = 0;
  for (std::size_t j = 0; j < matrix.cols(); ++j) {
    longest = std::max(longest, matrix.ColumnPositions(j).size());
  }
  return static_cast<Eigen::Index>(longest);
}

void SolveOneRow(const SparseRatingMatrix& matrix, const MatrixXd& V, double gamma,
                 std::size_t i, Workspace& ws, MatrixXd* U) {
  const auto row = matrix.Row(i);
  for (std::size_t p = 0; p < row.size(); ++p) {
    ws.A.row(static_cast<Eigen::Index>(p)) = V.row(static_cast<Eigen::Index>(row[p].col));
    ws.b(static_cast<Eigen::Index>(p)) = row[p].value;
  }
  SolveRidge(ws, static_cast<Eigen::Index>(row.size()), gamma,
             U->row(static_cast<Eigen::Index>(i)));
}

void SolveOneCol(const SparseRatingMatrix& matrix, const MatrixXd& U, double gamma,
                 std::size_t j, Workspace& ws, MatrixXd* V) {
  const auto positions = matrix.ColumnPositions(j);
  const auto entries = matrix.entries();
  for (std::size_t p = 0; p < positions.size(); ++p) {
    const MatrixEntry& e = entries[positions[p]];
    ws.A.row(static_cast<Eigen::Index>(p)) = U.row(static_cast<Eigen::Index>(e.row));
    ws.b(static_cast<Eigen::Index>(p)) = e.value;
  }
  SolveRidge(ws, static_cast<Eigen::Index>(positions.size()), gamma,
             V->row(static_cast<Eigen::Index>(j)));
}

double RowResidual(const SparseRatingMatrix& matrix, const MatrixXd& U,
                   const MatrixXd& V, std::size_t i) {
  double sum = 0.0;
  for (const MatrixEntry& e : matrix.Row(i)) {
    const double r = e.value - U.row(static_cast<Eigen::Index>(e.row))
                                   .dot(V.row(static_cast<Eigen::Index>(e.col)));
    sum += r * r;
  }
  return sum;
}

}  // namespace

void SolveRowFactorsSerial(const SparseRatingMatrix& matrix, const MatrixXd& V,
                           double gamma, MatrixXd* U) {
  Workspace ws(LongestRow(matrix), V.cols());
  for (std::size_t i = 0; i < matrix.rows(); ++i) SolveOneRow(matrix, V, gamma, i, ws, U);
}

void SolveRowFactorsOmp(const SparseRatingMatrix& matrix, const MatrixXd& V,
                        double gamma, MatrixXd* U) {
  const auto m = static_cast<std::ptrdiff_t>(matrix.rows());
  const Eigen::Index longest = LongestRow(matrix);
#pragma omp parallel
  {
    Workspace ws(longest, V.cols());
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
      SolveOneRow(matrix, V, gamma, static_cast<std::size_t>(i), ws, U);
    }
  }
}

void SolveColFactorsSerial(const SparseRatingMatrix& matrix, const MatrixXd& U,
                           double gamma, MatrixXd* V) {
  Workspace ws(LongestCol(matrix), U.cols());
  for (std::size_t j = 0; j < matrix.cols(); ++j) SolveOneCol(matrix, U, gamma, j, ws, V);
}

void SolveColFactorsOmp(const SparseRatingMatrix& matrix, const MatrixXd& U,
                        double gamma, MatrixXd* V) {
  const auto n = static_cast<std::ptrdiff_t>(matrix.cols());
  const Eigen::Index longest = LongestCol(matrix);
#pragma omp parallel
  {
    Workspace ws(longest, U.cols());
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      SolveOneCol(matrix, U, gamma, static_cast<std::size_t>(j), ws, V);
    }
  }
}

double SquaredResidualSerial(const SparseRatingMatrix& matrix, const MatrixXd& U,
                             const MatrixXd& V) {
  double total = 0.0;
  for (std::size_t i = 0; i < matrix.rows(); ++i) total += RowResidual(matrix, U, V, i);
  return total;
}

double SquaredResidualOmp(const SparseRatingMatrix& matrix, const MatrixXd& U,
                          const MatrixXd& V) {
  const auto m = static_cast<std::ptrdiff_t>(matrix.rows());
  std::vector<double> per_row(matrix.rows(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    per_row[static_cast<std::size_t>(i)] =
        RowResidual(matrix, U, V, static_cast<std::size_t>(i));
  }
  double total = 0.0;
  for (double r : per_row) total += r;
  return total;
}

}  // namespace simplesurvey::kernels
