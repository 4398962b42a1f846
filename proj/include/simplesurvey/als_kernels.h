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

// Inner loops of the ALS solver. Each has a serial reference and an OpenMP
// version; both run the identical per-row arithmetic, so their outputs match
// exactly regardless of thread count.

#ifndef SIMPLESURVEY_ALS_KERNELS_H_
#define SIMPLESURVEY_ALS_KERNELS_H_

#include <Eigen/Dense>

#include "simplesurvey/survey_data.h"

namespace simplesurvey::kernels {

// Rows of U given fixed V: u_i = argmin sum_j (x_ij - u.v_j)^2 + gamma |u|^2.
// gamma = 0 takes the minimum-norm least-squares solution.
void SolveRowFactorsSerial(const SparseRatingMatrix& matrix,
                           const Eigen::MatrixXd& V, double gamma,
                           Eigen::MatrixXd* U);
void SolveRowFactorsOmp(const SparseRatingMatrix& matrix,
                        const Eigen::MatrixXd& V, double gamma,
                        Eigen::MatrixXd* U);

// Rows of V given fixed U, symmetric to the above.
void SolveColFactorsSerial(const SparseRatingMatrix& matrix,
                           const Eigen::MatrixXd& U, double gamma,
                           Eigen::MatrixXd* V);
void SolveColFactorsOmp(const SparseRatingMatrix& matrix,
                        const Eigen::MatrixXd& U, double gamma,
                        Eigen::MatrixXd* V);

// Squared residual over observed entries. The OpenMP version accumulates per
// row and sums rows in order, so it is bit-identical to the serial one.
double SquaredResidualSerial(const SparseRatingMatrix& matrix,
                             const Eigen::MatrixXd& U, const Eigen::MatrixXd& V);
double SquaredResidualOmp(const SparseRatingMatrix& matrix,
                          const Eigen::MatrixXd& U, const Eigen::MatrixXd& V);

}  // namespace simplesurvey::kernels

#endif  // SIMPLESURVEY_ALS_KERNELS_H_
