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

// Test-only reference computations. Nothing here calls into the library's
// solvers; they exist to check them.

#ifndef SIMPLESURVEY_TESTS_ORACLES_H_
#define SIMPLESURVEY_TESTS_ORACLES_H_

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace simplesurvey::testing {

// Rank-1 completion of [[a, b], [c, ?]] with a != 0 by brute force. With the
// gauge u1 = 1, an exact fit of the first row forces v = (a, b); the second
// row factor u2 is found by scanning a grid and the completion is u2 * b.
inline double GridSearchRank1Completion(double a, double b, double c) {
  double best_u2 = 0.0;
  double best_loss = std::numeric_limits<double>::infinity();
  // Coarse scan, then a refinement around the coarse optimum.
  for (double step : {1e-2, 1e-5, 1e-8}) {
    const double lo = step == 1e-2 ? -100.0 : best_u2 - 2e3 * step;
    const double hi = step == 1e-2 ? 100.0 : best_u2 + 2e3 * step;
    for (double u2 = lo; u2 <= hi; u2 += step) {
      const double loss = (c - u2 * a) * (c - u2 * a);
      if (loss < best_loss) {
        best_loss = loss;
        best_u2 = u2;
      }
    }
  }
  return best_u2 * b;
}

struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Objective evaluated from nested loops over a dense mask.
inline double DenseObjective(const DenseMatrix& x,
                             const std::vector<std::vector<bool>>& observed,
                             const DenseMatrix& u, const DenseMatrix& v,
                             double gamma) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t j = 0; j < x.cols; ++j) {
      if (!observed[i][j]) continue;
      double dot = 0.0;
      for (std::size_t d = 0; d < u.cols; ++d) dot += u(i, d) * v(j, d);
      total += (x(i, j) - dot) * (x(i, j) - dot);
    }
  }
  double norms = 0.0;
  for (double e : u.data) norms += e * e;
  for (double e : v.data) norms += e * e;
  return total + gamma * norms;
}

// Spearman rank correlation with average ranks for ties.
inline double Spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double less = 0.0, equal = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] < v[i]) less += 1.0;
        if (v[j] == v[i]) equal += 1.0;
      }
      r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace simplesurvey::testing

#endif  // SIMPLESURVEY_TESTS_ORACLES_H_
