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

// Serial reference versus OpenMP for the ALS kernels, a full fit and a
// subsampling sweep.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "simplesurvey/als_kernels.h"
#include "simplesurvey/experiment.h"
#include "simplesurvey/factorization.h"

namespace simplesurvey {
namespace {

SparseRatingMatrix RandomMatrix(std::size_t m, std::size_t n, double density) {
  const SyntheticWorld world = SimulateWorld(m, n, 3, 0.0, 17);
  std::mt19937_64 rng(18);
  std::bernoulli_distribution keep(density);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<MatrixEntry> entries;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (keep(rng)) entries.push_back({i, j, world.Utility(i, j) + noise(rng)});
    }
  }
  return SparseRatingMatrix(m, n, std::move(entries));
}

const SparseRatingMatrix& BenchMatrix() {
  static const auto* matrix = new SparseRatingMatrix(RandomMatrix(2000, 500, 0.1));
  return *matrix;
}

template <auto Kernel>
void BM_RowSolve(benchmark::State& state) {
  const SparseRatingMatrix& matrix = BenchMatrix();
  const auto k = static_cast<Eigen::Index>(state.range(0));
  const Eigen::MatrixXd V = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(matrix.cols()), k);
  Eigen::MatrixXd U(static_cast<Eigen::Index>(matrix.rows()), k);
  for (auto _ : state) {
    Kernel(matrix, V, 0.1, &U);
    benchmark::DoNotOptimize(U.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(matrix.rows()));
}
BENCHMARK(BM_RowSolve<kernels::SolveRowFactorsSerial>)->Name("BM_RowSolve/serial")->Arg(3)->Arg(8);
BENCHMARK(BM_RowSolve<kernels::SolveRowFactorsOmp>)->Name("BM_RowSolve/omp")->Arg(3)->Arg(8);

void BM_Fit(benchmark::State& state, Backend backend) {
  const SparseRatingMatrix& matrix = BenchMatrix();
  FitConfig config;
  config.k = 3;
  config.gamma = 1.0;
  config.max_sweeps = 20;
  config.backend = backend;
  for (auto _ : state) benchmark::DoNotOptimize(Fit(matrix, config));
}
BENCHMARK_CAPTURE(BM_Fit, serial, Backend::kSerial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Fit, omp, Backend::kOpenMP)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state, Backend backend) {
  const SyntheticWorld world = SimulateWorld(50, 100, 3, 0.5, 8);
  const Dataset dataset = GenerateResponses(world, SurveyScale::Of(ScaleKind::kR100));
  SweepConfig config;
  config.sizes = {8, 40, 72};
  config.draws = 4;
  config.seed = 8;
  config.backend = backend;
  for (auto _ : state) benchmark::DoNotOptimize(RunSweep(dataset, config));
}
BENCHMARK_CAPTURE(BM_Sweep, serial, Backend::kSerial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Sweep, omp, Backend::kOpenMP)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace simplesurvey

BENCHMARK_MAIN();
