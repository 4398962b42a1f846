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

#include "simplesurvey/experiment.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "simplesurvey/error.h"
#include "simplesurvey/evaluation.h"
#include "simplesurvey/rng.h"

namespace simplesurvey {

using Eigen::Index;

SyntheticWorld SimulateWorld(std::size_t m, std::size_t n, int true_rank,
                             double noise_sd, std::uint64_t seed) {
  if (m < 2 || n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "world needs m >= 2 and n >= 2");
  }
  if (true_rank < 1) throw Error(ErrorCode::kInvalidArgument, "true_rank must be >= 1");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw Error(ErrorCode::kInvalidArgument, "noise_sd must be finite and >= 0");
  }
  SyntheticWorld world;
  world.true_rank = true_rank;
  world.noise_sd = noise_sd;
  world.seed = seed;
  world.true_U.resize(static_cast<Index>(m), true_rank);
  world.true_V.resize(static_cast<Index>(n), true_rank);
  Rng rng = MakeRng(seed, {0x3f});
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Index i = 0; i < world.true_U.rows(); ++i)
    for (Index d = 0; d < true_rank; ++d) world.true_U(i, d) = gauss(rng);
  for (Index j = 0; j < world.true_V.rows(); ++j)
    for (Index d = 0; d < true_rank; ++d) world.true_V(j, d) = gauss(rng);
  return world;
}

namespace {

std::vector<std::string> PaddedIds(char prefix, std::size_t count) {
  const std::size_t width =
      std::max<std::size_t>(3, std::to_string(count > 0 ? count - 1 : 0).size());
  std::vector<std::string> ids;
  ids.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string digits = std::to_string(i);
    ids.push_back(prefix + std::string(width - digits.size(), '0') + digits);
  }
  return ids;
}

// First `count` entries of a uniform random permutation of 0..n-1.
std::vector<std::size_t> SampleWithoutReplacement(std::size_t n, std::size_t count,
                                                  Rng& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t p = 0; p < count; ++p) {
    std::uniform_int_distribution<std::size_t> pick(p, n - 1);
    std::swap(pool[p], pool[pick(rng)]);
  }
  pool.resize(count);
  return pool;
}

// Distinct unordered pairs not already in `used`, uniformly at random, with
// uniformly random left/right orientation.
std::vector<std::pair<std::size_t, std::size_t>> SamplePairs(
    std::size_t n, std::size_t count,
    std::set<std::pair<std::size_t, std::size_t>>* used, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::uniform_int_distribution<std::size_t> item(0, n - 1);
  while (out.size() < count) {
    const std::size_t a = item(rng);
    const std::size_t b = item(rng);
    if (a == b) continue;
    if (!used->emplace(std::min(a, b), std::max(a, b)).second) continue;
    out.emplace_back(a, b);
  }
  return out;
}

std::int64_t ElapsedMs(ScaleKind kind, std::size_t query, Rng& rng) {
  double base = 3000.0;
  switch (kind) {
    case ScaleKind::kR2: base = 1800.0; break;
    case ScaleKind::kR5: base = 2600.0; break;
    case ScaleKind::kR100: base = 4200.0; break;
    case ScaleKind::kPC: base = 3000.0; break;
  }
  // Respondents speed up as they go.
  const double warmup = 0.6 + 0.8 / (1.0 + static_cast<double>(query) / 16.0);
  std::lognormal_distribution<double> jitter(0.0, 0.25);
  return static_cast<std::int64_t>(std::llround(base * warmup * jitter(rng)));
}

std::vector<int> Discretize(const SurveyScale& scale, const std::vector<double>& noisy) {
  const std::size_t s = noisy.size();
  std::vector<int> values(s, scale.min_value());
  switch (scale.kind()) {
    case ScaleKind::kR100: {
      const auto [lo, hi] = std::minmax_element(noisy.begin(), noisy.end());
      for (std::size_t q = 0; q < s; ++q) {
        if (*hi == *lo) {
          values[q] = 50;
          continue;
        }
        const double mapped = 1.0 + 99.0 * (noisy[q] - *lo) / (*hi - *lo);
        values[q] = std::clamp(static_cast<int>(std::lround(mapped)), 1, 100);
      }
      break;
    }
    case ScaleKind::kR5: {
      std::vector<std::size_t> order(s);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return noisy[a] < noisy[b]; });
      for (std::size_t rank = 0; rank < s; ++rank) {
        values[order[rank]] = 1 + static_cast<int>(5 * rank / s);
      }
      break;
    }
    case ScaleKind::kR2: {
      const double median = Median(noisy);
      for (std::size_t q = 0; q < s; ++q) values[q] = noisy[q] >= median ? 1 : 0;
      break;
    }
    case ScaleKind::kPC:
      break;
  }
  return values;
}

}  // namespace

Dataset GenerateResponses(const SyntheticWorld& world, const SurveyScale& scale,
                          std::size_t ratings_per_respondent,
                          std::size_t heldout_pc_per_respondent) {
  const std::size_t m = world.num_respondents();
  const std::size_t n = world.num_items();
  const std::uint64_t pairs = DistinctPairCount(n);
  if (scale.is_rating() && ratings_per_respondent > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "ratings_per_respondent exceeds the number of items");
  }
  if (ratings_per_respondent == 0 && scale.is_rating()) {
    throw Error(ErrorCode::kInvalidArgument, "ratings_per_respondent must be positive");
  }
  const std::size_t comparisons_needed =
      heldout_pc_per_respondent + (scale.is_rating() ? 0 : ratings_per_respondent);
  if (comparisons_needed > pairs) {
    throw Error(ErrorCode::kInvalidArgument,
                "more comparisons requested than distinct item pairs");
  }

  Dataset ds;
  ds.context = "synthetic";
  ds.scale = scale;
  ds.respondent_ids = PaddedIds('r', m);
  ds.item_ids = PaddedIds('i', n);
  std::normal_distribution<double> noise(0.0, 1.0);

  auto compare = [&](std::size_t i, std::size_t a, std::size_t b, std::size_t query,
                     Rng& rng) {
    ComparisonRecord c;
    c.respondent = i;
    c.left = a;
    c.right = b;
    const double ua = world.Utility(i, a) + world.noise_sd * noise(rng);
    const double ub = world.Utility(i, b) + world.noise_sd * noise(rng);
    c.winner = ua >= ub ? Winner::kLeft : Winner::kRight;
    c.elapsed_ms = ElapsedMs(ScaleKind::kPC, query, rng);
    return c;
  };

  for (std::size_t i = 0; i < m; ++i) {
    Rng rng = MakeRng(world.seed, {0x6e, i});
    std::set<std::pair<std::size_t, std::size_t>> used;
    std::size_t query = 0;
    if (scale.is_rating()) {
      const auto items = SampleWithoutReplacement(n, ratings_per_respondent, rng);
      std::vector<double> noisy(items.size());
      for (std::size_t q = 0; q < items.size(); ++q) {
        noisy[q] = world.Utility(i, items[q]) + world.noise_sd * noise(rng);
      }
      const std::vector<int> values = Discretize(scale, noisy);
      for (std::size_t q = 0; q < items.size(); ++q) {
        ds.responses.push_back(
            {i, items[q], values[q], ElapsedMs(scale.kind(), query++, rng)});
      }
    } else {
      for (auto [a, b] : SamplePairs(n, ratings_per_respondent, &used, rng)) {
        ds.training_comparisons.push_back(compare(i, a, b, query++, rng));
      }
    }
    for (auto [a, b] : SamplePairs(n, heldout_pc_per_respondent, &used, rng)) {
      ds.heldout_comparisons.push_back(compare(i, a, b, query++, rng));
    }
  }
  if (scale.is_rating()) ds.ratings = RatingsFromResponses(ds.responses, m, n);
  return ds;
}

// ---------------------------------------------------------------------------
// Sweep

std::vector<ComparisonSet> HeldoutByRespondent(const Dataset& dataset) {
  std::vector<ComparisonSet> out(dataset.num_respondents());
  for (const ComparisonRecord& c : dataset.heldout_comparisons) {
    out[c.respondent].push_back(c);
  }
  return out;
}

namespace {

void ValidateSweep(const Dataset& dataset, const SweepConfig& config) {
  if (config.sizes.empty()) throw Error(ErrorCode::kInvalidArgument, "no sweep sizes");
  if (config.draws < 1) throw Error(ErrorCode::kInvalidArgument, "draws must be >= 1");
  if (dataset.heldout_comparisons.empty()) {
    throw Error(ErrorCode::kEmptyInput, "dataset has no held-out comparisons");
  }
  if (dataset.num_items() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two items");
  }
  config.fit.Validate();
  std::vector<std::size_t> available(dataset.num_respondents(), 0);
  if (dataset.scale.is_rating()) {
    for (const ResponseRecord& r : dataset.responses) ++available[r.respondent];
  } else {
    for (const ComparisonRecord& c : dataset.training_comparisons) ++available[c.respondent];
  }
  const std::size_t fewest = available.empty()
                                 ? 0
                                 : *std::min_element(available.begin(), available.end());
  for (std::size_t s : config.sizes) {
    if (s == 0) throw Error(ErrorCode::kInvalidArgument, "sweep size must be positive");
    if (s > fewest) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sweep size " + std::to_string(s) + " exceeds the " +
                      std::to_string(fewest) +
                      " training responses available for some respondent");
    }
  }
}

// Training queries grouped by respondent, as positions into the dataset's
// response (ratings) or training comparison (PC) list.
std::vector<std::vector<std::size_t>> TrainingByRespondent(const Dataset& dataset) {
  std::vector<std::vector<std::size_t>> out(dataset.num_respondents());
  if (dataset.scale.is_rating()) {
    for (std::size_t p = 0; p < dataset.responses.size(); ++p) {
      out[dataset.responses[p].respondent].push_back(p);
    }
  } else {
    for (std::size_t p = 0; p < dataset.training_comparisons.size(); ++p) {
      out[dataset.training_comparisons[p].respondent].push_back(p);
    }
  }
  return out;
}

double DrawError(const Dataset& dataset, const SweepConfig& config,
                 const std::vector<std::vector<std::size_t>>& training,
                 const std::vector<ComparisonSet>& heldout,
                 const AggregateTestMatrix& pooled, std::size_t size, int draw) {
  const std::size_t m = dataset.num_respondents();
  const std::size_t n = dataset.num_items();
  Rng rng = MakeRng(config.seed, {0x5e, size, static_cast<std::uint64_t>(draw)});

  std::vector<std::size_t> picked;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p : SampleWithoutReplacement(training[i].size(), size, rng)) {
      picked.push_back(training[i][p]);
    }
  }

  FitConfig fit = config.fit;
  fit.seed = DeriveSeed(config.seed, {0x5f, size, static_cast<std::uint64_t>(draw)});
  fit.backend = Backend::kSerial;

  auto individual = [&](auto&& scores_for) {
    std::vector<double> errors;
    for (std::size_t i = 0; i < m; ++i) {
      if (heldout[i].empty()) continue;
      errors.push_back(IndividualTestError(scores_for(i), heldout[i]));
    }
    return ModelTestError(errors);
  };

  if (dataset.scale.is_rating()) {
    std::vector<ResponseRecord> sample;
    sample.reserve(picked.size());
    for (std::size_t p : picked) sample.push_back(dataset.responses[p]);
    const SparseRatingMatrix matrix = RatingsFromResponses(sample, m, n);
    if (config.mode == SweepMode::kAggregate) {
      return AggregateTestError(MeanRatingRanking(matrix, dataset.scale), pooled);
    }
    const FactorModel model = Fit(matrix, fit);
    return individual([&](std::size_t i) { return PredictRow(model, i); });
  }

  ComparisonSet sample;
  sample.reserve(picked.size());
  for (std::size_t p : picked) sample.push_back(dataset.training_comparisons[p]);
  if (config.mode == SweepMode::kAggregate) {
    return AggregateTestError(RankByScore(BordaScores(sample, n).scores), pooled);
  }
  const ComparisonModel model = FitComparisons(sample, m, n, fit, config.schedule);
  return individual([&](std::size_t i) { return ItemScores(model, i); });
}

}  // namespace

double SweepDrawError(const Dataset& dataset, const SweepConfig& config,
                      std::size_t size, int draw) {
  ValidateSweep(dataset, config);
  return DrawError(dataset, config, TrainingByRespondent(dataset),
                   HeldoutByRespondent(dataset),
                   BuildAggregateTestMatrix(dataset.heldout_comparisons, dataset.num_items()),
                   size, draw);
}

ErrorCurve RunSweep(const Dataset& dataset, const SweepConfig& config) {
  ValidateSweep(dataset, config);
  const auto training = TrainingByRespondent(dataset);
  const auto heldout = HeldoutByRespondent(dataset);
  const auto pooled =
      BuildAggregateTestMatrix(dataset.heldout_comparisons, dataset.num_items());

  const std::size_t draws = static_cast<std::size_t>(config.draws);
  const std::size_t tasks = config.sizes.size() * draws;
  std::vector<double> errors(tasks, 0.0);
  auto run = [&](std::size_t t) {
    errors[t] = DrawError(dataset, config, training, heldout, pooled,
                          config.sizes[t / draws], static_cast<int>(t % draws));
  };

  if (config.backend == Backend::kOpenMP) {
    const auto count = static_cast<std::ptrdiff_t>(tasks);
    // Exceptions may not escape an OpenMP region; the first one is rethrown
    // after the loop.
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
      try {
        run(static_cast<std::size_t>(t));
      } catch (...) {
#pragma omp critical(sweep_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::size_t t = 0; t < tasks; ++t) run(t);
  }

  ErrorCurve curve;
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    ErrorPoint point;
    point.size = config.sizes[s];
    point.draws = config.draws;
    double mean = 0.0;
    for (std::size_t d = 0; d < draws; ++d) mean += errors[s * draws + d];
    mean /= static_cast<double>(draws);
    double var = 0.0;
    for (std::size_t d = 0; d < draws; ++d) {
      const double diff = errors[s * draws + d] - mean;
      var += diff * diff;
    }
    point.mean_error = mean;
    point.sd = draws > 1 ? std::sqrt(var / static_cast<double>(draws - 1)) : 0.0;
    curve.points.push_back(point);
  }
  return curve;
}

double PermutedScoreError(const std::vector<std::vector<double>>& scores,
                          const Dataset& dataset, int permutations,
                          std::uint64_t seed) {
  if (permutations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "permutations must be >= 1");
  }
  if (scores.size() != dataset.num_respondents()) {
    throw Error(ErrorCode::kDimensionMismatch, "one score vector per respondent expected");
  }
  const auto heldout = HeldoutByRespondent(dataset);
  double total = 0.0;
  for (int p = 0; p < permutations; ++p) {
    Rng rng = MakeRng(seed, {0x9e, static_cast<std::uint64_t>(p)});
    std::vector<double> errors;
    for (std::size_t i = 0; i < heldout.size(); ++i) {
      if (heldout[i].empty()) continue;
      std::vector<double> shuffled = scores[i];
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      errors.push_back(IndividualTestError(shuffled, heldout[i]));
    }
    total += ModelTestError(errors);
  }
  return total / static_cast<double>(permutations);
}

}  // namespace simplesurvey
