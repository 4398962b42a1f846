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

// simple_survey: simulate, fit, validate, evaluate, sweep, embed and summarize
// simple-survey datasets. Run `simple_survey <command> --help` for flags.

#include <omp.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "run_config.h"
#include "simplesurvey/comparison_model.h"
#include "simplesurvey/error.h"
#include "simplesurvey/evaluation.h"
#include "simplesurvey/experiment.h"
#include "simplesurvey/export.h"
#include "simplesurvey/factorization.h"
#include "simplesurvey/survey_data.h"

#ifndef SIMPLESURVEY_VERSION
#define SIMPLESURVEY_VERSION "unknown"
#endif

namespace simplesurvey::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Run {
  std::string command;
  json config;
  std::string hash;
  fs::path out;
  std::vector<std::string> outputs;

  std::uint64_t seed() const { return config.at("seed").get<std::uint64_t>(); }
  std::string Provenance() const {
    return "# seed=" + std::to_string(seed()) + " config_hash=" + hash + "\n";
  }
  fs::path Output(const std::string& name) {
    outputs.push_back(name);
    return out / name;
  }
  template <typename T>
  T Get(const std::string& key) const {
    return config.at(key).get<T>();
  }
  std::string Path(const std::string& key) const { return Get<std::string>(key); }
};

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void WriteJson(const fs::path& path, const json& j) { OpenOut(path) << j.dump(2) << "\n"; }

// Writes a CSV through `body`, preceded by the provenance comment line.
template <typename Body>
void WriteCsv(Run& run, const std::string& name, Body&& body) {
  std::ostringstream text;
  text << run.Provenance();
  body(text);
  OpenOut(run.Output(name)) << text.str();
}

json Stamped(const Run& run, json j) {
  j["seed"] = run.seed();
  j["config_hash"] = run.hash;
  return j;
}

SurveyScale Scale(const Run& run) {
  if (run.config.at("scale").is_null()) {
    throw Error(ErrorCode::kInvalidArgument, "--scale is required");
  }
  return SurveyScale::Parse(run.Path("scale"));
}

Dataset Load(const Run& run) {
  LoadOptions options;
  options.heldout_per_respondent = run.Get<std::size_t>("heldout");
  return LoadDataset(run.Path("ratings"), run.Path("comparisons"), Scale(run), options);
}

FitConfig MakeFitConfig(const Run& run) {
  FitConfig fit;
  fit.k = run.Get<int>("k");
  fit.gamma = run.Get<double>("gamma");
  fit.max_sweeps = run.Get<int>("max_sweeps");
  fit.rel_tol = run.Get<double>("rel_tol");
  fit.seed = run.seed();
  fit.backend = run.Get<int>("threads") == 1 ? Backend::kSerial : Backend::kOpenMP;
  fit.Validate();
  return fit;
}

SgdSchedule MakeSchedule(const Run& run) {
  SgdSchedule schedule;
  schedule.epochs = run.Get<int>("epochs");
  schedule.step_size = run.Get<double>("step_size");
  schedule.batch_size = run.Get<std::size_t>("batch_size");
  return schedule;
}

std::vector<std::vector<double>> ScoresPerRespondent(const Dataset& ds, const json& model) {
  std::vector<std::vector<double>> scores(ds.num_respondents());
  if (ds.scale.is_rating()) {
    const FactorModel fm = FactorModelFromJson(model);
    if (fm.rows() != ds.num_respondents() || fm.cols() != ds.num_items()) {
      throw Error(ErrorCode::kDimensionMismatch, "model shape does not match the dataset");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = PredictRow(fm, i);
  } else {
    const ComparisonModel cm = ComparisonModelFromJson(model);
    if (cm.rows() != ds.num_respondents() || cm.cols() != ds.num_items()) {
      throw Error(ErrorCode::kDimensionMismatch, "model shape does not match the dataset");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = ItemScores(cm, i);
  }
  return scores;
}

json FitModel(const Run& run, const Dataset& ds) {
  const FitConfig fit = MakeFitConfig(run);
  if (ds.scale.is_rating()) return FactorModelToJson(Fit(ds.ratings, fit));
  return ComparisonModelToJson(FitComparisons(ds.training_comparisons, ds.num_respondents(),
                                              ds.num_items(), fit, MakeSchedule(run)));
}

json ModelFor(const Run& run, const Dataset& ds) {
  const std::string path = run.Path("model");
  if (path.empty()) return FitModel(run, ds);
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRow, path + ": " + e.what());
  }
}

// Ranking used for aggregate scores and embedding quartiles.
GlobalRanking ItemRanking(const Dataset& ds) {
  if (ds.scale.is_rating()) return MeanRatingRanking(ds.ratings, ds.scale);
  return RankByScore(BordaScores(ds.training_comparisons, ds.num_items()).scores);
}

// ---------------------------------------------------------------------------
// Commands

void Simulate(Run& run) {
  const SurveyScale scale = Scale(run);
  const SyntheticWorld world =
      SimulateWorld(run.Get<std::size_t>("m"), run.Get<std::size_t>("n"), run.Get<int>("rank"),
                    run.Get<double>("noise"), run.seed());
  const Dataset ds = GenerateResponses(world, scale, run.Get<std::size_t>("per_respondent"),
                                       run.Get<std::size_t>("heldout"));
  auto write = [&](const std::string& name, auto writer) {
    const fs::path path = run.Output(name);
    writer(ds, path);
    const std::string body = [&] {
      std::ifstream in(path, std::ios::binary);
      return std::string(std::istreambuf_iterator<char>(in), {});
    }();
    OpenOut(path) << run.Provenance() << body;
  };
  if (scale.is_rating()) write("ratings.csv", WriteRatingsCsv);
  write("comparisons.csv", WriteComparisonsCsv);
}

void FitCommand(Run& run) {
  const Dataset ds = Load(run);
  WriteJson(run.Output("model.json"), Stamped(run, FitModel(run, ds)));
}

void CrossValidateCommand(Run& run) {
  const Dataset ds = Load(run);
  if (!ds.scale.is_rating()) {
    throw Error(ErrorCode::kInvalidArgument, "cv needs a rating scale");
  }
  CvConfig cv;
  cv.k_grid = run.Get<std::vector<int>>("k_grid");
  cv.gamma_grid = run.Get<std::vector<double>>("gamma_grid");
  cv.repeats = run.Get<int>("repeats");
  cv.holdout_fraction = run.Get<double>("holdout_fraction");
  cv.seed = run.seed();
  cv.fit = MakeFitConfig(run);
  const CvReport report = CrossValidate(ds.ratings, cv);
  WriteCsv(run, "cv.csv", [&](std::ostream& out) { WriteCvReportCsv(out, report); });
}

void Evaluate(Run& run) {
  const Dataset ds = Load(run);
  if (ds.heldout_comparisons.empty()) {
    throw Error(ErrorCode::kEmptyInput, "eval needs held-out comparisons");
  }
  const auto scores = ScoresPerRespondent(ds, ModelFor(run, ds));
  const auto heldout = HeldoutByRespondent(ds);
  std::vector<double> errors;
  json per_respondent = json::array();
  for (std::size_t i = 0; i < heldout.size(); ++i) {
    if (heldout[i].empty()) continue;
    errors.push_back(IndividualTestError(scores[i], heldout[i]));
    per_respondent.push_back({{"respondent_id", ds.respondent_ids[i]}, {"error", errors.back()}});
  }
  const AggregateTestMatrix pooled =
      BuildAggregateTestMatrix(ds.heldout_comparisons, ds.num_items());
  json result = {
      {"scale", std::string(ds.scale.name())},
      {"individual_error", ModelTestError(errors)},
      {"permuted_individual_error", PermutedScoreError(scores, ds, 100, run.seed())},
      {"aggregate_error", AggregateTestError(ItemRanking(ds), pooled)},
      {"aggregate_method", ds.scale.is_rating() ? "mean_rating" : "borda"},
      {"heldout_comparisons", ds.heldout_comparisons.size()},
      {"per_respondent", per_respondent},
  };
  WriteJson(run.Output("eval.json"), Stamped(run, result));
}

void SweepCommand(Run& run) {
  const Dataset ds = Load(run);
  SweepConfig sweep;
  sweep.sizes = run.Get<std::vector<std::size_t>>("sizes");
  sweep.draws = run.Get<int>("draws");
  const std::string mode = run.Path("mode");
  if (mode == "individual") {
    sweep.mode = SweepMode::kIndividual;
  } else if (mode == "aggregate") {
    sweep.mode = SweepMode::kAggregate;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "--mode must be individual or aggregate");
  }
  sweep.seed = run.seed();
  sweep.fit = MakeFitConfig(run);
  sweep.schedule = MakeSchedule(run);
  sweep.backend = sweep.fit.backend;
  const ErrorCurve curve = RunSweep(ds, sweep);
  WriteCsv(run, "sweep.csv", [&](std::ostream& out) { WriteErrorCurveCsv(out, curve); });
}

void Embed(Run& run) {
  const Dataset ds = Load(run);
  const json model = ModelFor(run, ds);
  ItemEmbedding embedding;
  if (ds.scale.is_rating()) {
    embedding = LatentEmbedding(FactorModelFromJson(model), ds.ratings);
  } else {
    const ComparisonModel cm = ComparisonModelFromJson(model);
    embedding = EmbedFactors(cm.U, cm.V);
  }
  if (static_cast<std::size_t>(embedding.coords.rows()) != ds.num_items()) {
    throw Error(ErrorCode::kDimensionMismatch, "model shape does not match the dataset");
  }
  const std::vector<int> quartiles = ScoreQuartiles(ItemRanking(ds).score_per_item);
  WriteCsv(run, "embedding.csv", [&](std::ostream& out) {
    WriteEmbeddingCsv(out, embedding, quartiles, ds.item_ids);
  });
  WriteJson(run.Output("embedding.json"),
            Stamped(run, {{"variance_fractions", embedding.variance_fractions}}));
}

void SummarizeCommand(Run& run) {
  const Dataset ds = Load(run);
  const Summary summary = Summarize(ds, run.Get<std::size_t>("block_size"));
  WriteJson(run.Output("summary.json"), Stamped(run, SummaryToJson(summary, ds.scale)));
}

const std::map<std::string, std::pair<std::string, void (*)(Run&)>>& Commands() {
  static const auto* commands = new std::map<std::string, std::pair<std::string, void (*)(Run&)>>{
      {"simulate", {"write a synthetic dataset", Simulate}},
      {"fit", {"fit a model and write model.json", FitCommand}},
      {"cv", {"cross-validate k and gamma, write cv.csv", CrossValidateCommand}},
      {"eval", {"held-out individual and aggregate errors, write eval.json", Evaluate}},
      {"sweep", {"error vs. questions per respondent, write sweep.csv", SweepCommand}},
      {"embed", {"2-D item embedding with quartile labels, write embedding.csv", Embed}},
      {"summarize", {"response histogram and block timings, write summary.json",
                     SummarizeCommand}},
  };
  return *commands;
}

std::string Dashed(std::string name) {
  for (char& c : name) {
    if (c == '_') c = '-';
  }
  return name;
}

json ReadConfigFile(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path);
  json file;
  try {
    file = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRow, path + ": " + e.what());
  }
  if (!file.is_object()) throw Error(ErrorCode::kMalformedRow, path + ": expected an object");
  json accepted = json::object();
  for (const auto& [key, value] : file.items()) {
    const auto& keys = Keys();
    auto spec = std::find_if(keys.begin(), keys.end(),
                             [&](const KeySpec& k) { return k.name == key; });
    if (spec == keys.end()) {
      throw Error(ErrorCode::kInvalidArgument, path + ": unknown key '" + key + "'");
    }
    if (!KeyApplies(*spec, command)) continue;
    CheckValue(*spec, value);
    accepted[key] = value;
  }
  return accepted;
}

int Main(int argc, char** argv) {
  CLI::App app{"Simple-survey analysis: factorization models, sweeps and summaries"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SIMPLESURVEY_VERSION);

  std::map<std::string, std::string> config_paths;
  std::map<std::string, std::map<std::string, std::pair<CLI::Option*, std::string>>> raw;
  for (const auto& [name, entry] : Commands()) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_paths[name], "JSON config; flags override it");
    auto& options = raw[name];
    for (const KeySpec& key : Keys()) {
      if (!KeyApplies(key, name)) continue;
      auto& slot = options[key.name];
      std::string help = key.help;
      if (!key.default_value.is_null()) help += " (default " + key.default_value.dump() + ")";
      slot.first = sub->add_option("--" + Dashed(key.name), slot.second, help);
      if (key.name == "scale") {
        slot.first->check(CLI::IsMember({"r2", "r5", "r100", "pc"}, CLI::ignore_case));
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    Run run;
    run.command = app.get_subcommands().front()->get_name();
    run.config = json::object();
    for (const KeySpec& key : Keys()) {
      if (KeyApplies(key, run.command)) run.config[key.name] = key.default_value;
    }
    if (!config_paths[run.command].empty()) {
      run.config.update(ReadConfigFile(config_paths[run.command], run.command));
    }
    for (const auto& [name, slot] : raw[run.command]) {
      if (slot.first->count() == 0) continue;
      const auto& keys = Keys();
      const KeySpec& key = *std::find_if(keys.begin(), keys.end(),
                                         [&](const KeySpec& k) { return k.name == name; });
      run.config[name] = ParseValue(key, slot.second);
    }
    run.hash = ConfigHash(run.config);
    run.out = run.Path("out");
    fs::create_directories(run.out);

    const int threads = run.Get<int>("threads");
    if (threads < 0) throw Error(ErrorCode::kInvalidArgument, "--threads must be >= 0");
    if (threads > 0) omp_set_num_threads(threads);

    Commands().at(run.command).second(run);

    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    WriteJson(run.out / "manifest.json",
              {{"command", run.command},
               {"config", run.config},
               {"seed", run.seed()},
               {"config_hash", run.hash},
               {"version", SIMPLESURVEY_VERSION},
               {"timestamp", stamp},
               {"outputs", run.outputs}});
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace
}  // namespace simplesurvey::cli

int main(int argc, char** argv) { return simplesurvey::cli::Main(argc, argv); }
