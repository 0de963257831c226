// tools/jplda.cc

// Copyright 2026  The JPLDA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "jplda/eval.h"
#include "jplda/io.h"
#include "jplda/oracle.h"
#include "jplda/scoring.h"
#include "jplda/synth.h"

namespace {

using namespace jplda;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitExcluded = 2;
constexpr double kCheckTolerance = 1e-8;

struct ScoreOptions {
  std::string model, enroll, test, trials, priors, out;
  int threads = 1;
};

struct SynthOptions {
  std::string model, conditions, out_prefix, assignment = "uniform";
  int speakers = 0, per_speaker = 0;
  std::uint64_t seed = 0;
};

struct EvalOptions {
  std::string scores, key;
};

struct CheckOptions {
  std::string model, priors;
  int trials_count = 100;
  std::uint64_t seed = 0;
};

struct MakeModelOptions {
  std::string condition_ranks, out;
  int dim = 0, speaker_rank = 0;
  double speaker_scale = 1.0, condition_scale = 1.0;
  bool diagonal = false;
  std::uint64_t seed = 0;
};

std::vector<int> ParseIntList(const std::string &text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw Error(ErrorCode::kInvalidArgument, "bad integer list '" + text + "'");
    }
  }
  return out;
}

PriorConfig LoadPriorsOrUniform(const std::string &path, int num_conditions) {
  if (path.empty()) return PriorConfig::Uniform(num_conditions);
  return ReadPriors(path, num_conditions);
}

int RunScore(const ScoreOptions &opt) {
  const ModelParams model = LoadModel(opt.model);
  const PriorConfig priors = LoadPriorsOrUniform(opt.priors, model.NumConditions());
  const EmbeddingTable enroll = ReadEmbeddingTable(opt.enroll);
  const EmbeddingTable test = ReadEmbeddingTable(opt.test);
  const std::vector<Trial> trials = ReadTrialList(opt.trials);
  for (const EmbeddingTable *table : {&enroll, &test})
    if (table->Size() > 0 && table->Dim() != model.Dim())
      throw Error(ErrorCode::kDimensionMismatch,
                  "embeddings have dimension " + std::to_string(table->Dim()) +
                      ", model expects " + std::to_string(model.Dim()));

  const ScoringSession session(model, priors);
  const std::vector<double> scores =
      ScoreTrials(session, enroll, test, trials, opt.threads);
  std::ofstream out(opt.out, std::ios::out | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + opt.out);
  WriteScores(out, trials, scores);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + opt.out);
  return kExitOk;
}

int RunSynth(const SynthOptions &opt) {
  if (opt.speakers < 1)
    throw Error(ErrorCode::kInvalidArgument, "--speakers must be >= 1");
  if (opt.per_speaker < 1)
    throw Error(ErrorCode::kInvalidArgument, "--per-speaker must be >= 1");
  LabelAssignment assignment;
  if (opt.assignment == "uniform")
    assignment = LabelAssignment::kUniformRandom;
  else if (opt.assignment == "round-robin")
    assignment = LabelAssignment::kRoundRobin;
  else
    throw Error(ErrorCode::kInvalidArgument,
                "--assignment must be uniform or round-robin");

  const ModelParams model = LoadModel(opt.model);
  const std::vector<int> cardinalities = ParseIntList(opt.conditions);
  const SyntheticDataset data =
      SampleDataset(model, opt.speakers, cardinalities, opt.per_speaker,
                    assignment, opt.seed);
  WriteEmbeddingTable(opt.out_prefix + ".emb", data.ToTable());
  std::ofstream labels(opt.out_prefix + ".labels", std::ios::out | std::ios::trunc);
  if (!labels)
    throw Error(ErrorCode::kIoError, "cannot write " + opt.out_prefix + ".labels");
  WriteLabels(labels, data);
  return kExitOk;
}

int RunEval(const EvalOptions &opt) {
  const std::vector<ScoreRow> rows = ReadScores(opt.scores);
  std::map<std::pair<std::string, std::string>, bool> key;
  for (const Trial &t : ReadTrialList(opt.key)) {
    if (!t.is_target)
      throw Error(ErrorCode::kParseError,
                  "key entry " + t.enroll_id + " " + t.test_id + " has no label");
    key[{t.enroll_id, t.test_id}] = *t.is_target;
  }
  ScoredTrials scored;
  for (const ScoreRow &row : rows) {
    auto it = key.find({row.enroll_id, row.test_id});
    if (it == key.end())
      throw Error(ErrorCode::kUnknownId,
                  "trial " + row.enroll_id + " " + row.test_id + " not in key");
    scored.scores.push_back(row.score);
    scored.is_target.push_back(it->second);
  }
  const double eer = EqualErrorRate(scored);
  const double calibration = CalibrationIdentity(scored);
  std::printf("EER %.4f\n", eer);
  std::printf("CalibrationIdentity %.4f\n", calibration);
  return kExitOk;
}

int RunCheck(const CheckOptions &opt) {
  if (opt.trials_count < 1)
    throw Error(ErrorCode::kInvalidArgument, "--trials-count must be >= 1");
  const ModelParams model = LoadModel(opt.model);
  const PriorConfig priors = LoadPriorsOrUniform(opt.priors, model.NumConditions());
  const ScoringSession session(model, priors);
  const int num_target = opt.trials_count / 2;
  const Benchmark bench = MakeBenchmark(model, PriorConfig::Uniform(model.NumConditions()),
                                        num_target, opt.trials_count - num_target,
                                        opt.seed);
  double max_dev = 0.0;
  for (const Trial &t : bench.trials) {
    const Eigen::VectorXd e = bench.enroll.Row(bench.enroll.Find(t.enroll_id));
    const Eigen::VectorXd s = bench.test.Row(bench.test.Find(t.test_id));
    const double dev =
        std::abs(Llr(session, e, s) - oracle::GaussianLlrOracle(model, priors, e, s));
    if (std::isnan(dev) || (!std::isnan(max_dev) && dev > max_dev)) max_dev = dev;
  }
  std::printf("trials %d\n", opt.trials_count);
  std::printf("max_abs_deviation %s\n", FormatScore(max_dev).c_str());
  return max_dev <= kCheckTolerance ? kExitOk : kExitError;
}

int RunMakeModel(const MakeModelOptions &opt) {
  Rng rng(opt.seed);
  const ModelParams model =
      RandomModel(opt.dim, opt.speaker_rank, ParseIntList(opt.condition_ranks), &rng,
                  opt.speaker_scale, opt.condition_scale, opt.diagonal);
  SaveModel(opt.out, model);
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Multi-condition joint PLDA scoring tools"};
  app.require_subcommand(1);

  ScoreOptions score;
  auto *score_cmd = app.add_subcommand("score", "Score a trial list");
  score_cmd->add_option("--model", score.model, "Binary model file")->required();
  score_cmd->add_option("--enroll", score.enroll, "Enrollment embedding table")->required();
  score_cmd->add_option("--test", score.test, "Test embedding table")->required();
  score_cmd->add_option("--trials", score.trials, "Trial list")->required();
  score_cmd->add_option("--priors", score.priors,
                        "Condition priors file (default: 0.5 everywhere)");
  score_cmd->add_option("--out", score.out, "Output score file")->required();
  score_cmd->add_option("--threads", score.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  SynthOptions synth;
  auto *synth_cmd = app.add_subcommand("synth", "Sample a synthetic dataset");
  synth_cmd->add_option("--model", synth.model, "Binary model file")->required();
  synth_cmd->add_option("--speakers", synth.speakers, "Number of speakers")->required();
  synth_cmd->add_option("--conditions", synth.conditions,
                        "Comma-separated label count per condition");
  synth_cmd->add_option("--per-speaker", synth.per_speaker, "Samples per speaker")
      ->required();
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--assignment", synth.assignment,
                        "Condition label assignment: uniform | round-robin");
  synth_cmd->add_option("--out-prefix", synth.out_prefix,
                        "Writes <prefix>.emb and <prefix>.labels")
      ->required();

  EvalOptions eval;
  auto *eval_cmd = app.add_subcommand("eval", "EER and calibration of a score file");
  eval_cmd->add_option("--scores", eval.scores, "Score file")->required();
  eval_cmd->add_option("--key", eval.key, "Labelled trial list")->required();

  CheckOptions check;
  auto *check_cmd = app.add_subcommand(
      "check", "Compare closed-form scoring with the Gaussian oracle");
  check_cmd->add_option("--model", check.model, "Binary model file")->required();
  check_cmd->add_option("--trials-count", check.trials_count, "Random trials");
  check_cmd->add_option("--seed", check.seed, "Random seed");
  check_cmd->add_option("--priors", check.priors, "Condition priors file");

  MakeModelOptions make;
  auto *make_cmd = app.add_subcommand("make-model", "Write a random model");
  make_cmd->add_option("--dim", make.dim, "Embedding dimension")->required();
  make_cmd->add_option("--speaker-rank", make.speaker_rank, "Speaker subspace rank");
  make_cmd->add_option("--condition-ranks", make.condition_ranks,
                       "Comma-separated condition subspace ranks");
  make_cmd->add_option("--speaker-scale", make.speaker_scale, "Speaker loading scale");
  make_cmd->add_option("--condition-scale", make.condition_scale,
                       "Condition loading scale");
  make_cmd->add_flag("--diagonal", make.diagonal, "Diagonal noise precision");
  make_cmd->add_option("--seed", make.seed, "Random seed");
  make_cmd->add_option("--out", make.out, "Output model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*score_cmd) return RunScore(score);
    if (*synth_cmd) return RunSynth(synth);
    if (*eval_cmd) return RunEval(eval);
    if (*check_cmd) return RunCheck(check);
    if (*make_cmd) return RunMakeModel(make);
  } catch (const Error &e) {
    std::cerr << "jplda: " << e.what() << '\n';
    return e.code() == ErrorCode::kAllHypothesesExcluded ? kExitExcluded
                                                         : kExitError;
  } catch (const std::exception &e) {
    std::cerr << "jplda: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
