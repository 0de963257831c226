// src/synth.cc

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

#include "jplda/synth.h"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace jplda {

double Rng::Uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::Gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = Uniform(), u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Eigen::VectorXd Rng::GaussianVector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Gaussian();
  return v;
}

int Rng::UniformInt(int n) {
  if (n <= 0) throw Error(ErrorCode::kInvalidArgument, "UniformInt range");
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<int>(x % range);
}

NoiseSampler::NoiseSampler(const ModelParams &model) {
  Eigen::LLT<Eigen::MatrixXd> llt(model.precision);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::kNotPositiveDefinite, "precision");
  chol_upper_ = llt.matrixU();
}

Eigen::VectorXd NoiseSampler::Draw(Rng *rng) const {
  Eigen::VectorXd g = rng->GaussianVector(chol_upper_.rows());
  chol_upper_.triangularView<Eigen::Upper>().solveInPlace(g);
  return g;
}

SyntheticDataset SampleDataset(const ModelParams &model, int num_speakers,
                               const std::vector<int> &condition_cardinalities,
                               int samples_per_speaker,
                               LabelAssignment assignment, std::uint64_t seed) {
  ValidateModel(model);
  if (num_speakers < 1)
    throw Error(ErrorCode::kInvalidArgument, "need at least one speaker");
  if (samples_per_speaker < 1)
    throw Error(ErrorCode::kInvalidArgument,
                "need at least one sample per speaker");
  const int n = model.NumConditions();
  if (static_cast<int>(condition_cardinalities.size()) != n)
    throw Error(ErrorCode::kDimensionMismatch,
                "condition cardinality list does not match model");
  for (int c : condition_cardinalities)
    if (c < 1)
      throw Error(ErrorCode::kInvalidArgument,
                  "condition cardinality must be >= 1");

  Rng rng(seed);
  std::vector<Eigen::VectorXd> speaker_latents;
  for (int s = 0; s < num_speakers; ++s)
    speaker_latents.push_back(rng.GaussianVector(model.SpeakerRank()));
  std::vector<std::vector<Eigen::VectorXd>> condition_latents(n);
  for (int j = 0; j < n; ++j)
    for (int c = 0; c < condition_cardinalities[j]; ++c)
      condition_latents[j].push_back(rng.GaussianVector(model.ConditionRank(j)));

  const NoiseSampler noise(model);
  const int total = num_speakers * samples_per_speaker;
  SyntheticDataset data;
  data.seed = seed;
  data.embeddings.resize(total, model.Dim());
  data.speaker_labels.resize(total);
  data.condition_labels.assign(n, std::vector<int>(total));
  data.ids.reserve(total);
  for (int i = 0; i < total; ++i) {
    const int s = i / samples_per_speaker;
    data.speaker_labels[i] = s;
    Eigen::VectorXd m = model.mean + model.speaker_loadings * speaker_latents[s];
    for (int j = 0; j < n; ++j) {
      const int c = assignment == LabelAssignment::kRoundRobin
                        ? i % condition_cardinalities[j]
                        : rng.UniformInt(condition_cardinalities[j]);
      data.condition_labels[j][i] = c;
      m += model.condition_loadings[j] * condition_latents[j][c];
    }
    m += noise.Draw(&rng);
    data.embeddings.row(i) = m.transpose();
    char id[32];
    std::snprintf(id, sizeof(id), "spk%04d-utt%06d", s, i);
    data.ids.emplace_back(id);
  }
  return data;
}

namespace {

std::pair<Eigen::VectorXd, Eigen::VectorXd> DrawPair(
    const ModelParams &model, const HypothesisVector &h,
    const NoiseSampler &noise, Rng *rng) {
  Eigen::VectorXd enroll = model.mean, test = model.mean;
  for (int f = 0; f <= model.NumConditions(); ++f) {
    const Eigen::MatrixXd &w =
        f == 0 ? model.speaker_loadings : model.condition_loadings[f - 1];
    const bool tied = f == 0 ? h.speaker_tied : h.condition_tied[f - 1];
    if (tied) {
      const Eigen::VectorXd shared = w * rng->GaussianVector(w.cols());
      enroll += shared;
      test += shared;
    } else {
      enroll += w * rng->GaussianVector(w.cols());
      test += w * rng->GaussianVector(w.cols());
    }
  }
  enroll += noise.Draw(rng);
  test += noise.Draw(rng);
  return {enroll, test};
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> SampleTrialPair(
    const ModelParams &model, const HypothesisVector &h, Rng *rng) {
  if (static_cast<int>(h.condition_tied.size()) != model.NumConditions())
    throw Error(ErrorCode::kDimensionMismatch,
                "hypothesis length does not match model");
  return DrawPair(model, h, NoiseSampler(model), rng);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> SampleTrialPair(
    const ModelParams &model, const HypothesisVector &h, std::uint64_t seed) {
  Rng rng(seed);
  return SampleTrialPair(model, h, &rng);
}

Benchmark MakeBenchmark(const ModelParams &model, const PriorConfig &priors,
                        int num_target, int num_nontarget, std::uint64_t seed) {
  ValidateModel(model);
  priors.Validate();
  if (num_target < 0 || num_nontarget < 0)
    throw Error(ErrorCode::kInvalidArgument, "negative trial count");
  const int n = model.NumConditions();
  if (static_cast<int>(priors.conditions.size()) != n)
    throw Error(ErrorCode::kDimensionMismatch, "priors length");

  Rng rng(seed);
  const NoiseSampler noise(model);
  const int total = num_target + num_nontarget;
  Eigen::MatrixXd enroll(total, model.Dim()), test(total, model.Dim());
  std::vector<std::string> enroll_ids, test_ids;
  Benchmark bench;
  bench.trials.reserve(total);
  for (int t = 0; t < total; ++t) {
    HypothesisVector h{t < num_target, ConditionHypothesis(n)};
    for (int j = 0; j < n; ++j) {
      const double p = h.speaker_tied ? priors.conditions[j].p_same_given_ss
                                      : priors.conditions[j].p_same_given_ds;
      h.condition_tied[j] = rng.Uniform() < p;
    }
    const auto [e, s] = DrawPair(model, h, noise, &rng);
    enroll.row(t) = e.transpose();
    test.row(t) = s.transpose();
    char id[32];
    std::snprintf(id, sizeof(id), "enr%07d", t);
    enroll_ids.emplace_back(id);
    std::snprintf(id, sizeof(id), "tst%07d", t);
    test_ids.emplace_back(id);
    bench.trials.push_back({enroll_ids.back(), test_ids.back(), h.speaker_tied});
  }
  bench.enroll = EmbeddingTable(std::move(enroll_ids), std::move(enroll));
  bench.test = EmbeddingTable(std::move(test_ids), std::move(test));
  return bench;
}

ModelParams RandomModel(int dim, int speaker_rank,
                        const std::vector<int> &condition_ranks, Rng *rng,
                        double speaker_scale, double condition_scale,
                        bool diagonal_precision) {
  if (dim < 1 || speaker_rank < 0)
    throw Error(ErrorCode::kInvalidArgument, "bad model dimensions");
  auto gaussian_matrix = [&](int rows, int cols, double scale) {
    Eigen::MatrixXd m(rows, cols);
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) m(r, c) = scale * rng->Gaussian();
    return m;
  };
  ModelParams model;
  model.mean = rng->GaussianVector(dim);
  model.speaker_loadings = gaussian_matrix(dim, speaker_rank, speaker_scale);
  for (int rank : condition_ranks) {
    if (rank < 1) throw Error(ErrorCode::kInvalidArgument, "condition rank");
    model.condition_loadings.push_back(
        gaussian_matrix(dim, rank, condition_scale));
  }
  if (diagonal_precision) {
    Eigen::VectorXd var(dim);
    for (int i = 0; i < dim; ++i) var(i) = 0.5 + 1.5 * rng->Uniform();
    model.precision = var.cwiseInverse().asDiagonal();
  } else {
    const Eigen::MatrixXd b = gaussian_matrix(dim, dim, 1.0);
    Eigen::MatrixXd cov = b * b.transpose() / dim;
    cov.diagonal().array() += 0.5;
    Eigen::MatrixXd precision =
        cov.llt().solve(Eigen::MatrixXd::Identity(dim, dim));
    model.precision = 0.5 * (precision + precision.transpose());
  }
  return model;
}

}  // namespace jplda
