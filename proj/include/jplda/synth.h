// jplda/synth.h

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

#ifndef JPLDA_SYNTH_H_
#define JPLDA_SYNTH_H_

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jplda/hypothesis.h"
#include "jplda/model.h"
#include "jplda/trials.h"

namespace jplda {

/**
   Seedable random source.  Uniforms come from the top 53 bits of
   std::mt19937_64 (whose output sequence is fixed by the standard), and
   normals from the trigonometric Box-Muller transform
     g1 = sqrt(-2 log u1) cos(2 pi u2),  g2 = sqrt(-2 log u1) sin(2 pi u2),
   consumed in that order.  Neither std::normal_distribution nor
   std::uniform_int_distribution is used, since their algorithms are
   implementation defined.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double Uniform();
  double Gaussian();
  Eigen::VectorXd GaussianVector(Eigen::Index n);
  /// Uniform integer in [0, n), by rejection.
  int UniformInt(int n);
  std::uint64_t NextU64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Draws eps ~ N(0, D^{-1}) as L^{-T} g with D = L L^T.
class NoiseSampler {
 public:
  explicit NoiseSampler(const ModelParams &model);
  Eigen::VectorXd Draw(Rng *rng) const;

 private:
  Eigen::MatrixXd chol_upper_;  // L^T
};

enum class LabelAssignment { kUniformRandom, kRoundRobin };

struct SyntheticDataset {
  Eigen::MatrixXd embeddings;                  // I x d
  std::vector<int> speaker_labels;             // length I
  std::vector<std::vector<int>> condition_labels;  // N x I
  std::vector<std::string> ids;
  std::uint64_t seed = 0;

  int NumSamples() const { return static_cast<int>(ids.size()); }
  EmbeddingTable ToTable() const { return EmbeddingTable(ids, embeddings); }
};

/**
   Samples `num_speakers * samples_per_speaker` embeddings from the model.
   Sample i belongs to speaker i / samples_per_speaker.  Draw order: all
   speaker latents, then all condition latents (condition 1 first), then
   per sample the condition labels (uniform-random assignment only) followed
   by the noise.
 */
SyntheticDataset SampleDataset(const ModelParams &model, int num_speakers,
                               const std::vector<int> &condition_cardinalities,
                               int samples_per_speaker,
                               LabelAssignment assignment, std::uint64_t seed);

/// One (enroll, test) pair: tied latents are drawn once and shared, untied
/// ones and the noise are drawn per side.
std::pair<Eigen::VectorXd, Eigen::VectorXd> SampleTrialPair(
    const ModelParams &model, const HypothesisVector &h, Rng *rng);
std::pair<Eigen::VectorXd, Eigen::VectorXd> SampleTrialPair(
    const ModelParams &model, const HypothesisVector &h, std::uint64_t seed);

struct Benchmark {
  EmbeddingTable enroll;
  EmbeddingTable test;
  std::vector<Trial> trials;  // is_target always set.
};

/// Target trials first, then nontargets.  Each trial draws its condition
/// hypothesis from the branch priors and then a pair from SampleTrialPair.
Benchmark MakeBenchmark(const ModelParams &model, const PriorConfig &priors,
                        int num_target, int num_nontarget, std::uint64_t seed);

/// Random model for tests and tooling.  Loadings have N(0, scale^2) entries,
/// the mean is N(0, I), and the noise covariance is B B^T / d + 0.5 I with
/// B standard normal (or a diagonal in [0.5, 2) when `diagonal_precision`).
ModelParams RandomModel(int dim, int speaker_rank,
                        const std::vector<int> &condition_ranks, Rng *rng,
                        double speaker_scale = 1.0,
                        double condition_scale = 1.0,
                        bool diagonal_precision = false);

}  // namespace jplda

#endif  // JPLDA_SYNTH_H_
