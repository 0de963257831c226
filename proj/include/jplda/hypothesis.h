// jplda/hypothesis.h

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

#ifndef JPLDA_HYPOTHESIS_H_
#define JPLDA_HYPOTHESIS_H_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "jplda/model.h"

namespace jplda {

/// One condition hypothesis h: entry j is true when condition j is assumed
/// to be the same on both sides of the trial.
using ConditionHypothesis = std::vector<bool>;

/// Full trial hypothesis: speaker same/different plus one flag per condition.
struct HypothesisVector {
  bool speaker_tied = false;
  ConditionHypothesis condition_tied;

  bool operator==(const HypothesisVector &other) const = default;
};

struct ConditionPrior {
  double p_same_given_ss = 0.5;
  double p_same_given_ds = 0.5;
};

struct PriorConfig {
  std::vector<ConditionPrior> conditions;

  /// Every condition at p = 0.5 under both speaker hypotheses.
  static PriorConfig Uniform(int num_conditions);
  /// Throws kInvalidArgument if any probability is outside [0, 1].
  void Validate() const;
};

/// All 2^N condition hypotheses, in binary counting order with condition 1
/// as the most significant digit and "same" counting as 0.  For N = 2 this
/// is (S,S), (S,D), (D,S), (D,D).
std::vector<ConditionHypothesis> EnumerateConditionHypotheses(int num_conditions);

/// Position of h in EnumerateConditionHypotheses order.
std::size_t ConditionHypothesisIndex(const ConditionHypothesis &h);

/// log P(h | H_SS) or log P(h | H_DS), selected by h.speaker_tied.  Returns
/// -infinity when any per-condition factor is zero.
double HypothesisLogPrior(const HypothesisVector &h, const PriorConfig &priors);

/// Identifies which latent block a group of columns in W_S / W_D came from.
struct FactorSlot {
  int factor = 0;       // 0 = speaker, j >= 1 = condition j.
  int source_col = 0;   // First column in the stacked W.
  int target_col = 0;   // First column in W_S or W_D.
  int rank = 0;
};

/// Column split of W into tied (W_S) and untied (W_D) loadings.  Blocks are
/// always ordered speaker first, then conditions ascending.
struct Partition {
  Eigen::MatrixXd tied;
  Eigen::MatrixXd untied;
  int num_tied = 0;
  int num_untied = 0;
  std::vector<FactorSlot> tied_slots;
  std::vector<FactorSlot> untied_slots;
};

Partition PartitionFactors(const ModelParams &model, const HypothesisVector &h);

/// diag(0.5 I_{num_tied}, I_{num_untied}).
Eigen::DiagonalMatrix<double, Eigen::Dynamic> BuildPMatrix(int num_tied,
                                                           int num_untied);

}  // namespace jplda

#endif  // JPLDA_HYPOTHESIS_H_
