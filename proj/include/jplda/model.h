// jplda/model.h

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

#ifndef JPLDA_MODEL_H_
#define JPLDA_MODEL_H_

#include <vector>

#include <Eigen/Dense>

#include "jplda/error.h"

namespace jplda {

/**
   Parameters of a multi-condition joint PLDA model.  A sample m_i is
   generated as

     m_i = mean + V y_{s_i} + sum_j U_j x^j_{c_{ji}} + eps_i,

   with y, x^j ~ N(0, I) drawn once per speaker / condition label and
   eps_i ~ N(0, D^{-1}).  "precision" holds D (not its inverse).

   Any of the loading matrices may have zero columns (R_y = 0 is allowed);
   condition subspaces must have at least one column.
 */
struct ModelParams {
  Eigen::VectorXd mean;
  Eigen::MatrixXd speaker_loadings;                 // V, d x R_y
  std::vector<Eigen::MatrixXd> condition_loadings;  // U_j, d x R_xj
  Eigen::MatrixXd precision;                        // D, d x d

  int Dim() const { return static_cast<int>(mean.size()); }
  int NumConditions() const {
    return static_cast<int>(condition_loadings.size());
  }
  int SpeakerRank() const { return static_cast<int>(speaker_loadings.cols()); }
  int ConditionRank(int j) const {
    return static_cast<int>(condition_loadings[j].cols());
  }
  /// R_y + sum_j R_xj.
  int LatentDim() const;
  /// True when D has no off-diagonal entries; enables the diagonal fast path.
  bool HasDiagonalPrecision() const;
};

/// W = [V | U_1 | ... | U_N] and its column count.
struct StackedModel {
  Eigen::MatrixXd loadings;
  int latent_dim = 0;
};

/// Throws Error (kDimensionMismatch, kNotSymmetric, kNotPositiveDefinite)
/// if any structural invariant of the model fails.
void ValidateModel(const ModelParams &model);

StackedModel StackLoadings(const ModelParams &model);

/// Returns D * x, using only the diagonal when D is diagonal.
Eigen::MatrixXd ApplyPrecision(const ModelParams &model,
                               const Eigen::MatrixXd &x);

/// Standard PLDA baseline: condition variability is folded into the noise,
/// D' = (D^{-1} + sum_j U_j U_j^T)^{-1}, and the condition list is dropped.
ModelParams CollapseToPlda(const ModelParams &model);

/// Covariance of a single embedding, V V^T + sum_j U_j U_j^T + D^{-1}.
Eigen::MatrixXd TotalCovariance(const ModelParams &model);

}  // namespace jplda

#endif  // JPLDA_MODEL_H_
