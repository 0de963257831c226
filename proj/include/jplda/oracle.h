// jplda/oracle.h

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

#ifndef JPLDA_ORACLE_H_
#define JPLDA_ORACLE_H_

#include <vector>

#include <Eigen/Dense>

#include "jplda/hypothesis.h"
#include "jplda/model.h"

// Reference computations used to check the scoring code.  Everything here
// works with explicit covariance matrices and full normalization constants;
// none of it is meant to be fast, and none of it calls into scoring.h.

namespace jplda {
namespace oracle {

/// log N(x; mean, cov), via a Cholesky of cov.
double LogGaussianDensity(const Eigen::VectorXd &x, const Eigen::VectorXd &mean,
                          const Eigen::MatrixXd &cov);

/// Covariance of the stacked pair [m_E; m_T] under hypothesis h.
Eigen::MatrixXd MarginalCovariance(const ModelParams &model,
                                   const HypothesisVector &h);

/// log p(m_E, m_T | h) for raw embeddings.
double PairLogDensity(const ModelParams &model, const HypothesisVector &h,
                      const Eigen::VectorXd &enroll,
                      const Eigen::VectorXd &test);

/// Hypothesis-marginalized LLR from exact marginal densities.
double GaussianLlrOracle(const ModelParams &model, const PriorConfig &priors,
                         const Eigen::VectorXd &enroll,
                         const Eigen::VectorXd &test);

/// E[Z | m_E, m_T] with Z laid out as [Z_S; Z_E; Z_T] (tied blocks speaker
/// first then conditions ascending, likewise untied), from the joint
/// covariance of Z and the centred pair.
Eigen::VectorXd ConditionalLatentMean(const ModelParams &model,
                                      const HypothesisVector &h,
                                      const Eigen::VectorXd &enroll_centered,
                                      const Eigen::VectorXd &test_centered);

/// Matching conditional covariance Cov[Z | m_E, m_T].
Eigen::MatrixXd ConditionalLatentCovariance(const ModelParams &model,
                                            const HypothesisVector &h);

/// Latent variables of a labelled dataset: one speaker vector per speaker,
/// one vector per label of each condition, and per-sample assignments.
struct LabeledLatents {
  std::vector<Eigen::VectorXd> speakers;                 // y_s
  std::vector<std::vector<Eigen::VectorXd>> conditions;  // x^j_c, [j][c]
  std::vector<int> speaker_of;                           // s_i
  std::vector<std::vector<int>> condition_of;            // c_ji, [j][i]

  int NumSamples() const { return static_cast<int>(speaker_of.size()); }
  int NumConditions() const { return static_cast<int>(conditions.size()); }
  /// Throws kInvalidArgument on out-of-range labels or ragged shapes.
  void Validate() const;
  /// z_i = [y_{s_i}; x^1_{c_1i}; ...; x^N_{c_Ni}].
  Eigen::VectorXd StackedLatent(int sample) const;
};

/// sum_s log N(y_s; 0, I) + sum_j sum_c log N(x^j_c; 0, I).
double JointPriorLogPdf(const LabeledLatents &latents);

/// Same quantity written per sample, -1/2 sum_i z_i' P_i z_i plus constants,
/// where P_i weights each latent by one over its sample count.  Throws
/// kOrphanLatent if some latent is not referenced by any sample.
double PerSamplePriorLogPdf(const LabeledLatents &latents);

/// sum_i log N(m_i; mean + W z_i, D^{-1}); samples are rows.
double DataLogLikelihood(const Eigen::MatrixXd &samples,
                         const LabeledLatents &latents,
                         const ModelParams &model);

/// log density of the full joint Gaussian over (all latents, all samples),
/// built directly from the generative model.
double FullJointLogPdf(const Eigen::MatrixXd &samples,
                       const LabeledLatents &latents,
                       const ModelParams &model);

}  // namespace oracle
}  // namespace jplda

#endif  // JPLDA_ORACLE_H_
