// jplda/scoring.h

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

#ifndef JPLDA_SCORING_H_
#define JPLDA_SCORING_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "jplda/hypothesis.h"
#include "jplda/model.h"
#include "jplda/trials.h"

namespace jplda {

/*
   Closed-form scoring of single-enrollment / single-test trials.

   For a full hypothesis (speaker tied or not, plus one same/different flag
   per condition) the latent variables of the two samples are stacked as
   Z = [Z_S; Z_E; Z_T]: Z_S holds the latents shared by both sides, Z_E and
   Z_T the per-side copies of the untied ones.  With W_S / W_D the tied and
   untied loadings, the posterior of Z given (m_E, m_T) has precision

     K_E + K_T = [ 2 W_S'DW_S + I   W_S'DW_D       W_S'DW_D     ]
                 [ W_D'DW_S         W_D'DW_D + I   0            ]
                 [ W_D'DW_S         0              W_D'DW_D + I ]

   and linear term Phi = [W_S'D(m_E + m_T); W_D'D m_E; W_D'D m_T].  Bayes'
   rule evaluated at Z = 0 gives, up to a term shared by all hypotheses,

     Q(h) = 1/2 log|Sigma| + 1/2 Phi' Sigma Phi + log P(h | speaker branch)

   with Sigma = (K_E + K_T)^{-1}.  The LLR is the log-sum-exp of Q over
   the condition hypotheses of the same-speaker branch minus that of the
   different-speaker branch.

   All factorizations depend only on the model, so a ScoringSession computes
   the 2^(N+1) Cholesky factors once; per trial we only project the two
   embeddings onto W'D and do one triangular solve per hypothesis.
 */

struct HypothesisFactorization {
  HypothesisVector hypothesis;
  Partition partition;
  Eigen::MatrixXd chol;  // Lower-triangular L with L L' = K_E + K_T.
  double half_log_det_sigma = 0.0;  // -sum_i log L_ii.
  double log_prior_ss = 0.0;
  double log_prior_ds = 0.0;

  /// Prior of this condition hypothesis under its own speaker branch.
  double LogPrior() const {
    return hypothesis.speaker_tied ? log_prior_ss : log_prior_ds;
  }
  int Size() const { return partition.num_tied + 2 * partition.num_untied; }
};

struct PosteriorMoments {
  Eigen::VectorXd z_hat;
  Eigen::MatrixXd sigma;
};

/// The (N_S + 2 N_D)-square posterior precision K_E + K_T for `partition`.
Eigen::MatrixXd BuildKSum(const ModelParams &model, const Partition &partition);

/// Number of Cholesky factorizations of K_E + K_T performed by this process.
std::uint64_t CholeskyFactorizationCount();

class ScoringSession {
 public:
  /// Validates the model and factorizes all 2^(N+1) hypotheses.  Throws
  /// kFactorizationFailed if some K_E + K_T is not numerically SPD.
  ScoringSession(ModelParams model, PriorConfig priors);

  const ModelParams &model() const { return model_; }
  const StackedModel &stacked() const { return stacked_; }
  const PriorConfig &priors() const { return priors_; }
  int NumConditions() const { return model_.NumConditions(); }

  /// Ordered speaker-tied first, then by condition hypothesis index.
  const std::vector<HypothesisFactorization> &factorizations() const {
    return factorizations_;
  }
  const HypothesisFactorization &Factorization(
      bool speaker_tied, const ConditionHypothesis &h) const;

  /// D W, whose column blocks are D V, D U_1, ..., D U_N.
  const Eigen::MatrixXd &PrecisionTimesLoadings() const { return dw_; }

  /// W' D (m - mean) for a raw embedding m.
  Eigen::VectorXd Project(const Eigen::VectorXd &m) const;
  /// W' D m for an already centred embedding.
  Eigen::VectorXd ProjectCentered(const Eigen::VectorXd &centered) const;

  /// LLR from two outputs of Project().
  double LlrFromProjections(const Eigen::VectorXd &proj_enroll,
                            const Eigen::VectorXd &proj_test) const;

 private:
  ModelParams model_;
  PriorConfig priors_;
  StackedModel stacked_;
  Eigen::MatrixXd dw_;
  Eigen::MatrixXd dw_transpose_;
  std::vector<HypothesisFactorization> factorizations_;
};

inline ScoringSession PrecomputeSession(const ModelParams &model,
                                        const PriorConfig &priors) {
  return ScoringSession(model, priors);
}

/// Phi for centred inputs.
Eigen::VectorXd ComputePhi(const ScoringSession &session,
                           const HypothesisVector &h,
                           const Eigen::VectorXd &enroll,
                           const Eigen::VectorXd &test);

/// Q(h) for centred inputs; -infinity when the hypothesis prior is zero.
double QTerm(const ScoringSession &session, bool speaker_tied,
             const ConditionHypothesis &h, const Eigen::VectorXd &enroll,
             const Eigen::VectorXd &test);

/// Log-likelihood ratio for raw (uncentred) embeddings.  Throws
/// kAllHypothesesExcluded if either branch has no hypothesis with nonzero
/// prior.
double Llr(const ScoringSession &session, const Eigen::VectorXd &enroll,
           const Eigen::VectorXd &test);

/// Posterior mean and covariance of Z for centred inputs.
PosteriorMoments ComputePosteriorMoments(const ScoringSession &session,
                                         bool speaker_tied,
                                         const ConditionHypothesis &h,
                                         const Eigen::VectorXd &enroll,
                                         const Eigen::VectorXd &test);

/// One LLR per trial, in trial order.  Trials are split into contiguous
/// chunks across `num_threads` workers; the result does not depend on the
/// thread count.  Throws kUnknownId before any scoring if an id is missing.
std::vector<double> ScoreTrials(const ScoringSession &session,
                                const EmbeddingTable &enroll,
                                const EmbeddingTable &test,
                                const std::vector<Trial> &trials,
                                int num_threads = 1);

/// log sum exp(q_same) - log sum exp(q_diff): the LLR given the Q terms of
/// both speaker branches.  Throws kAllHypothesesExcluded if either branch
/// is entirely -infinity.
double BranchLlr(const std::vector<double> &q_same,
                 const std::vector<double> &q_diff);

/// Numerically stable log(sum(exp(x))), skipping -infinity entries.  Returns
/// -infinity if every entry is -infinity.
double LogSumExp(const std::vector<double> &values);

}  // namespace jplda

#endif  // JPLDA_SCORING_H_
