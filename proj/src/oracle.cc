// src/oracle.cc

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

#include "jplda/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace jplda {
namespace oracle {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::MatrixXd NoiseCovariance(const ModelParams &model) {
  const int d = model.Dim();
  Eigen::LLT<Eigen::MatrixXd> llt(model.precision);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::kNotPositiveDefinite, "precision");
  Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(d, d));
  return 0.5 * (cov + cov.transpose());
}

const Eigen::MatrixXd &FactorLoadings(const ModelParams &model, int f) {
  return f == 0 ? model.speaker_loadings : model.condition_loadings[f - 1];
}

bool FactorTied(const HypothesisVector &h, int f) {
  return f == 0 ? h.speaker_tied : h.condition_tied[f - 1];
}

void CheckHypothesis(const ModelParams &model, const HypothesisVector &h) {
  if (static_cast<int>(h.condition_tied.size()) != model.NumConditions())
    throw Error(ErrorCode::kDimensionMismatch,
                "hypothesis length does not match model");
}

// Loadings of the enrollment and test sample onto Z = [Z_S; Z_E; Z_T].
void PairLoadings(const ModelParams &model, const HypothesisVector &h,
                  Eigen::MatrixXd *enroll, Eigen::MatrixXd *test) {
  const int num_factors = 1 + model.NumConditions();
  int tied = 0, untied = 0;
  for (int f = 0; f < num_factors; ++f)
    (FactorTied(h, f) ? tied : untied) +=
        static_cast<int>(FactorLoadings(model, f).cols());
  const int d = model.Dim(), n = tied + 2 * untied;
  *enroll = Eigen::MatrixXd::Zero(d, n);
  *test = Eigen::MatrixXd::Zero(d, n);
  int col = 0;
  for (int f = 0; f < num_factors; ++f) {
    if (!FactorTied(h, f)) continue;
    const auto &w = FactorLoadings(model, f);
    enroll->middleCols(col, w.cols()) = w;
    test->middleCols(col, w.cols()) = w;
    col += static_cast<int>(w.cols());
  }
  for (int f = 0; f < num_factors; ++f) {
    if (FactorTied(h, f)) continue;
    const auto &w = FactorLoadings(model, f);
    enroll->middleCols(col, w.cols()) = w;
    test->middleCols(col + untied, w.cols()) = w;
    col += static_cast<int>(w.cols());
  }
}

Eigen::VectorXd StackPair(const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
  Eigen::VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

double BranchLogPrior(const HypothesisVector &h, const PriorConfig &priors) {
  double total = 0.0;
  for (std::size_t j = 0; j < h.condition_tied.size(); ++j) {
    double p = h.speaker_tied ? priors.conditions[j].p_same_given_ss
                              : priors.conditions[j].p_same_given_ds;
    if (!h.condition_tied[j]) p = 1.0 - p;
    if (p == 0.0) return kNegInf;
    total += std::log(p);
  }
  return total;
}

double LogSumExpSkipping(const std::vector<double> &v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

double LogGaussianDensity(const Eigen::VectorXd &x, const Eigen::VectorXd &mean,
                          const Eigen::MatrixXd &cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::kNotPositiveDefinite, "covariance");
  const Eigen::VectorXd white =
      llt.matrixL().solve(Eigen::VectorXd(x - mean));
  const double log_det =
      2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
  return -0.5 * (white.squaredNorm() + log_det +
                 static_cast<double>(x.size()) * kLog2Pi);
}

Eigen::MatrixXd MarginalCovariance(const ModelParams &model,
                                   const HypothesisVector &h) {
  CheckHypothesis(model, h);
  const int d = model.Dim();
  Eigen::MatrixXd shared = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd total = NoiseCovariance(model);
  for (int f = 0; f <= model.NumConditions(); ++f) {
    const auto &w = FactorLoadings(model, f);
    const Eigen::MatrixXd outer = w * w.transpose();
    total += outer;
    if (FactorTied(h, f)) shared += outer;
  }
  Eigen::MatrixXd cov(2 * d, 2 * d);
  cov << total, shared, shared, total;
  return cov;
}

double PairLogDensity(const ModelParams &model, const HypothesisVector &h,
                      const Eigen::VectorXd &enroll,
                      const Eigen::VectorXd &test) {
  const Eigen::VectorXd x = StackPair(enroll, test);
  return LogGaussianDensity(x, StackPair(model.mean, model.mean),
                            MarginalCovariance(model, h));
}

double GaussianLlrOracle(const ModelParams &model, const PriorConfig &priors,
                         const Eigen::VectorXd &enroll,
                         const Eigen::VectorXd &test) {
  const int n = model.NumConditions();
  if (static_cast<int>(priors.conditions.size()) != n)
    throw Error(ErrorCode::kDimensionMismatch, "priors length");
  double branch[2];
  for (int b = 0; b < 2; ++b) {
    std::vector<double> terms;
    for (unsigned code = 0; code < (1u << n); ++code) {
      HypothesisVector h{b == 0, ConditionHypothesis(n)};
      for (int j = 0; j < n; ++j) h.condition_tied[j] = ((code >> j) & 1u) == 0;
      const double lp = BranchLogPrior(h, priors);
      terms.push_back(lp == kNegInf ? kNegInf
                                    : lp + PairLogDensity(model, h, enroll,
                                                          test));
    }
    branch[b] = LogSumExpSkipping(terms);
    if (branch[b] == kNegInf)
      throw Error(ErrorCode::kAllHypothesesExcluded, "oracle branch");
  }
  return branch[0] - branch[1];
}

Eigen::VectorXd ConditionalLatentMean(const ModelParams &model,
                                      const HypothesisVector &h,
                                      const Eigen::VectorXd &enroll_centered,
                                      const Eigen::VectorXd &test_centered) {
  CheckHypothesis(model, h);
  Eigen::MatrixXd a_enroll, a_test;
  PairLoadings(model, h, &a_enroll, &a_test);
  Eigen::MatrixXd cross(a_enroll.cols(), 2 * model.Dim());
  cross << a_enroll.transpose(), a_test.transpose();
  const Eigen::MatrixXd cov = MarginalCovariance(model, h);
  return cross * cov.llt().solve(StackPair(enroll_centered, test_centered));
}

Eigen::MatrixXd ConditionalLatentCovariance(const ModelParams &model,
                                            const HypothesisVector &h) {
  CheckHypothesis(model, h);
  Eigen::MatrixXd a_enroll, a_test;
  PairLoadings(model, h, &a_enroll, &a_test);
  const Eigen::Index n = a_enroll.cols();
  Eigen::MatrixXd cross(n, 2 * model.Dim());
  cross << a_enroll.transpose(), a_test.transpose();
  const Eigen::MatrixXd cov = MarginalCovariance(model, h);
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n) -
                        cross * cov.llt().solve(cross.transpose());
  return 0.5 * (out + out.transpose());
}

void LabeledLatents::Validate() const {
  if (static_cast<int>(condition_of.size()) != NumConditions())
    throw Error(ErrorCode::kInvalidArgument,
                "condition assignment count does not match condition count");
  for (int s : speaker_of)
    if (s < 0 || s >= static_cast<int>(speakers.size()))
      throw Error(ErrorCode::kInvalidArgument,
                  "speaker label " + std::to_string(s) + " out of range");
  for (int j = 0; j < NumConditions(); ++j) {
    if (static_cast<int>(condition_of[j].size()) != NumSamples())
      throw Error(ErrorCode::kInvalidArgument, "ragged condition labels");
    for (int c : condition_of[j])
      if (c < 0 || c >= static_cast<int>(conditions[j].size()))
        throw Error(ErrorCode::kInvalidArgument,
                    "condition label " + std::to_string(c) + " out of range");
  }
}

Eigen::VectorXd LabeledLatents::StackedLatent(int i) const {
  Eigen::Index size = speakers.empty() ? 0 : speakers[0].size();
  for (int j = 0; j < NumConditions(); ++j)
    size += conditions[j][condition_of[j][i]].size();
  Eigen::VectorXd z(size);
  Eigen::Index pos = 0;
  const auto &y = speakers[speaker_of[i]];
  z.segment(pos, y.size()) = y;
  pos += y.size();
  for (int j = 0; j < NumConditions(); ++j) {
    const auto &x = conditions[j][condition_of[j][i]];
    z.segment(pos, x.size()) = x;
    pos += x.size();
  }
  return z;
}

double JointPriorLogPdf(const LabeledLatents &latents) {
  latents.Validate();
  double total = 0.0;
  auto add = [&](const Eigen::VectorXd &v) {
    total += -0.5 * v.squaredNorm() - 0.5 * static_cast<double>(v.size()) * kLog2Pi;
  };
  for (const auto &y : latents.speakers) add(y);
  for (const auto &cond : latents.conditions)
    for (const auto &x : cond) add(x);
  return total;
}

double PerSamplePriorLogPdf(const LabeledLatents &latents) {
  latents.Validate();
  std::vector<int> speaker_count(latents.speakers.size(), 0);
  for (int s : latents.speaker_of) ++speaker_count[s];
  std::vector<std::vector<int>> condition_count(latents.NumConditions());
  for (int j = 0; j < latents.NumConditions(); ++j) {
    condition_count[j].assign(latents.conditions[j].size(), 0);
    for (int c : latents.condition_of[j]) ++condition_count[j][c];
  }
  for (int n : speaker_count)
    if (n == 0) throw Error(ErrorCode::kOrphanLatent, "speaker without samples");
  for (const auto &counts : condition_count)
    for (int n : counts)
      if (n == 0)
        throw Error(ErrorCode::kOrphanLatent, "condition label without samples");

  double quad = 0.0;
  for (int i = 0; i < latents.NumSamples(); ++i) {
    const Eigen::VectorXd z = latents.StackedLatent(i);
    // P_i as a diagonal over the blocks of z_i.
    Eigen::VectorXd p(z.size());
    Eigen::Index pos = 0;
    const Eigen::Index ry = latents.speakers[latents.speaker_of[i]].size();
    p.segment(pos, ry).setConstant(1.0 / speaker_count[latents.speaker_of[i]]);
    pos += ry;
    for (int j = 0; j < latents.NumConditions(); ++j) {
      const int c = latents.condition_of[j][i];
      const Eigen::Index rx = latents.conditions[j][c].size();
      p.segment(pos, rx).setConstant(1.0 / condition_count[j][c]);
      pos += rx;
    }
    quad += z.dot(p.asDiagonal() * z);
  }

  double num_latent_dims = 0.0;
  for (const auto &y : latents.speakers) num_latent_dims += y.size();
  for (const auto &cond : latents.conditions)
    for (const auto &x : cond) num_latent_dims += x.size();
  return -0.5 * quad - 0.5 * num_latent_dims * kLog2Pi;
}

double DataLogLikelihood(const Eigen::MatrixXd &samples,
                         const LabeledLatents &latents,
                         const ModelParams &model) {
  latents.Validate();
  if (samples.rows() != latents.NumSamples() || samples.cols() != model.Dim())
    throw Error(ErrorCode::kDimensionMismatch, "samples shape");
  const Eigen::MatrixXd w = StackLoadings(model).loadings;
  Eigen::LLT<Eigen::MatrixXd> llt(model.precision);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::kNotPositiveDefinite, "precision");
  const double log_det_precision =
      2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
  double total = 0.0;
  for (int i = 0; i < latents.NumSamples(); ++i) {
    const Eigen::VectorXd r =
        samples.row(i).transpose() - model.mean - w * latents.StackedLatent(i);
    total += -0.5 * r.dot(model.precision * r) + 0.5 * log_det_precision -
             0.5 * model.Dim() * kLog2Pi;
  }
  return total;
}

double FullJointLogPdf(const Eigen::MatrixXd &samples,
                       const LabeledLatents &latents,
                       const ModelParams &model) {
  latents.Validate();
  const int d = model.Dim(), num_samples = latents.NumSamples();
  if (samples.rows() != num_samples || samples.cols() != d)
    throw Error(ErrorCode::kDimensionMismatch, "samples shape");

  // Column offsets of each latent inside u = [y_1..y_S, x^1_1.., ..].
  std::vector<int> speaker_offset;
  int latent_dim = 0;
  for (const auto &y : latents.speakers) {
    speaker_offset.push_back(latent_dim);
    latent_dim += static_cast<int>(y.size());
  }
  std::vector<std::vector<int>> condition_offset(latents.NumConditions());
  for (int j = 0; j < latents.NumConditions(); ++j)
    for (const auto &x : latents.conditions[j]) {
      condition_offset[j].push_back(latent_dim);
      latent_dim += static_cast<int>(x.size());
    }

  // Stacked samples = A u + noise.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(num_samples * d, latent_dim);
  for (int i = 0; i < num_samples; ++i) {
    a.block(i * d, speaker_offset[latents.speaker_of[i]], d,
            model.SpeakerRank()) = model.speaker_loadings;
    for (int j = 0; j < latents.NumConditions(); ++j)
      a.block(i * d, condition_offset[j][latents.condition_of[j][i]], d,
              model.ConditionRank(j)) = model.condition_loadings[j];
  }
  const Eigen::MatrixXd noise = NoiseCovariance(model);
  const int total = latent_dim + num_samples * d;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(total, total);
  cov.topLeftCorner(latent_dim, latent_dim).setIdentity();
  cov.block(latent_dim, 0, num_samples * d, latent_dim) = a;
  cov.block(0, latent_dim, latent_dim, num_samples * d) = a.transpose();
  Eigen::MatrixXd data_cov = a * a.transpose();
  for (int i = 0; i < num_samples; ++i) data_cov.block(i * d, i * d, d, d) += noise;
  cov.bottomRightCorner(num_samples * d, num_samples * d) = data_cov;

  Eigen::VectorXd x(total), mean = Eigen::VectorXd::Zero(total);
  int pos = 0;
  for (const auto &y : latents.speakers) {
    x.segment(pos, y.size()) = y;
    pos += static_cast<int>(y.size());
  }
  for (const auto &cond : latents.conditions)
    for (const auto &v : cond) {
      x.segment(pos, v.size()) = v;
      pos += static_cast<int>(v.size());
    }
  for (int i = 0; i < num_samples; ++i) {
    x.segment(pos, d) = samples.row(i).transpose();
    mean.segment(pos, d) = model.mean;
    pos += d;
  }
  return LogGaussianDensity(x, mean, cov);
}

}  // namespace oracle
}  // namespace jplda
