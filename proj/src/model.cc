// src/model.cc

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

#include "jplda/model.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace jplda {

namespace {

constexpr double kSymmetryTolerance = 1e-10;

std::string Shape(const Eigen::MatrixXd &m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

int ModelParams::LatentDim() const {
  int total = SpeakerRank();
  for (const auto &u : condition_loadings) total += static_cast<int>(u.cols());
  return total;
}

bool ModelParams::HasDiagonalPrecision() const {
  const Eigen::Index d = precision.rows();
  for (Eigen::Index c = 0; c < precision.cols(); ++c)
    for (Eigen::Index r = 0; r < d; ++r)
      if (r != c && precision(r, c) != 0.0) return false;
  return true;
}

void ValidateModel(const ModelParams &model) {
  const Eigen::Index d = model.mean.size();
  if (d < 1)
    throw Error(ErrorCode::kDimensionMismatch, "model dimension must be >= 1");
  if (model.speaker_loadings.rows() != d)
    throw Error(ErrorCode::kDimensionMismatch,
                "speaker loadings are " + Shape(model.speaker_loadings) +
                    ", expected " + std::to_string(d) + " rows");
  for (int j = 0; j < model.NumConditions(); ++j) {
    const auto &u = model.condition_loadings[j];
    if (u.rows() != d)
      throw Error(ErrorCode::kDimensionMismatch,
                  "condition " + std::to_string(j + 1) + " loadings are " +
                      Shape(u) + ", expected " + std::to_string(d) + " rows");
    if (u.cols() < 1)
      throw Error(ErrorCode::kDimensionMismatch,
                  "condition " + std::to_string(j + 1) +
                      " subspace must have rank >= 1");
  }
  if (model.precision.rows() != d || model.precision.cols() != d)
    throw Error(ErrorCode::kDimensionMismatch,
                "precision is " + Shape(model.precision) + ", expected " +
                    std::to_string(d) + "x" + std::to_string(d));
  if (!model.precision.allFinite())
    throw Error(ErrorCode::kNotPositiveDefinite, "precision is not finite");

  const double scale = std::max(1.0, model.precision.cwiseAbs().maxCoeff());
  const double asym =
      (model.precision - model.precision.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale)
    throw Error(ErrorCode::kNotSymmetric,
                "precision asymmetry " + std::to_string(asym));

  Eigen::LLT<Eigen::MatrixXd> llt(model.precision);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::kNotPositiveDefinite,
                "Cholesky of precision failed");
}

StackedModel StackLoadings(const ModelParams &model) {
  StackedModel stacked;
  stacked.latent_dim = model.LatentDim();
  stacked.loadings.resize(model.Dim(), stacked.latent_dim);
  Eigen::Index col = 0;
  stacked.loadings.middleCols(col, model.SpeakerRank()) =
      model.speaker_loadings;
  col += model.SpeakerRank();
  for (const auto &u : model.condition_loadings) {
    stacked.loadings.middleCols(col, u.cols()) = u;
    col += u.cols();
  }
  return stacked;
}

Eigen::MatrixXd ApplyPrecision(const ModelParams &model,
                               const Eigen::MatrixXd &x) {
  if (model.HasDiagonalPrecision())
    return model.precision.diagonal().asDiagonal() * x;
  return model.precision * x;
}

Eigen::MatrixXd TotalCovariance(const ModelParams &model) {
  const int d = model.Dim();
  Eigen::MatrixXd noise_cov =
      model.precision.llt().solve(Eigen::MatrixXd::Identity(d, d));
  Eigen::MatrixXd cov =
      model.speaker_loadings * model.speaker_loadings.transpose() + noise_cov;
  for (const auto &u : model.condition_loadings) cov += u * u.transpose();
  return 0.5 * (cov + cov.transpose());
}

ModelParams CollapseToPlda(const ModelParams &model) {
  if (model.NumConditions() == 0) return model;
  const int d = model.Dim();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);

  Eigen::MatrixXd within;
  if (model.HasDiagonalPrecision())
    within = model.precision.diagonal().cwiseInverse().asDiagonal();
  else
    within = model.precision.llt().solve(identity);
  for (const auto &u : model.condition_loadings) within += u * u.transpose();
  within = 0.5 * (within + within.transpose());

  Eigen::LLT<Eigen::MatrixXd> llt(within);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::kNotPositiveDefinite,
                "within-speaker covariance is not positive definite");
  ModelParams collapsed;
  collapsed.mean = model.mean;
  collapsed.speaker_loadings = model.speaker_loadings;
  collapsed.precision = llt.solve(identity);
  collapsed.precision =
      0.5 * (collapsed.precision + collapsed.precision.transpose());
  return collapsed;
}

}  // namespace jplda
