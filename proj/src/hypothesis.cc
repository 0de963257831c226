// src/hypothesis.cc

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

#include "jplda/hypothesis.h"

#include <cmath>
#include <limits>
#include <string>

namespace jplda {

PriorConfig PriorConfig::Uniform(int num_conditions) {
  PriorConfig priors;
  priors.conditions.resize(num_conditions);
  return priors;
}

void PriorConfig::Validate() const {
  for (std::size_t j = 0; j < conditions.size(); ++j) {
    for (double p : {conditions[j].p_same_given_ss,
                     conditions[j].p_same_given_ds}) {
      if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::kInvalidArgument,
                    "prior for condition " + std::to_string(j + 1) +
                        " outside [0,1]: " + std::to_string(p));
    }
  }
}

std::vector<ConditionHypothesis> EnumerateConditionHypotheses(
    int num_conditions) {
  if (num_conditions < 0)
    throw Error(ErrorCode::kInvalidArgument, "negative condition count");
  const std::size_t count = std::size_t{1} << num_conditions;
  std::vector<ConditionHypothesis> out;
  out.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    ConditionHypothesis h(num_conditions);
    for (int j = 0; j < num_conditions; ++j) {
      const int bit = num_conditions - 1 - j;
      h[j] = ((code >> bit) & 1u) == 0;  // 0 = same.
    }
    out.push_back(std::move(h));
  }
  return out;
}

std::size_t ConditionHypothesisIndex(const ConditionHypothesis &h) {
  std::size_t code = 0;
  for (bool same : h) code = (code << 1) | (same ? 0u : 1u);
  return code;
}

double HypothesisLogPrior(const HypothesisVector &h,
                          const PriorConfig &priors) {
  if (h.condition_tied.size() != priors.conditions.size())
    throw Error(ErrorCode::kDimensionMismatch,
                "hypothesis has " + std::to_string(h.condition_tied.size()) +
                    " conditions, priors have " +
                    std::to_string(priors.conditions.size()));
  double total = 0.0;
  for (std::size_t j = 0; j < h.condition_tied.size(); ++j) {
    const ConditionPrior &c = priors.conditions[j];
    const double p_same =
        h.speaker_tied ? c.p_same_given_ss : c.p_same_given_ds;
    const double p = h.condition_tied[j] ? p_same : 1.0 - p_same;
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    total += std::log(p);
  }
  return total;
}

Partition PartitionFactors(const ModelParams &model,
                           const HypothesisVector &h) {
  if (static_cast<int>(h.condition_tied.size()) != model.NumConditions())
    throw Error(ErrorCode::kDimensionMismatch,
                "hypothesis length does not match model condition count");
  Partition part;
  const int num_factors = 1 + model.NumConditions();
  int source = 0;
  for (int f = 0; f < num_factors; ++f) {
    const int rank = f == 0 ? model.SpeakerRank() : model.ConditionRank(f - 1);
    const bool tied = f == 0 ? h.speaker_tied : h.condition_tied[f - 1];
    if (tied) {
      part.tied_slots.push_back({f, source, part.num_tied, rank});
      part.num_tied += rank;
    } else {
      part.untied_slots.push_back({f, source, part.num_untied, rank});
      part.num_untied += rank;
    }
    source += rank;
  }

  auto loadings = [&](int f) -> const Eigen::MatrixXd & {
    return f == 0 ? model.speaker_loadings : model.condition_loadings[f - 1];
  };
  part.tied.resize(model.Dim(), part.num_tied);
  for (const FactorSlot &s : part.tied_slots)
    part.tied.middleCols(s.target_col, s.rank) = loadings(s.factor);
  part.untied.resize(model.Dim(), part.num_untied);
  for (const FactorSlot &s : part.untied_slots)
    part.untied.middleCols(s.target_col, s.rank) = loadings(s.factor);
  return part;
}

Eigen::DiagonalMatrix<double, Eigen::Dynamic> BuildPMatrix(int num_tied,
                                                           int num_untied) {
  if (num_tied < 0 || num_untied < 0)
    throw Error(ErrorCode::kInvalidArgument, "negative block size");
  Eigen::VectorXd diag(num_tied + num_untied);
  diag.head(num_tied).setConstant(0.5);
  diag.tail(num_untied).setOnes();
  return Eigen::DiagonalMatrix<double, Eigen::Dynamic>(diag);
}

}  // namespace jplda
