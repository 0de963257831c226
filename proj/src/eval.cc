// src/eval.cc

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

#include "jplda/eval.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace jplda {

namespace {

void CheckShape(const ScoredTrials &trials) {
  if (trials.scores.size() != trials.is_target.size())
    throw Error(ErrorCode::kDimensionMismatch,
                "scores and labels differ in length");
}

}  // namespace

double EqualErrorRate(const ScoredTrials &trials) {
  CheckShape(trials);
  const std::size_t n = trials.scores.size();
  const auto num_target = static_cast<std::size_t>(
      std::count(trials.is_target.begin(), trials.is_target.end(), true));
  const std::size_t num_nontarget = n - num_target;
  if (num_target == 0 || num_nontarget == 0)
    throw Error(ErrorCode::kMissingClass,
                "EER needs both target and nontarget trials");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return trials.scores[a] < trials.scores[b];
  });

  double prev_miss = 0.0, prev_fa = 1.0;
  std::size_t misses = 0, false_alarms = num_nontarget;
  for (std::size_t i = 0; i < n;) {
    const double threshold = trials.scores[order[i]];
    for (; i < n && trials.scores[order[i]] == threshold; ++i) {
      if (trials.is_target[order[i]])
        ++misses;
      else
        --false_alarms;
    }
    const double miss = static_cast<double>(misses) / num_target;
    const double fa = static_cast<double>(false_alarms) / num_nontarget;
    if (miss >= fa) {
      // Crossing lies on the segment (prev_miss, prev_fa) -> (miss, fa).
      const double denom = (miss - prev_miss) - (fa - prev_fa);
      const double alpha = denom > 0.0 ? (prev_fa - prev_miss) / denom : 0.0;
      return prev_miss + alpha * (miss - prev_miss);
    }
    prev_miss = miss;
    prev_fa = fa;
  }
  return prev_miss;  // Unreachable: the last point is (1, 0).
}

double CalibrationIdentity(const ScoredTrials &trials) {
  CheckShape(trials);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < trials.scores.size(); ++i) {
    if (trials.is_target[i]) continue;
    sum += std::exp(trials.scores[i]);
    ++count;
  }
  if (count == 0)
    throw Error(ErrorCode::kMissingClass, "no nontarget trials");
  return sum / static_cast<double>(count);
}

}  // namespace jplda
