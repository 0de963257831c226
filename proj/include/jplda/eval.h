// jplda/eval.h

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

#ifndef JPLDA_EVAL_H_
#define JPLDA_EVAL_H_

#include <vector>

#include "jplda/error.h"

namespace jplda {

struct ScoredTrials {
  std::vector<double> scores;
  std::vector<bool> is_target;
};

/**
   Equal error rate.  Thresholds are swept over the distinct score values
   (equal scores form a single threshold); at each step trials with score
   <= threshold are rejected.  Starting from (miss, fa) = (0, 1) this gives
   a monotone polyline of operating points, and the EER is where that
   polyline crosses miss == fa, found by linear interpolation between the
   two straddling points.  Throws kMissingClass unless both classes exist.
 */
double EqualErrorRate(const ScoredTrials &trials);

/// Mean of exp(score) over nontarget trials; 1 for true LLRs.  Throws
/// kMissingClass if there are no nontargets.
double CalibrationIdentity(const ScoredTrials &trials);

}  // namespace jplda

#endif  // JPLDA_EVAL_H_
