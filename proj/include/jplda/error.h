// jplda/error.h

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

#ifndef JPLDA_ERROR_H_
#define JPLDA_ERROR_H_

#include <stdexcept>
#include <string>

namespace jplda {

enum class ErrorCode {
  kDimensionMismatch,
  kNotSymmetric,
  kNotPositiveDefinite,
  kFactorizationFailed,
  kAllHypothesesExcluded,
  kUnknownId,
  kOrphanLatent,
  kMissingClass,
  kBadMagic,
  kVersionUnsupported,
  kTruncatedPayload,
  kValidationFailed,
  kParseError,
  kInvalidArgument,
  kIoError,
};

const char *ErrorCodeName(ErrorCode code);

/// All library failures are reported through this exception; callers that
/// need to branch on the failure kind inspect code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jplda

#endif  // JPLDA_ERROR_H_
