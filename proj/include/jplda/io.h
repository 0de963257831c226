// jplda/io.h

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

#ifndef JPLDA_IO_H_
#define JPLDA_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "jplda/hypothesis.h"
#include "jplda/model.h"
#include "jplda/synth.h"
#include "jplda/trials.h"

namespace jplda {

// Binary model file, all integers u32 and all floats IEEE-754 binary64,
// little-endian:
//
//   "JPLDA\0"  version(=1)  d  R_y  N  R_x1 ... R_xN
//   mean[d]  V[d x R_y]  U_1[d x R_x1] ... U_N[d x R_xN]  D[d x d]
//
// Matrices are row-major.  The payload must be exactly as long as the
// header implies.
inline constexpr char kModelMagic[6] = {'J', 'P', 'L', 'D', 'A', '\0'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::string SerializeModel(const ModelParams &model);
/// Throws kBadMagic, kVersionUnsupported, kTruncatedPayload or
/// kValidationFailed.
ModelParams DeserializeModel(std::string_view bytes);

void SaveModel(const std::string &path, const ModelParams &model);
ModelParams LoadModel(const std::string &path);

// Text formats.  Fields are tab separated, decimals always use '.', and
// parsing ignores the process locale.

/// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);
/// Fixed 17 significant digits.
std::string FormatScore(double value);
/// Whole-string parse; throws kParseError.
double ParseDouble(std::string_view text);

/// "id<TAB>v1<TAB>...<TAB>vd" per line.
EmbeddingTable ReadEmbeddingTable(std::istream &in);
EmbeddingTable ReadEmbeddingTable(const std::string &path);
void WriteEmbeddingTable(std::ostream &out, const EmbeddingTable &table);
void WriteEmbeddingTable(const std::string &path, const EmbeddingTable &table);

/// "enroll<TAB>test[<TAB>target|nontarget]" per line.
std::vector<Trial> ReadTrialList(std::istream &in);
std::vector<Trial> ReadTrialList(const std::string &path);
void WriteTrialList(std::ostream &out, const std::vector<Trial> &trials);
void WriteTrialList(const std::string &path, const std::vector<Trial> &trials);

/// Lines "condition.<j>.p_same_given_ss = <p>" / "..._ds = <p>", j from 1.
/// Blank lines and lines starting with '#' are skipped.  Conditions not
/// mentioned keep p = 0.5; j > num_conditions is an error.
PriorConfig ReadPriors(std::istream &in, int num_conditions);
PriorConfig ReadPriors(const std::string &path, int num_conditions);
void WritePriors(std::ostream &out, const PriorConfig &priors);

struct ScoreRow {
  std::string enroll_id;
  std::string test_id;
  double score = 0.0;
};

/// "enroll<TAB>test<TAB>score" with 17 significant digits.
void WriteScores(std::ostream &out, const std::vector<Trial> &trials,
                 const std::vector<double> &scores);
std::vector<ScoreRow> ReadScores(std::istream &in);
std::vector<ScoreRow> ReadScores(const std::string &path);

/// "id<TAB>speaker<TAB>c_1<TAB>...<TAB>c_N" for a synthetic dataset.
void WriteLabels(std::ostream &out, const SyntheticDataset &data);

struct LabelRow {
  std::string id;
  int speaker = 0;
  std::vector<int> conditions;
};
std::vector<LabelRow> ReadLabels(std::istream &in);

}  // namespace jplda

#endif  // JPLDA_IO_H_
