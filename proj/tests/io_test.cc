// tests/io_test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <limits>
#include <sstream>

#include "jplda/io.h"
#include "test_util.h"

using namespace jplda;
using namespace jplda::testing;

namespace {

ErrorCode DeserializeCode(std::string_view bytes) {
  try {
    DeserializeModel(bytes);
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected DeserializeModel to throw");
  return ErrorCode::kInvalidArgument;
}

bool BitEqual(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

void PutU32(std::string *bytes, std::size_t offset, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) (*bytes)[offset + k] = static_cast<char>((v >> (8 * k)) & 0xff);
}

}  // namespace

TEST_CASE("model round trip is bitwise exact") {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    ModelParams m = RandomSmallModel(&rng);
    m.mean = rng.GaussianVector(m.Dim());
    const ModelParams back = DeserializeModel(SerializeModel(m));
    CHECK(BitEqual(back.mean, m.mean));
    CHECK(BitEqual(back.speaker_loadings, m.speaker_loadings));
    REQUIRE(back.NumConditions() == m.NumConditions());
    for (int j = 0; j < m.NumConditions(); ++j)
      CHECK(BitEqual(back.condition_loadings[j], m.condition_loadings[j]));
    CHECK(BitEqual(back.precision, m.precision));
    CHECK(SerializeModel(back) == SerializeModel(m));
  }
}

TEST_CASE("model header layout") {
  Rng rng(2);
  const ModelParams m = RandomModel(4, 2, {1, 3}, &rng);
  const std::string bytes = SerializeModel(m);
  CHECK(std::memcmp(bytes.data(), "JPLDA\0", 6) == 0);
  CHECK(bytes.size() == 6 + 4 * 6 + 8 * (4 + 4 * 2 + 4 * 1 + 4 * 3 + 16));
  CHECK(bytes[6] == 1);
  CHECK(bytes[10] == 4);
}

TEST_CASE("model decode errors") {
  Rng rng(3);
  const ModelParams m = RandomModel(4, 1, {1}, &rng);
  const std::string good = SerializeModel(m);
  SUBCASE("bad magic") {
    std::string bad = good;
    bad[0] = 'X';
    CHECK(DeserializeCode(bad) == ErrorCode::kBadMagic);
    CHECK(DeserializeCode("JPL") == ErrorCode::kBadMagic);
  }
  SUBCASE("version") {
    std::string bad = good;
    PutU32(&bad, 6, 2);
    CHECK(DeserializeCode(bad) == ErrorCode::kVersionUnsupported);
  }
  SUBCASE("short payload") {
    CHECK(DeserializeCode(good.substr(0, good.size() - 8)) == ErrorCode::kTruncatedPayload);
    CHECK(DeserializeCode(good.substr(0, 12)) == ErrorCode::kTruncatedPayload);
    std::string huge = good;
    PutU32(&huge, 18, 0xffffffffu);
    CHECK(DeserializeCode(huge) == ErrorCode::kTruncatedPayload);
  }
  SUBCASE("trailing bytes") {
    CHECK(DeserializeCode(good + "x") == ErrorCode::kValidationFailed);
  }
  SUBCASE("invalid precision") {
    ModelParams bad = m;
    bad.precision(0, 0) = -5.0;
    std::string bytes = good;
    // Overwrite D(0,0), the first double of the final d*d block.
    const std::size_t offset = bytes.size() - 8 * 16;
    std::memcpy(bytes.data() + offset, &bad.precision(0, 0), 8);
    CHECK(DeserializeCode(bytes) == ErrorCode::kValidationFailed);
  }
}

TEST_CASE("save and load through files") {
  Rng rng(4);
  const ModelParams m = RandomModel(3, 1, {2}, &rng);
  const std::string path = "io_test_model.bin";
  SaveModel(path, m);
  CHECK(SerializeModel(LoadModel(path)) == SerializeModel(m));
  std::remove(path.c_str());
  try {
    LoadModel("does/not/exist.bin");
    FAIL("expected IoError");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kIoError);
  }
}

TEST_CASE("score text round-trips doubles exactly") {
  Rng rng(5);
  std::vector<double> values = {0.0, -0.0, 1.0, 0.1, 1e-300, 5e-324, 1.7976931348623157e308,
                                -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < 20000; ++i) {
    std::uint64_t bits = rng.NextU64();
    double v;
    std::memcpy(&v, &bits, 8);
    if (std::isfinite(v)) values.push_back(v);
    values.push_back(rng.Gaussian() * std::pow(10.0, rng.UniformInt(40) - 20));
  }
  for (double v : values) {
    const double back = ParseDouble(FormatScore(v));
    CHECK(std::memcmp(&back, &v, 8) == 0);
    const double shortest = ParseDouble(FormatDouble(v));
    CHECK(std::memcmp(&shortest, &v, 8) == 0);
  }
  CHECK(FormatScore(0.1) == "0.10000000000000001");
}

TEST_CASE("number parsing") {
  CHECK(ParseDouble("+2.5") == 2.5);
  CHECK(ParseDouble("-1e3") == -1000.0);
  CHECK_THROWS_AS(ParseDouble(""), Error);
  CHECK_THROWS_AS(ParseDouble("1,5"), Error);
  CHECK_THROWS_AS(ParseDouble("1.5x"), Error);
  CHECK_THROWS_AS(ParseDouble(" 1"), Error);
}

TEST_CASE("score file round trip") {
  Rng rng(6);
  std::vector<Trial> trials;
  std::vector<double> scores;
  for (int i = 0; i < 1000; ++i) {
    trials.push_back({"e" + std::to_string(i), "t" + std::to_string(i), std::nullopt});
    scores.push_back(rng.Gaussian() * 37.0);
  }
  std::stringstream ss;
  WriteScores(ss, trials, scores);
  const auto rows = ReadScores(ss);
  REQUIRE(rows.size() == scores.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].enroll_id == trials[i].enroll_id);
    CHECK(rows[i].test_id == trials[i].test_id);
    CHECK(std::memcmp(&rows[i].score, &scores[i], 8) == 0);
  }
  std::istringstream corrupt("a\tb\t1.0\nc\td\tnot-a-number\n");
  CHECK_THROWS_AS(ReadScores(corrupt), Error);
  std::istringstream short_row("a\t1.0\n");
  CHECK_THROWS_AS(ReadScores(short_row), Error);
  CHECK_THROWS_AS(WriteScores(ss, trials, {1.0}), Error);
}

TEST_CASE("embedding table") {
  SUBCASE("round trip") {
    Rng rng(7);
    Eigen::MatrixXd v(3, 4);
    for (int i = 0; i < v.size(); ++i) v.data()[i] = rng.Gaussian();
    const EmbeddingTable table({"a", "b", "c"}, v);
    std::stringstream ss;
    WriteEmbeddingTable(ss, table);
    const EmbeddingTable back = ReadEmbeddingTable(ss);
    CHECK(back.ids() == table.ids());
    CHECK(BitEqual(back.vectors(), v));
    CHECK(back.Find("b") == 1);
    CHECK(back.Find("z") == -1);
  }
  SUBCASE("CRLF and blank lines") {
    std::istringstream in("x\t1\t2\r\n\r\ny\t3\t4\r\n");
    const EmbeddingTable t = ReadEmbeddingTable(in);
    CHECK(t.Size() == 2);
    CHECK(t.vectors()(1, 1) == 4.0);
  }
  SUBCASE("errors") {
    std::istringstream ragged("x\t1\t2\ny\t3\n");
    CHECK_THROWS_AS(ReadEmbeddingTable(ragged), Error);
    std::istringstream dup("x\t1\nx\t2\n");
    CHECK_THROWS_AS(ReadEmbeddingTable(dup), Error);
    std::istringstream comma("x\t1,5\n");
    CHECK_THROWS_AS(ReadEmbeddingTable(comma), Error);
    std::istringstream empty("");
    CHECK(ReadEmbeddingTable(empty).Size() == 0);
  }
}

TEST_CASE("trial list") {
  const std::vector<Trial> trials = {{"a", "b", true}, {"c", "d", false}, {"e", "f", std::nullopt}};
  std::stringstream ss;
  WriteTrialList(ss, trials);
  const auto back = ReadTrialList(ss);
  REQUIRE(back.size() == 3);
  CHECK(back[0].is_target == std::optional<bool>(true));
  CHECK(back[1].is_target == std::optional<bool>(false));
  CHECK_FALSE(back[2].is_target.has_value());
  CHECK(back[2].test_id == "f");
  std::istringstream bad_label("a\tb\tmaybe\n");
  CHECK_THROWS_AS(ReadTrialList(bad_label), Error);
  std::istringstream one_field("a\n");
  CHECK_THROWS_AS(ReadTrialList(one_field), Error);
}

TEST_CASE("priors file") {
  SUBCASE("round trip") {
    const PriorConfig priors{{{0.25, 0.75}, {1.0, 0.0}}};
    std::stringstream ss;
    WritePriors(ss, priors);
    const PriorConfig back = ReadPriors(ss, 2);
    CHECK(back.conditions[0].p_same_given_ss == 0.25);
    CHECK(back.conditions[0].p_same_given_ds == 0.75);
    CHECK(back.conditions[1].p_same_given_ss == 1.0);
    CHECK(back.conditions[1].p_same_given_ds == 0.0);
  }
  SUBCASE("comments and defaults") {
    std::istringstream in("# channel\n\ncondition.2.p_same_given_ds = 0.1\n");
    const PriorConfig p = ReadPriors(in, 2);
    CHECK(p.conditions[0].p_same_given_ss == 0.5);
    CHECK(p.conditions[1].p_same_given_ds == 0.1);
  }
  SUBCASE("errors") {
    for (const char *text : {"condition.3.p_same_given_ss = 0.5\n", "condition.0.p_same_given_ss = 0.5\n",
                             "condition.1.p_same_given_ss = 1.5\n", "condition.1.p_other = 0.5\n",
                             "speaker = 0.5\n", "condition.1.p_same_given_ss 0.5\n"}) {
      std::istringstream in(text);
      CHECK_THROWS_AS(ReadPriors(in, 2), Error);
    }
  }
}

TEST_CASE("labels") {
  Rng rng(8);
  const ModelParams m = RandomModel(3, 1, {1, 1}, &rng);
  const SyntheticDataset data = SampleDataset(m, 3, {2, 5}, 2, LabelAssignment::kUniformRandom, 4);
  std::stringstream ss;
  WriteLabels(ss, data);
  const auto rows = ReadLabels(ss);
  REQUIRE(rows.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(rows[i].id == data.ids[i]);
    CHECK(rows[i].speaker == data.speaker_labels[i]);
    REQUIRE(rows[i].conditions.size() == 2);
    CHECK(rows[i].conditions[0] == data.condition_labels[0][i]);
    CHECK(rows[i].conditions[1] == data.condition_labels[1][i]);
  }
}
