// tests/hypothesis_test.cc

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

#include <cmath>
#include <limits>
#include <set>

#include "jplda/hypothesis.h"
#include "test_util.h"

using namespace jplda;
using namespace jplda::testing;

namespace {
constexpr bool S = true;
constexpr bool D = false;
const double kNegInf = -std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("enumerate condition hypotheses") {
  SUBCASE("N=2 in binary counting order") {
    const auto hs = EnumerateConditionHypotheses(2);
    REQUIRE(hs.size() == 4);
    CHECK(hs[0] == ConditionHypothesis{S, S});
    CHECK(hs[1] == ConditionHypothesis{S, D});
    CHECK(hs[2] == ConditionHypothesis{D, S});
    CHECK(hs[3] == ConditionHypothesis{D, D});
  }
  SUBCASE("N=0 has one empty hypothesis") {
    const auto hs = EnumerateConditionHypotheses(0);
    REQUIRE(hs.size() == 1);
    CHECK(hs[0].empty());
  }
  SUBCASE("N=3 gives 8 distinct vectors, indexable") {
    const auto hs = EnumerateConditionHypotheses(3);
    CHECK(hs.size() == 8);
    CHECK(std::set<ConditionHypothesis>(hs.begin(), hs.end()).size() == 8);
    for (std::size_t i = 0; i < hs.size(); ++i) {
      CHECK(hs[i].size() == 3);
      CHECK(ConditionHypothesisIndex(hs[i]) == i);
    }
    CHECK(EnumerateConditionHypotheses(3) == hs);
  }
  CHECK_THROWS_AS(EnumerateConditionHypotheses(-1), Error);
}

TEST_CASE("hypothesis log prior") {
  SUBCASE("uniform") {
    const PriorConfig priors = PriorConfig::Uniform(2);
    for (bool spk : {true, false})
      for (const auto &h : EnumerateConditionHypotheses(2))
        CHECK(HypothesisLogPrior({spk, h}, priors) ==
              doctest::Approx(std::log(0.25)).epsilon(1e-15));
  }
  SUBCASE("degenerate") {
    PriorConfig priors{{{1.0, 0.5}, {1.0, 0.5}}};
    CHECK(HypothesisLogPrior({true, {S, S}}, priors) == 0.0);
    CHECK(HypothesisLogPrior({true, {S, D}}, priors) == kNegInf);
    CHECK(HypothesisLogPrior({true, {D, S}}, priors) == kNegInf);
    CHECK(HypothesisLogPrior({true, {D, D}}, priors) == kNegInf);
  }
  SUBCASE("arithmetic, SS column") {
    PriorConfig priors{{{0.3, 0.9}, {0.8, 0.1}}};
    CHECK(HypothesisLogPrior({true, {S, D}}, priors) ==
          doctest::Approx(std::log(0.3 * 0.2)).epsilon(1e-14));
    CHECK(HypothesisLogPrior({false, {S, D}}, priors) ==
          doctest::Approx(std::log(0.9 * 0.9)).epsilon(1e-14));
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(HypothesisLogPrior({true, {S}}, PriorConfig::Uniform(2)), Error);
  }
}

TEST_CASE("priors sum to one within each speaker branch") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.UniformInt(5);
    const PriorConfig priors = RandomPriors(n, &rng);
    for (bool spk : {true, false}) {
      double total = 0.0;
      for (const auto &h : EnumerateConditionHypotheses(n))
        total += std::exp(HypothesisLogPrior({spk, h}, priors));
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("prior validation") {
  PriorConfig ok{{{0.0, 1.0}}};
  CHECK_NOTHROW(ok.Validate());
  PriorConfig bad{{{1.5, 0.5}}};
  CHECK_THROWS_AS(bad.Validate(), Error);
  PriorConfig nan{{{0.5, std::nan("")}}};
  CHECK_THROWS_AS(nan.Validate(), Error);
}

TEST_CASE("partition factors") {
  Rng rng(9);
  const ModelParams m = RandomModel(4, 2, {1, 3}, &rng);
  const Eigen::MatrixXd &v = m.speaker_loadings;
  const Eigen::MatrixXd &u1 = m.condition_loadings[0];
  const Eigen::MatrixXd &u2 = m.condition_loadings[1];

  SUBCASE("speaker tied, (S,D)") {
    const Partition p = PartitionFactors(m, {true, {S, D}});
    CHECK(p.num_tied == 3);
    CHECK(p.num_untied == 3);
    Eigen::MatrixXd expected_tied(4, 3);
    expected_tied << v, u1;
    CHECK(p.tied == expected_tied);
    CHECK(p.untied == u2);
    REQUIRE(p.tied_slots.size() == 2);
    CHECK(p.tied_slots[0].factor == 0);
    CHECK(p.tied_slots[1].factor == 1);
    CHECK(p.untied_slots[0].factor == 2);
    CHECK(p.untied_slots[0].source_col == 3);
  }
  SUBCASE("speaker untied, (D,D)") {
    const Partition p = PartitionFactors(m, {false, {D, D}});
    CHECK(p.num_tied == 0);
    CHECK(p.tied.cols() == 0);
    CHECK(p.untied == StackLoadings(m).loadings);
  }
  SUBCASE("speaker tied, (S,S)") {
    const Partition p = PartitionFactors(m, {true, {S, S}});
    CHECK(p.num_untied == 0);
    CHECK(p.tied == StackLoadings(m).loadings);
  }
}

TEST_CASE("partition is a rule-based reordering of the stacked columns") {
  Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const ModelParams m = RandomSmallModel(&rng);
    const Eigen::MatrixXd w = StackLoadings(m).loadings;
    for (bool spk : {true, false}) {
      for (const auto &h : EnumerateConditionHypotheses(m.NumConditions())) {
        const Partition p = PartitionFactors(m, {spk, h});
        CHECK(p.num_tied + p.num_untied == m.LatentDim());
        int seen_factor = -1;
        for (const auto &s : p.tied_slots) {
          CHECK(s.factor > seen_factor);
          seen_factor = s.factor;
          CHECK(p.tied.middleCols(s.target_col, s.rank) ==
                w.middleCols(s.source_col, s.rank));
        }
        seen_factor = -1;
        for (const auto &s : p.untied_slots) {
          CHECK(s.factor > seen_factor);
          seen_factor = s.factor;
          CHECK(p.untied.middleCols(s.target_col, s.rank) ==
                w.middleCols(s.source_col, s.rank));
        }
        CHECK(p.tied_slots.size() + p.untied_slots.size() ==
              static_cast<std::size_t>(1 + m.NumConditions()));
      }
    }
  }
}

TEST_CASE("P matrix") {
  CHECK(BuildPMatrix(2, 3).diagonal() ==
        (Eigen::VectorXd(5) << 0.5, 0.5, 1, 1, 1).finished());
  CHECK(BuildPMatrix(0, 4).toDenseMatrix() == Eigen::MatrixXd::Identity(4, 4));
  CHECK(BuildPMatrix(3, 0).toDenseMatrix() == 0.5 * Eigen::MatrixXd::Identity(3, 3));
  CHECK(BuildPMatrix(0, 0).diagonal().size() == 0);
}
