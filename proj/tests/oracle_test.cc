// tests/oracle_test.cc

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
#include <numbers>

#include "jplda/oracle.h"
#include "test_util.h"

using namespace jplda;
using namespace jplda::testing;
using namespace jplda::oracle;

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// Random labelled latents where every latent has at least one sample.
LabeledLatents RandomLatents(const ModelParams &m, Rng *rng, int max_speakers = 5,
                             int max_labels = 4, int max_samples = 20) {
  LabeledLatents lat;
  const int num_speakers = 1 + rng->UniformInt(max_speakers);
  for (int s = 0; s < num_speakers; ++s)
    lat.speakers.push_back(rng->GaussianVector(m.SpeakerRank()));
  std::vector<int> cardinality;
  for (int j = 0; j < m.NumConditions(); ++j) {
    cardinality.push_back(1 + rng->UniformInt(max_labels));
    lat.conditions.emplace_back();
    for (int c = 0; c < cardinality[j]; ++c)
      lat.conditions[j].push_back(rng->GaussianVector(m.ConditionRank(j)));
  }
  int max_card = num_speakers;
  for (int c : cardinality) max_card = std::max(max_card, c);
  const int num_samples = std::max(max_card, 1 + rng->UniformInt(max_samples));
  lat.condition_of.assign(m.NumConditions(), {});
  for (int i = 0; i < num_samples; ++i) {
    // The first max_card samples cover every label.
    lat.speaker_of.push_back(i < max_card ? i % num_speakers : rng->UniformInt(num_speakers));
    for (int j = 0; j < m.NumConditions(); ++j)
      lat.condition_of[j].push_back(i < max_card ? i % cardinality[j]
                                                 : rng->UniformInt(cardinality[j]));
  }
  return lat;
}

Eigen::MatrixXd SampleFrom(const ModelParams &m, const LabeledLatents &lat, Rng *rng) {
  const NoiseSampler noise(m);
  const Eigen::MatrixXd w = StackLoadings(m).loadings;
  Eigen::MatrixXd samples(lat.NumSamples(), m.Dim());
  for (int i = 0; i < lat.NumSamples(); ++i)
    samples.row(i) = (m.mean + w * lat.StackedLatent(i) + noise.Draw(rng)).transpose();
  return samples;
}

}  // namespace

TEST_CASE("Gaussian log density") {
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 2.0);
  const double expected = -0.5 * (4.0 / 3.0) - 0.5 * std::log(3.0) - 0.5 * kLog2Pi;
  CHECK(LogGaussianDensity(x, Eigen::VectorXd::Zero(1), Mat({{3}})) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("marginal covariance") {
  const ModelParams m = MakeModel(Mat({{1}}), {Mat({{2}})}, Mat({{1}}));
  SUBCASE("scalar, speaker tied, condition different") {
    CHECK(MaxAbsDiff(MarginalCovariance(m, {true, {false}}), Mat({{6, 1}, {1, 6}})) < 1e-15);
  }
  SUBCASE("nothing tied") {
    Rng rng(1);
    const ModelParams r = RandomModel(3, 2, {1, 2}, &rng);
    const Eigen::MatrixXd cov = MarginalCovariance(r, {false, {false, false}});
    CHECK(cov.topRightCorner(3, 3).isZero(0.0));
    CHECK(MaxAbsDiff(cov.topLeftCorner(3, 3), TotalCovariance(r)) < 1e-12);
  }
  SUBCASE("everything tied") {
    Rng rng(2);
    const ModelParams r = RandomModel(3, 2, {1, 2}, &rng);
    const Eigen::MatrixXd w = StackLoadings(r).loadings;
    const Eigen::MatrixXd cov = MarginalCovariance(r, {true, {true, true}});
    CHECK(MaxAbsDiff(cov.topRightCorner(3, 3), w * w.transpose()) < 1e-12);
  }
  SUBCASE("SPD for random models and hypotheses") {
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
      const ModelParams r = RandomSmallModel(&rng);
      for (bool spk : {true, false})
        for (const auto &h : EnumerateConditionHypotheses(r.NumConditions())) {
          const Eigen::MatrixXd cov = MarginalCovariance(r, {spk, h});
          CHECK(cov.isApprox(cov.transpose(), 0.0));
          CHECK(cov.llt().info() == Eigen::Success);
        }
    }
  }
}

TEST_CASE("oracle LLR basic properties") {
  Rng rng(4);
  for (int t = 0; t < 30; ++t) {
    ModelParams m = RandomSmallModel(&rng);
    PriorConfig priors = RandomPriors(m.NumConditions(), &rng);
    const Eigen::VectorXd e = rng.GaussianVector(m.Dim()), s = rng.GaussianVector(m.Dim());
    CHECK(std::abs(GaussianLlrOracle(m, priors, e, s) - GaussianLlrOracle(m, priors, s, e)) <
          1e-10);
    m.speaker_loadings.setZero();
    for (auto &c : priors.conditions) c.p_same_given_ds = c.p_same_given_ss;
    CHECK(std::abs(GaussianLlrOracle(m, priors, e, s)) < 1e-10);
  }
}

TEST_CASE("joint prior") {
  SUBCASE("one zero speaker latent") {
    LabeledLatents lat;
    lat.speakers = {Eigen::VectorXd::Zero(1)};
    lat.speaker_of = {0};
    CHECK(JointPriorLogPdf(lat) == doctest::Approx(-0.5 * kLog2Pi).epsilon(1e-15));
  }
  SUBCASE("two scalar speakers") {
    LabeledLatents lat;
    lat.speakers = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
    lat.speaker_of = {0, 1};
    CHECK(JointPriorLogPdf(lat) == doctest::Approx(-kLog2Pi - 1.0).epsilon(1e-15));
  }
}

TEST_CASE("per-sample prior") {
  SUBCASE("one sample equals the joint form") {
    LabeledLatents lat;
    lat.speakers = {Eigen::VectorXd::Constant(2, 0.7)};
    lat.speaker_of = {0};
    CHECK(PerSamplePriorLogPdf(lat) == doctest::Approx(JointPriorLogPdf(lat)).epsilon(1e-15));
  }
  SUBCASE("two samples sharing a scalar speaker") {
    LabeledLatents lat;
    lat.speakers = {Eigen::VectorXd::Constant(1, 2.0)};
    lat.speaker_of = {0, 0};
    // Each sample contributes -1/2 * (1/2) * 4 = -1.
    CHECK(PerSamplePriorLogPdf(lat) + 0.5 * kLog2Pi == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(JointPriorLogPdf(lat) + 0.5 * kLog2Pi == doctest::Approx(-2.0).epsilon(1e-15));
  }
  SUBCASE("orphan latent") {
    LabeledLatents lat;
    lat.speakers = {Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)};
    lat.speaker_of = {0, 0};
    try {
      PerSamplePriorLogPdf(lat);
      FAIL("expected OrphanLatent");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kOrphanLatent);
    }
  }
  SUBCASE("bad labels") {
    LabeledLatents lat;
    lat.speakers = {Eigen::VectorXd::Ones(1)};
    lat.speaker_of = {1};
    CHECK_THROWS_AS(JointPriorLogPdf(lat), Error);
  }
  SUBCASE("random labelled datasets agree with the joint form") {
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
      const ModelParams m = RandomSmallModel(&rng, 3, 3);
      const LabeledLatents lat = RandomLatents(m, &rng);
      CHECK(std::abs(PerSamplePriorLogPdf(lat) - JointPriorLogPdf(lat)) <= 1e-10);
    }
  }
}

TEST_CASE("data likelihood") {
  SUBCASE("samples at the mean with zero latents") {
    Rng rng(6);
    ModelParams m = RandomModel(3, 1, {1}, &rng);
    m.precision = Eigen::MatrixXd::Identity(3, 3);
    LabeledLatents lat;
    lat.speakers = {Eigen::VectorXd::Zero(1)};
    lat.conditions = {{Eigen::VectorXd::Zero(1)}};
    lat.speaker_of = {0, 0};
    lat.condition_of = {{0, 0}};
    Eigen::MatrixXd samples(2, 3);
    samples.row(0) = m.mean.transpose();
    samples.row(1) = m.mean.transpose();
    CHECK(DataLogLikelihood(samples, lat, m) == doctest::Approx(-3.0 * kLog2Pi).epsilon(1e-14));
  }
  SUBCASE("scalar precision 4") {
    const ModelParams m = MakeModel(Mat({{1}}), {}, Mat({{4}}));
    LabeledLatents lat;
    lat.speakers = {Eigen::VectorXd::Constant(1, 0.5)};
    lat.speaker_of = {0};
    const Eigen::MatrixXd samples = Mat({{0.5}});
    CHECK(DataLogLikelihood(samples, lat, m) ==
          doctest::Approx(0.5 * std::log(4.0) - 0.5 * kLog2Pi).epsilon(1e-14));
  }
  SUBCASE("likelihood times prior is the full joint density") {
    Rng rng(7);
    for (int t = 0; t < 100; ++t) {
      const ModelParams m = RandomSmallModel(&rng, 4, 2);
      const LabeledLatents lat = RandomLatents(m, &rng, 3, 3, 6);
      const Eigen::MatrixXd samples = SampleFrom(m, lat, &rng);
      const double decomposed = DataLogLikelihood(samples, lat, m) + JointPriorLogPdf(lat);
      CHECK(std::abs(decomposed - FullJointLogPdf(samples, lat, m)) <= 1e-8);
    }
  }
}
