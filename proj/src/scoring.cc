// src/scoring.cc

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

#include "jplda/scoring.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace jplda {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::atomic<std::uint64_t> g_cholesky_count{0};

// Scatters the rows/cols of a (ns + nd)-square matrix into the rows/cols of
// the (ns + 2 nd)-square target given by `untied_offset` for the untied part.
void AddEmbedded(const Eigen::MatrixXd &k, int ns, int nd, int untied_offset,
                 Eigen::MatrixXd *target) {
  auto map = [&](int i) { return i < ns ? i : untied_offset + (i - ns); };
  for (int c = 0; c < ns + nd; ++c)
    for (int r = 0; r < ns + nd; ++r) (*target)(map(r), map(c)) += k(r, c);
}

// Gathers Phi = [W_S'D(mE+mT); W_D'D mE; W_D'D mT] from the two projections
// W'D mE and W'D mT.
void GatherPhi(const Partition &part, const Eigen::VectorXd &proj_enroll,
               const Eigen::VectorXd &proj_test, Eigen::VectorXd *phi) {
  const int ns = part.num_tied, nd = part.num_untied;
  phi->resize(ns + 2 * nd);
  for (const FactorSlot &s : part.tied_slots)
    phi->segment(s.target_col, s.rank) =
        proj_enroll.segment(s.source_col, s.rank) +
        proj_test.segment(s.source_col, s.rank);
  for (const FactorSlot &s : part.untied_slots) {
    phi->segment(ns + s.target_col, s.rank) =
        proj_enroll.segment(s.source_col, s.rank);
    phi->segment(ns + nd + s.target_col, s.rank) =
        proj_test.segment(s.source_col, s.rank);
  }
}

// 1/2 log|Sigma| + 1/2 Phi' Sigma Phi + log prior.  `phi` is overwritten.
double QFromPhi(const HypothesisFactorization &f, Eigen::VectorXd *phi) {
  const double log_prior = f.LogPrior();
  if (log_prior == kNegInf) return kNegInf;
  f.chol.triangularView<Eigen::Lower>().solveInPlace(*phi);
  return f.half_log_det_sigma + 0.5 * phi->squaredNorm() + log_prior;
}

HypothesisFactorization Factorize(const ModelParams &model,
                                  const PriorConfig &priors,
                                  const HypothesisVector &h) {
  HypothesisFactorization f;
  f.hypothesis = h;
  f.partition = PartitionFactors(model, h);
  HypothesisVector as_ss = h, as_ds = h;
  as_ss.speaker_tied = true;
  as_ds.speaker_tied = false;
  f.log_prior_ss = HypothesisLogPrior(as_ss, priors);
  f.log_prior_ds = HypothesisLogPrior(as_ds, priors);

  Eigen::LLT<Eigen::MatrixXd> llt(BuildKSum(model, f.partition));
  g_cholesky_count.fetch_add(1, std::memory_order_relaxed);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::kFactorizationFailed,
                "K_E + K_T is not positive definite");
  f.chol = llt.matrixL();
  const Eigen::VectorXd diag = f.chol.diagonal();
  if (!diag.allFinite() || (diag.size() > 0 && diag.minCoeff() <= 0.0))
    throw Error(ErrorCode::kFactorizationFailed,
                "degenerate Cholesky factor of K_E + K_T");
  f.half_log_det_sigma = -diag.array().log().sum();
  return f;
}

}  // namespace

double LogSumExp(const std::vector<double> &values) {
  double max_value = kNegInf;
  for (double v : values) max_value = std::max(max_value, v);
  if (max_value == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : values)
    if (v != kNegInf) sum += std::exp(v - max_value);
  return max_value + std::log(sum);
}

double BranchLlr(const std::vector<double> &q_same,
                 const std::vector<double> &q_diff) {
  const double num = LogSumExp(q_same), den = LogSumExp(q_diff);
  if (num == kNegInf || den == kNegInf)
    throw Error(ErrorCode::kAllHypothesesExcluded,
                std::string("every hypothesis in the ") +
                    (num == kNegInf ? "same" : "different") +
                    "-speaker branch has zero prior");
  return num - den;
}

std::uint64_t CholeskyFactorizationCount() {
  return g_cholesky_count.load(std::memory_order_relaxed);
}

Eigen::MatrixXd BuildKSum(const ModelParams &model,
                          const Partition &partition) {
  const int ns = partition.num_tied, nd = partition.num_untied;
  Eigen::MatrixXd w(model.Dim(), ns + nd);
  w.leftCols(ns) = partition.tied;
  w.rightCols(nd) = partition.untied;
  // K = W'DW + P for one side; K_E and K_T place it on (S, E) and (S, T).
  Eigen::MatrixXd k = w.transpose() * ApplyPrecision(model, w);
  k += BuildPMatrix(ns, nd).toDenseMatrix();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(ns + 2 * nd, ns + 2 * nd);
  AddEmbedded(k, ns, nd, ns, &sum);
  AddEmbedded(k, ns, nd, ns + nd, &sum);
  return 0.5 * (sum + sum.transpose());
}

ScoringSession::ScoringSession(ModelParams model, PriorConfig priors)
    : model_(std::move(model)), priors_(std::move(priors)) {
  ValidateModel(model_);
  if (static_cast<int>(priors_.conditions.size()) != model_.NumConditions())
    throw Error(ErrorCode::kDimensionMismatch,
                "priors list " + std::to_string(priors_.conditions.size()) +
                    " conditions, model has " +
                    std::to_string(model_.NumConditions()));
  priors_.Validate();
  stacked_ = StackLoadings(model_);
  dw_ = ApplyPrecision(model_, stacked_.loadings);
  dw_transpose_ = dw_.transpose();

  const auto condition_hyps = EnumerateConditionHypotheses(NumConditions());
  factorizations_.reserve(2 * condition_hyps.size());
  for (bool speaker_tied : {true, false})
    for (const auto &h : condition_hyps)
      factorizations_.push_back(Factorize(model_, priors_, {speaker_tied, h}));
}

const HypothesisFactorization &ScoringSession::Factorization(
    bool speaker_tied, const ConditionHypothesis &h) const {
  if (static_cast<int>(h.size()) != NumConditions())
    throw Error(ErrorCode::kDimensionMismatch,
                "hypothesis length does not match model");
  const std::size_t per_branch = std::size_t{1} << NumConditions();
  return factorizations_[(speaker_tied ? 0 : per_branch) +
                         ConditionHypothesisIndex(h)];
}

Eigen::VectorXd ScoringSession::ProjectCentered(
    const Eigen::VectorXd &centered) const {
  if (centered.size() != model_.Dim())
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding has dimension " + std::to_string(centered.size()) +
                    ", model expects " + std::to_string(model_.Dim()));
  return dw_transpose_ * centered;
}

Eigen::VectorXd ScoringSession::Project(const Eigen::VectorXd &m) const {
  if (m.size() != model_.Dim())
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding has dimension " + std::to_string(m.size()) +
                    ", model expects " + std::to_string(model_.Dim()));
  Eigen::VectorXd centered = m - model_.mean;
  return dw_transpose_ * centered;
}

double ScoringSession::LlrFromProjections(
    const Eigen::VectorXd &proj_enroll,
    const Eigen::VectorXd &proj_test) const {
  const std::size_t per_branch = std::size_t{1} << NumConditions();
  std::vector<double> q_same(per_branch), q_diff(per_branch);
  Eigen::VectorXd phi;
  for (std::size_t i = 0; i < per_branch; ++i) {
    const auto &f_same = factorizations_[i];
    GatherPhi(f_same.partition, proj_enroll, proj_test, &phi);
    q_same[i] = QFromPhi(f_same, &phi);
    const auto &f_diff = factorizations_[per_branch + i];
    GatherPhi(f_diff.partition, proj_enroll, proj_test, &phi);
    q_diff[i] = QFromPhi(f_diff, &phi);
  }
  return BranchLlr(q_same, q_diff);
}

Eigen::VectorXd ComputePhi(const ScoringSession &session,
                           const HypothesisVector &h,
                           const Eigen::VectorXd &enroll,
                           const Eigen::VectorXd &test) {
  const auto &f = session.Factorization(h.speaker_tied, h.condition_tied);
  Eigen::VectorXd phi;
  GatherPhi(f.partition, session.ProjectCentered(enroll),
            session.ProjectCentered(test), &phi);
  return phi;
}

double QTerm(const ScoringSession &session, bool speaker_tied,
             const ConditionHypothesis &h, const Eigen::VectorXd &enroll,
             const Eigen::VectorXd &test) {
  const auto &f = session.Factorization(speaker_tied, h);
  Eigen::VectorXd phi = ComputePhi(session, {speaker_tied, h}, enroll, test);
  return QFromPhi(f, &phi);
}

double Llr(const ScoringSession &session, const Eigen::VectorXd &enroll,
           const Eigen::VectorXd &test) {
  return session.LlrFromProjections(session.Project(enroll),
                                    session.Project(test));
}

PosteriorMoments ComputePosteriorMoments(const ScoringSession &session,
                                         bool speaker_tied,
                                         const ConditionHypothesis &h,
                                         const Eigen::VectorXd &enroll,
                                         const Eigen::VectorXd &test) {
  const auto &f = session.Factorization(speaker_tied, h);
  const auto lower = f.chol.triangularView<Eigen::Lower>();
  PosteriorMoments out;
  out.z_hat = ComputePhi(session, {speaker_tied, h}, enroll, test);
  lower.solveInPlace(out.z_hat);
  lower.transpose().solveInPlace(out.z_hat);
  out.sigma = Eigen::MatrixXd::Identity(f.Size(), f.Size());
  lower.solveInPlace(out.sigma);
  lower.transpose().solveInPlace(out.sigma);
  out.sigma = 0.5 * (out.sigma + out.sigma.transpose());
  return out;
}

std::vector<double> ScoreTrials(const ScoringSession &session,
                                const EmbeddingTable &enroll,
                                const EmbeddingTable &test,
                                const std::vector<Trial> &trials,
                                int num_threads) {
  std::vector<std::pair<int, int>> rows(trials.size());
  for (std::size_t t = 0; t < trials.size(); ++t) {
    rows[t].first = enroll.Find(trials[t].enroll_id);
    if (rows[t].first < 0)
      throw Error(ErrorCode::kUnknownId,
                  "enrollment id '" + trials[t].enroll_id + "' not found");
    rows[t].second = test.Find(trials[t].test_id);
    if (rows[t].second < 0)
      throw Error(ErrorCode::kUnknownId,
                  "test id '" + trials[t].test_id + "' not found");
  }
  std::vector<double> scores(trials.size());
  if (trials.empty()) return scores;

  // Projections are computed once per referenced embedding.
  auto project_all = [&](const EmbeddingTable &table, bool enroll_side) {
    std::vector<char> used(table.Size(), 0);
    for (const auto &r : rows) used[enroll_side ? r.first : r.second] = 1;
    std::vector<Eigen::VectorXd> proj(table.Size());
    for (int i = 0; i < table.Size(); ++i)
      if (used[i]) proj[i] = session.Project(table.Row(i));
    return proj;
  };
  const auto enroll_proj = project_all(enroll, true);
  const auto test_proj = project_all(test, false);

  const std::size_t workers = std::clamp<std::size_t>(
      num_threads < 1 ? 1 : static_cast<std::size_t>(num_threads), 1,
      trials.size());
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t)
      scores[t] = session.LlrFromProjections(enroll_proj[rows[t].first],
                                             test_proj[rows[t].second]);
  };
  if (workers == 1) {
    run(0, trials.size());
    return scores;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  const std::size_t chunk = (trials.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(trials.size(), begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        run(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto &th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return scores;
}

}  // namespace jplda
