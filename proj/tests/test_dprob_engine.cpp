// Copyright 2026 The dprob Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "dprob/dprob_engine.hpp"
#include "oracles/dense.hpp"
#include "test_util.hpp"

namespace dprob {
namespace {

KernelConfig kcfg(Index p, double lambda, double tau) {
  KernelConfig c;
  c.lambda = Eigen::VectorXd::Constant(p, lambda);
  c.tau = tau;
  return c;
}

TEST(KlAnalytic, MatchesClosedFormsOnDenseInputs) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd X = testutil::uniform_matrix(20, 2, rng);
  Eigen::VectorXd y = testutil::normal_vector(20, rng);
  y.array() += 3 * X.col(0).array();
  const KernelConfig c = kcfg(2, 0.4, 2.0);
  const ReferenceFit ref = fit_reference(X, y, c);
  const auto dref = oracle::dense_reference(oracle::naive_kernel(X, X, c.lambda, c.tau), y);
  for (const auto& m : enumerate_subsets(2)) {
    const KlEstimate e = estimate_kl(fit_candidate(X, y, m, ref), RefScalars::of(ref));
    const auto d = oracle::dense_scalars(oracle::dense_candidate_hat(X, {m.subset.begin(), m.subset.end()}), dref.H, y);
    EXPECT_NEAR(e.kl1, oracle::kl1_formula(d, dref, 20), 1e-10);
    EXPECT_NEAR(e.kl2, oracle::kl2_formula(d, dref, 20), 1e-10);
    EXPECT_NEAR(e.kl1 * 20, e.g1 + e.p1, 1e-10);
    EXPECT_NEAR(e.kl2 * 20, e.g2 + e.p2, 1e-10);
    EXPECT_NEAR(e.p1, (m.size() + 1) / 2.0, 1e-12);
    EXPECT_NEAR(e.p2, (m.size() + 1) * std::log(2.0) / 2.0, 1e-12);
  }
}

TEST(KlAnalytic, CollapsesWhenReferenceEqualsCandidate) {
  ModelFit f;
  f.trHj = 3;
  f.logdet_IplusHj = 3 * std::log(2.0);
  f.rssj = 7.5;
  f.qform_diff = 0;
  RefScalars r{3, 0, 7.5, 40};
  const FitPenalty a = kl1_analytic(f, r);
  EXPECT_NEAR(a.g, 20.0 * (3 + 2) / 38.0, 1e-12);
  EXPECT_EQ(a.p, 1.5);
}

TEST(KlAnalytic, Errors) {
  ModelFit f;
  f.rssj = 0;
  RefScalars r{1, 0, 1, 10};
  EXPECT_THROW(kl1_analytic(f, r), Error);
  f.rssj = 1;
  r.n = 2;
  EXPECT_THROW(kl2_analytic(f, r), InputError);
}

TEST(Evidence, Thresholds) {
  EXPECT_EQ(classify_evidence(std::log(1e-22)), Evidence::very_strong);
  EXPECT_EQ(classify_evidence(std::log(1.0 / 100)), Evidence::strong);
  EXPECT_EQ(classify_evidence(std::log(1.0 / 150)), Evidence::strong);
  EXPECT_EQ(classify_evidence(std::log(1.0 / 10)), Evidence::positive);
  EXPECT_EQ(classify_evidence(std::log(1.0 / 20)), Evidence::positive);
  EXPECT_EQ(classify_evidence(std::log(0.5)), Evidence::bare_mention);
  EXPECT_EQ(classify_evidence(std::log(1.0 / 3)), Evidence::bare_mention);
  EXPECT_STREQ(to_string(Evidence::very_strong), "very strong");
}

std::vector<KlEstimate> estimates(std::initializer_list<std::pair<double, double>> gp) {
  std::vector<KlEstimate> out;
  for (auto [g, p] : gp) {
    KlEstimate e;
    e.g1 = e.g2 = g;
    e.p1 = e.p2 = p;
    out.push_back(e);
  }
  return out;
}

TEST(MakeReport, SingleAndSymmetric) {
  const auto one = enumerate_subsets(1);
  const std::vector<CandidateModel> single{one[1]};
  const auto k1 = estimates({{60.0, 1.0}});
  const WeightReport r1 = make_report(single, k1, {"x"});
  EXPECT_EQ(r1.rows[0].cond_pi1, 1.0);
  EXPECT_EQ(r1.rows[0].log_pi1, -61.0);
  EXPECT_EQ(r1.rows[0].evidence, Evidence::very_strong);

  const auto k2 = estimates({{0.2, 0.5}, {0.2, 0.5}});
  const WeightReport r2 = make_report(one, k2, {"x"});
  EXPECT_EQ(r2.rows[0].cond_pi1, 0.5);
  EXPECT_EQ(r2.rows[1].cond_pi2, 0.5);
  EXPECT_EQ(r2.inclusion1[0], 0.5);
  EXPECT_EQ(r2.rows[0].evidence, Evidence::bare_mention);
  EXPECT_THROW(make_report(std::span<const CandidateModel>{}, std::span<const KlEstimate>{}, {}), InputError);
}

TEST(MakeReport, InclusionAndCsv) {
  const auto models = enumerate_subsets(2);
  const auto k = estimates({{5, 0.5}, {3, 1}, {4, 1}, {2.5, 1.5}});
  const WeightReport r = make_report(models, k, {"a", "b"});
  EXPECT_NEAR(r.inclusion1[0], r.rows[1].cond_pi1 + r.rows[3].cond_pi1, 1e-15);
  EXPECT_NEAR(r.inclusion1[1], r.rows[2].cond_pi1 + r.rows[3].cond_pi1, 1e-15);
  const std::string csv = report_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "model,log_pi1,log_pi2,cond_pi1,cond_pi2,evidence");
  EXPECT_NE(csv.find("\"a,b\""), std::string::npos);
  EXPECT_EQ(inclusion_csv(r).substr(0, 34), "covariate,inclusion_pi1,inclusion_");
  const auto j = to_json(r);
  EXPECT_EQ(j["models"].size(), 4U);
}

TEST(MakeReport, EvidenceFromChoice) {
  const auto models = enumerate_subsets(1);
  std::vector<KlEstimate> k(2);
  k[0].g1 = 10;  // pi1 = e^-10: very strong
  k[0].g2 = 0.5;  // pi2 = e^-0.5: bare mention
  k[1] = k[0];
  EXPECT_EQ(make_report(models, k, {"x"}, EstimatorChoice::kl1).rows[0].evidence, Evidence::very_strong);
  EXPECT_EQ(make_report(models, k, {"x"}, EstimatorChoice::kl2).rows[0].evidence, Evidence::bare_mention);
  EXPECT_EQ(make_report(models, k, {"x"}, EstimatorChoice::both).rows[0].evidence, Evidence::bare_mention);
}

TEST(FormatLogProbability, Underflow) {
  EXPECT_EQ(format_log_probability(std::log(1.65e-22)), "1.65e-22");
  EXPECT_EQ(format_log_probability(-2000.0), "2.58e-869");
  EXPECT_EQ(format_log_probability(0.0), "1.00e+0");
}

TEST(PenaltyDifferences, NestedFlatModels) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd X = testutil::uniform_matrix(30, 3, rng);
  const Eigen::VectorXd y = testutil::normal_vector(30, rng);
  const ReferenceFit ref = fit_reference(X, y, kcfg(3, 0.5, 1.0));
  const auto models = enumerate_subsets(3);
  const auto kls = model_kls(X, y, models, ref);
  for (std::size_t a = 0; a < models.size(); ++a)
    for (std::size_t b = 0; b < models.size(); ++b) {
      const double dp = static_cast<double>(models[a].size()) - static_cast<double>(models[b].size());
      EXPECT_NEAR(kls[b].p1 - kls[a].p1, -dp / 2, 1e-12);
      EXPECT_NEAR(kls[b].p2 - kls[a].p2, -std::log(2.0) * dp / 2, 1e-12);
    }
}

}  // namespace
}  // namespace dprob
