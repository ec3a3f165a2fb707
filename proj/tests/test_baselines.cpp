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

#include "dprob/baselines.hpp"
#include "oracles/quadrature.hpp"
#include "test_util.hpp"

namespace dprob {
namespace {

TEST(GPrior, NullModelIsZero) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd X = testutil::uniform_matrix(20, 2, rng);
  const Eigen::VectorXd y = testutil::normal_vector(20, rng);
  EXPECT_EQ(gprior_log_marginal(X, y, CandidateModel{}, GPriorMode::unit_info), 0.0);
  EXPECT_EQ(gprior_log_marginal(X, y, CandidateModel{}, GPriorMode::hyper_g), 0.0);
}

TEST(GPrior, NoSignalPenalty) {
  for (int p : {1, 2, 5})
    EXPECT_NEAR(gprior_log_bf(50, p, 0.0, 50.0), -(p / 2.0) * std::log(51.0), 1e-12);
}

TEST(GPrior, HyperGMatchesTrapezoidOracle) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd X = testutil::uniform_matrix(20, 1, rng);
  Eigen::VectorXd y = testutil::normal_vector(20, rng);
  y.array() += 1.5 * X.col(0).array();
  CandidateModel m;
  m.subset = {0};
  const double r2 = r_squared(X, y, m);
  ASSERT_GT(r2, 0.0);
  EXPECT_NEAR(gprior_log_marginal(X, y, m, GPriorMode::hyper_g), oracle::hyper_g_log_bf_trapezoid(20, 1, r2), 1e-8);
  // Also with a strong signal, where the integrand peaks at large g.
  y.array() += 20.0 * X.col(0).array();
  const double r2b = r_squared(X, y, m);
  EXPECT_NEAR(hyper_g_log_bf(20, 1, r2b), oracle::hyper_g_log_bf_trapezoid(20, 1, r2b), 1e-8);
}

TEST(GPrior, HyperGBracketedByIntegrand) {
  for (double r2 : {0.01, 0.3, 0.8}) {
    const auto& rule = hyper_g_rule();
    double lo = INFINITY, hi = -INFINITY;
    for (double g : rule.nodes) {
      lo = std::min(lo, gprior_log_bf(40, 3, r2, g));
      hi = std::max(hi, gprior_log_bf(40, 3, r2, g));
    }
    const double v = hyper_g_log_bf(40, 3, r2);
    EXPECT_GE(v, lo);
    EXPECT_LE(v, hi);
  }
}

TEST(GPrior, PerfectFitAndSmallN) {
  Eigen::MatrixXd X(5, 1);
  X << 0, 0.25, 0.5, 0.75, 1;
  const Eigen::VectorXd y = 2.0 * X.col(0);
  CandidateModel m;
  m.subset = {0};
  EXPECT_THROW(gprior_log_marginal(X, y, m, GPriorMode::unit_info), Error);
  Eigen::MatrixXd X3(3, 1);
  X3 << 0, 0.5, 1;
  EXPECT_THROW(gprior_log_marginal(X3, Eigen::Vector3d(1, 0, 2), m, GPriorMode::unit_info), InputError);
}

TEST(Bic, SymmetryAndSqrtN) {
  // Two covariates with identical fitted values give equal RSS.
  std::mt19937_64 rng(3);
  Eigen::MatrixXd X = testutil::uniform_matrix(50, 2, rng);
  X.col(1) = (1.0 - X.col(0).array()).matrix();
  const Eigen::VectorXd y = testutil::normal_vector(50, rng);
  const auto models = enumerate_subsets(2);
  const std::vector<CandidateModel> pair{models[1], models[2]};
  const BaselineWeights w = bic_weight_scores(X, y, pair);
  EXPECT_NEAR(w.probs(0), 0.5, 1e-10);
  // A covariate that leaves RSS unchanged: the null model wins by sqrt(n).
  Eigen::MatrixXd Z = X;
  Eigen::VectorXd yc = y;
  const double slope = (Z.col(0).array() - Z.col(0).mean()).matrix().dot(yc) /
                       (Z.col(0).array() - Z.col(0).mean()).matrix().squaredNorm();
  yc -= slope * (Z.col(0).array() - Z.col(0).mean()).matrix();  // residualise so R^2 = 0
  const std::vector<CandidateModel> nested{models[0], models[1]};
  const BaselineWeights wn = bic_weight_scores(Z, yc, nested);
  EXPECT_NEAR(wn.probs(0) / wn.probs(1), std::sqrt(50.0), 1e-8);
}

TEST(Bic, MatchesHandFormula) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd X = testutil::uniform_matrix(50, 2, rng);
  const Eigen::VectorXd y = testutil::normal_vector(50, rng) + 2.0 * X.col(1);
  const auto models = enumerate_subsets(2);
  const BaselineWeights w = bic_weight_scores(X, y, models);
  for (std::size_t m = 0; m < models.size(); ++m) {
    Eigen::MatrixXd D(50, models[m].size() + 1);
    D.col(0).setOnes();
    for (Index k = 0; k < models[m].size(); ++k) D.col(k + 1) = X.col(models[m].subset[k]);
    const Eigen::VectorXd beta = (D.transpose() * D).inverse() * D.transpose() * y;
    const double rss = (y - D * beta).squaredNorm();
    const double bic = 50 * std::log(rss / 50) + (models[m].size() + 2) * std::log(50.0);
    EXPECT_NEAR(w.log_scores(m), -bic / 2, 1e-10);
  }
  EXPECT_NEAR(w.probs.sum(), 1.0, 1e-12);
}

TEST(ExponentialWeights, PenaltyGapAndSingleModel) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd X = testutil::uniform_matrix(30, 1, rng);
  Eigen::VectorXd y = testutil::normal_vector(30, rng);
  const double slope = (X.col(0).array() - X.col(0).mean()).matrix().dot(y) /
                       (X.col(0).array() - X.col(0).mean()).matrix().squaredNorm();
  y -= slope * (X.col(0).array() - X.col(0).mean()).matrix();
  const auto models = enumerate_subsets(1);
  const BaselineWeights w = exponential_weights(X, y, models, 1.3);
  EXPECT_NEAR(w.probs(0) / w.probs(1), std::exp(0.5), 1e-9);
  const double rss = (y.array() - y.mean()).square().sum();
  EXPECT_NEAR(w.log_scores(0), -rss / (4 * 1.3) - 0.5 + 30 / 4.0, 1e-10);
  const std::vector<CandidateModel> one{models[1]};
  EXPECT_EQ(exponential_weights(X, y, one, 1.0).probs(0), 1.0);
  EXPECT_THROW(exponential_weights(X, y, one, 0.0), InputError);
}

TEST(Baselines, LocationShiftInvariance) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd X = testutil::uniform_matrix(40, 3, rng);
  const Eigen::VectorXd y = testutil::normal_vector(40, rng) + X.col(0) - X.col(2);
  const Eigen::VectorXd shifted = (y.array() + 123.4).matrix();
  const auto models = enumerate_subsets(3);
  for (GPriorMode mode : {GPriorMode::unit_info, GPriorMode::hyper_g}) {
    const auto a = gprior_weights(X, y, models, mode);
    const auto b = gprior_weights(X, shifted, models, mode);
    EXPECT_LE((a.probs - b.probs).cwiseAbs().maxCoeff(), 1e-8);
  }
  EXPECT_LE((bic_weight_scores(X, y, models).probs - bic_weight_scores(X, shifted, models).probs).cwiseAbs().maxCoeff(),
            1e-8);
  EXPECT_LE((exponential_weights(X, y, models, 1.0).probs - exponential_weights(X, shifted, models, 1.0).probs)
                .cwiseAbs()
                .maxCoeff(),
            1e-8);
}

TEST(Baselines, CsvHasMethodColumn) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd X = testutil::uniform_matrix(20, 1, rng);
  const Eigen::VectorXd y = testutil::normal_vector(20, rng);
  const auto models = enumerate_subsets(1);
  const std::vector<BaselineWeights> ws{bic_weight_scores(X, y, models)};
  const std::string csv = baselines_csv(ws, models, {"x"});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,model,log_score,prob");
  EXPECT_NE(csv.find("bic,null,"), std::string::npos);
}

}  // namespace
}  // namespace dprob
