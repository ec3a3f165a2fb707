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

#ifndef DPROB_AGGREGATE_HPP
#define DPROB_AGGREGATE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dprob/candidate_models.hpp"
#include "dprob/error.hpp"
#include "dprob/kernel_gp.hpp"

namespace dprob {

/// Posterior predictive mean of a candidate model at new rows. Under the
/// g-prior the least-squares coefficients are shrunk by g / (1 + g).
inline Eigen::VectorXd predict_linear(const Eigen::MatrixXd& X_train, const Eigen::VectorXd& y_train,
                                      const CandidateModel& model, const Eigen::MatrixXd& X_test) {
  if (X_train.rows() != y_train.size()) throw InputError("aggregate_predict", "train rows and response disagree");
  if (X_test.cols() != X_train.cols()) throw InputError("aggregate_predict", "test covariate count differs from train");
  const CandidateHat hat = candidate_hat(X_train, model);  // rank check
  const Eigen::VectorXd coef = design_matrix(X_train, model).colPivHouseholderQr().solve(y_train);
  return hat.shrinkage * (design_matrix(X_test, model) * coef);
}

/// GP conditional mean k_*' (K + I)^{-1} y using the reference fit's eigenbasis.
inline Eigen::VectorXd predict_reference(const Eigen::MatrixXd& X_train, const Eigen::VectorXd& y_train,
                                         const KernelConfig& cfg, const ReferenceFit& ref,
                                         const Eigen::MatrixXd& X_test) {
  if (ref.n != y_train.size()) throw InputError("aggregate_predict", "reference fit does not match the train set");
  const Eigen::ArrayXd scale = 1.0 / (1.0 + ref.eigvals.array());
  const Eigen::VectorXd alpha = ref.eigvecs * (scale * (ref.eigvecs.transpose() * y_train).array()).matrix();
  return cross_kernel(X_test, X_train, cfg) * alpha;
}

inline Eigen::VectorXd predict_reference(const Eigen::MatrixXd& X_train, const Eigen::VectorXd& y_train,
                                         const KernelConfig& cfg, const Eigen::MatrixXd& X_test) {
  return predict_reference(X_train, y_train, cfg, fit_reference(X_train, y_train, cfg), X_test);
}

inline double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
  if (pred.size() != truth.size() || pred.size() == 0)
    throw InputError("aggregate_predict", "rmse needs two equal-length non-empty vectors");
  return std::sqrt((pred - truth).squaredNorm() / static_cast<double>(pred.size()));
}

struct PredictionSet {
  Eigen::MatrixXd model_preds;  // models x test points
  Eigen::VectorXd reference_preds;
  std::vector<std::pair<std::string, Eigen::VectorXd>> weights;  // method -> weights
};

inline PredictionSet predict_all(const Eigen::MatrixXd& X_train, const Eigen::VectorXd& y_train,
                                 std::span<const CandidateModel> models, const Eigen::MatrixXd& X_test) {
  PredictionSet ps;
  ps.model_preds.resize(static_cast<Index>(models.size()), X_test.rows());
  for (std::size_t m = 0; m < models.size(); ++m)
    ps.model_preds.row(static_cast<Index>(m)) = predict_linear(X_train, y_train, models[m], X_test).transpose();
  return ps;
}

inline constexpr double kWeightSumTolerance = 1e-10;

inline Eigen::VectorXd aggregate(const PredictionSet& preds, const Eigen::VectorXd& weights) {
  if (weights.size() != preds.model_preds.rows())
    throw InputError("aggregate_predict", "weight count " + std::to_string(weights.size()) + " differs from model count " +
                                              std::to_string(preds.model_preds.rows()));
  const double sum = weights.sum();
  if (!(std::abs(sum - 1.0) <= kWeightSumTolerance))
    throw Error("aggregate_predict", "weights sum to " + std::to_string(sum) + ", not 1");
  return preds.model_preds.transpose() * weights;
}

/// 1 / sum w^2
inline double effective_models(const Eigen::VectorXd& weights) { return 1.0 / weights.squaredNorm(); }

/// Index of the largest weight; ties go to the smaller model, then the
/// lexicographically smaller subset.
inline std::size_t top_model(std::span<const CandidateModel> models, const Eigen::VectorXd& weights) {
  if (models.empty() || weights.size() != static_cast<Index>(models.size()))
    throw InputError("aggregate_predict", "weights and models disagree");
  std::size_t best = 0;
  for (std::size_t m = 1; m < models.size(); ++m) {
    const double w = weights(static_cast<Index>(m));
    const double wb = weights(static_cast<Index>(best));
    if (w > wb) {
      best = m;
    } else if (w == wb) {
      const auto& a = models[m].subset;
      const auto& b = models[best].subset;
      if (a.size() < b.size() || (a.size() == b.size() && a < b)) best = m;
    }
  }
  return best;
}

}  // namespace dprob

#endif  // DPROB_AGGREGATE_HPP
