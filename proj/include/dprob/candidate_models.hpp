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

#ifndef DPROB_CANDIDATE_MODELS_HPP
#define DPROB_CANDIDATE_MODELS_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "dprob/error.hpp"
#include "dprob/kernel_gp.hpp"

namespace dprob {

enum class PriorMode { flat, gprior };

/// Coefficient prior beta ~ N(0, sigma^2 Sigma). Flat means Sigma^{-1} = 0;
/// the g-prior uses Sigma^{-1} = X_j'X_j / g on the whole coefficient vector,
/// intercept included.
struct CoefPrior {
  PriorMode mode = PriorMode::flat;
  double g = 0.0;

  static CoefPrior flat() { return {}; }
  static CoefPrior gprior(double g) {
    if (!(g > 0.0)) throw InputError("candidate_models", "g must be positive");
    return {PriorMode::gprior, g};
  }

  /// Every eigenvalue of H_j equals this on the column span of X_j.
  double shrinkage() const { return mode == PriorMode::flat ? 1.0 : g / (1.0 + g); }
};

/// A linear model with an implicit intercept plus the listed covariates (0-based).
struct CandidateModel {
  std::vector<Index> subset;
  CoefPrior prior{};

  Index size() const { return static_cast<Index>(subset.size()); }

  bool contains(Index c) const { return std::find(subset.begin(), subset.end(), c) != subset.end(); }

  void validate(Index p) const {
    std::set<Index> seen;
    for (Index c : subset) {
      if (c < 0 || c >= p) throw InputError("candidate_models", "covariate index " + std::to_string(c) + " out of range");
      if (!seen.insert(c).second)
        throw InputError("candidate_models", "covariate index " + std::to_string(c) + " listed twice");
    }
  }
};

inline constexpr Index kMaxEnumeratedCovariates = 20;

/// All 2^p subsets; model m contains covariate c iff bit c of m is set.
inline std::vector<CandidateModel> enumerate_subsets(Index p, CoefPrior prior = {}) {
  if (p < 1) throw InputError("candidate_models", "need at least one covariate to enumerate");
  if (p > kMaxEnumeratedCovariates)
    throw InputError("candidate_models", "refusing to enumerate 2^" + std::to_string(p) + " models (cap is 2^20)");
  const std::size_t count = std::size_t{1} << p;
  std::vector<CandidateModel> models(count);
  for (std::size_t m = 0; m < count; ++m) {
    for (Index c = 0; c < p; ++c)
      if ((m >> c) & 1U) models[m].subset.push_back(c);
    models[m].prior = prior;
  }
  return models;
}

/// "vh,humidity,temp"; the intercept-only model is "null".
inline std::string model_label(const CandidateModel& m, const std::vector<std::string>& names) {
  if (m.subset.empty()) return "null";
  std::string out;
  for (Index c : m.subset) {
    if (!out.empty()) out += ',';
    out += names.at(static_cast<std::size_t>(c));
  }
  return out;
}

inline CandidateModel model_from_label(const std::string& label, const std::vector<std::string>& names) {
  CandidateModel m;
  if (label == "null" || label.empty()) return m;
  std::size_t start = 0;
  while (start <= label.size()) {
    const auto pos = label.find(',', start);
    const auto tok = label.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    const auto it = std::find(names.begin(), names.end(), tok);
    if (it == names.end()) throw InputError("candidate_models", "unknown covariate '" + tok + "'");
    m.subset.push_back(static_cast<Index>(it - names.begin()));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  std::sort(m.subset.begin(), m.subset.end());
  m.validate(static_cast<Index>(names.size()));
  return m;
}

/// [1, X_subset]
inline Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& X, const CandidateModel& m) {
  Eigen::MatrixXd D(X.rows(), m.size() + 1);
  D.col(0).setOnes();
  for (Index k = 0; k < m.size(); ++k) D.col(k + 1) = X.col(m.subset[static_cast<std::size_t>(k)]);
  return D;
}

/// H_j = s * Q Q' with Q an orthonormal basis of the design columns.
struct CandidateHat {
  Eigen::MatrixXd basis;  // n x (p_j + 1)
  double shrinkage = 1.0;
};

inline CandidateHat candidate_hat(const Eigen::MatrixXd& X, const CandidateModel& m,
                                  const std::vector<std::string>* names = nullptr) {
  m.validate(X.cols());
  const Eigen::MatrixXd D = design_matrix(X, m);
  if (D.rows() <= D.cols())
    throw InputError("candidate_models", "model with " + std::to_string(D.cols()) + " coefficients needs more than " +
                                             std::to_string(D.rows()) + " observations");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
  qr.setThreshold(1e-10);
  if (qr.rank() < D.cols()) {
    // Pivots past the rank are the columns that add nothing new.
    std::string cols;
    for (Index k = qr.rank(); k < D.cols(); ++k) {
      const Index c = qr.colsPermutation().indices()(k);
      if (!cols.empty()) cols += ", ";
      if (c == 0)
        cols += "intercept";
      else if (names)
        cols += names->at(static_cast<std::size_t>(m.subset[static_cast<std::size_t>(c - 1)]));
      else
        cols += "x" + std::to_string(m.subset[static_cast<std::size_t>(c - 1)]);
    }
    throw Error("candidate_models", "design matrix is rank deficient; collinear column(s): " + cols);
  }
  CandidateHat hat;
  hat.basis = qr.householderQ() * Eigen::MatrixXd::Identity(D.rows(), D.cols());
  hat.shrinkage = m.prior.shrinkage();
  return hat;
}

/// Every response- and H_j-dependent scalar entering the KL estimators.
struct ModelFit {
  double trHj = 0.0;
  double logdet_IplusHj = 0.0;
  double rssj = 0.0;        // y'(I - H_j)y
  double qform_diff = 0.0;  // y'(H_j - H)^2 y
  double qform_pred = 0.0;  // y'(H_j - H)'(I + H_j)^{-1}(H_j - H)y
  double trace_pred = 0.0;  // tr{(I + H_j)^{-1}(I + H)}
  Index p_j = 0;
};

/// Costs O(n^2 p_j) given the dense reference hat matrix; (I + H_j)^{-1} is
/// applied as I - s/(1+s) Q Q' rather than formed.
inline ModelFit fit_candidate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const CandidateModel& model,
                              const ReferenceFit& ref, const std::vector<std::string>* names = nullptr) {
  if (X.rows() != y.size() || ref.n != y.size())
    throw InputError("candidate_models", "data and reference sizes disagree");
  const CandidateHat hat = candidate_hat(X, model, names);
  const Eigen::MatrixXd& Q = hat.basis;
  const double s = hat.shrinkage;
  const double q = static_cast<double>(Q.cols());
  const double n = static_cast<double>(y.size());
  const double c = s / (1.0 + s);

  const Eigen::VectorXd Qy = Q.transpose() * y;
  const Eigen::VectorXd proj = Q * Qy;
  const Eigen::VectorXd diff = s * proj - ref.fitted;
  const Eigen::VectorXd Qd = Q.transpose() * diff;
  const Eigen::MatrixXd HQ = ref.hat * Q;

  ModelFit fit;
  fit.p_j = model.size();
  fit.trHj = q * s;
  fit.logdet_IplusHj = q * std::log1p(s);
  fit.rssj = std::max(0.0, (y - proj).squaredNorm() + (1.0 - s) * Qy.squaredNorm());
  fit.qform_diff = diff.squaredNorm();
  fit.qform_pred = std::max(0.0, fit.qform_diff - c * Qd.squaredNorm());
  fit.trace_pred = n + ref.trH - c * (q + (Q.array() * HQ.array()).sum());
  return fit;
}

/// Same scalars from an arbitrary dense H_j by direct inversion.
/// Intended for checking and for injecting special hat matrices in tests.
inline ModelFit fit_from_hat(const Eigen::MatrixXd& Hj, const Eigen::VectorXd& y, const ReferenceFit& ref,
                             Index p_j = 0) {
  const Index n = y.size();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd inv = (I + Hj).inverse();
  const Eigen::VectorXd diff = (Hj - ref.hat) * y;
  ModelFit fit;
  fit.p_j = p_j;
  fit.trHj = Hj.trace();
  fit.logdet_IplusHj = (I + Hj).llt().matrixLLT().diagonal().array().log().sum() * 2.0;
  fit.rssj = y.dot(y - Hj * y);
  fit.qform_diff = diff.squaredNorm();
  fit.qform_pred = diff.dot(inv * diff);
  fit.trace_pred = (inv * (I + ref.hat)).trace();
  return fit;
}

}  // namespace dprob

#endif  // DPROB_CANDIDATE_MODELS_HPP
