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

#ifndef DPROB_BASELINES_HPP
#define DPROB_BASELINES_HPP

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "dprob/candidate_models.hpp"
#include "dprob/dprob_engine.hpp"
#include "dprob/error.hpp"
#include "dprob/kernel_gp.hpp"
#include "dprob/numeric.hpp"

namespace dprob {

// Bayes factors here follow the usual software convention: covariates are
// centred, the intercept gets a flat prior and only the slopes are g-scaled.
// This differs from the uniform Sigma_j used by CoefPrior::gprior inside the
// D-probability formulas.

enum class GPriorMode { unit_info, hyper_g };

inline const char* to_string(GPriorMode m) { return m == GPriorMode::unit_info ? "unit_info" : "hyper_g"; }

struct BaselineWeights {
  std::string method;
  Eigen::VectorXd log_scores;
  Eigen::VectorXd probs;
};

/// Least-squares residual sum of squares of the intercept-plus-subset fit.
inline double least_squares_rss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const CandidateModel& model) {
  CandidateModel flat = model;
  flat.prior = CoefPrior::flat();
  const auto hat = candidate_hat(X, flat);
  const Eigen::VectorXd resid = y - hat.basis * (hat.basis.transpose() * y);
  return resid.squaredNorm();
}

inline double r_squared(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const CandidateModel& model) {
  const double tss = (y.array() - y.mean()).square().sum();
  if (!(tss > 0.0)) throw InputError("baselines", "response has no variation");
  return 1.0 - least_squares_rss(X, y, model) / tss;
}

/// log BF(M_j : M_null) under a Zellner g-prior with fixed g.
inline double gprior_log_bf(Index n, Index p_j, double r2, double g) {
  const double nn = static_cast<double>(n);
  return 0.5 * (nn - 1.0 - static_cast<double>(p_j)) * std::log1p(g) - 0.5 * (nn - 1.0) * std::log1p(g * (1.0 - r2));
}

inline constexpr unsigned kHyperGNodes = 201;

/// g values and weights for integrating against the hyper-g (a = 3) prior.
///
/// Under this prior u = g/(1+g) ~ Beta(1, 1/2); writing u = 1 - (1 - t)^2
/// makes t uniform on (0, 1), so the rule is plain Gauss-Legendre in t with
/// g = (1 - t)^{-2} - 1.
inline const QuadratureRule& hyper_g_rule() {
  static const QuadratureRule rule = [] {
    QuadratureRule r = gauss_legendre(kHyperGNodes, 0.0, 1.0);
    for (auto& t : r.nodes) t = 1.0 / ((1.0 - t) * (1.0 - t)) - 1.0;
    return r;
  }();
  return rule;
}

inline double hyper_g_log_bf(Index n, Index p_j, double r2) {
  const auto& rule = hyper_g_rule();
  Eigen::VectorXd terms(static_cast<Index>(rule.nodes.size()));
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    terms(static_cast<Index>(k)) = std::log(rule.weights[k]) + gprior_log_bf(n, p_j, r2, rule.nodes[k]);
  return log_sum_exp(terms);
}

/// Log marginal likelihood relative to the intercept-only model.
inline double gprior_log_marginal(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const CandidateModel& model,
                                  GPriorMode mode) {
  if (model.subset.empty()) return 0.0;
  const Index n = y.size();
  if (n <= model.size() + 2)
    throw InputError("baselines", "g-prior needs n > p_j + 2 (n = " + std::to_string(n) + ")");
  const double r2 = r_squared(X, y, model);
  if (r2 >= 1.0) throw Error("baselines", "model '" + std::to_string(model.size()) + "-covariate' fits perfectly (R^2 = 1)");
  return mode == GPriorMode::unit_info ? gprior_log_bf(n, model.size(), r2, static_cast<double>(n))
                                       : hyper_g_log_bf(n, model.size(), r2);
}

inline BaselineWeights gprior_weights(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                      std::span<const CandidateModel> models, GPriorMode mode) {
  BaselineWeights w;
  w.method = to_string(mode);
  w.log_scores.resize(static_cast<Index>(models.size()));
  for (std::size_t m = 0; m < models.size(); ++m)
    w.log_scores(static_cast<Index>(m)) = gprior_log_marginal(X, y, models[m], mode);
  w.probs = normalize_log_weights(w.log_scores);
  return w;
}

/// Scores -BIC_j / 2 with BIC_j = n log(RSS_j / n) + (p_j + 2) log n.
inline BaselineWeights bic_weight_scores(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                         std::span<const CandidateModel> models) {
  const double n = static_cast<double>(y.size());
  BaselineWeights w;
  w.method = "bic";
  w.log_scores.resize(static_cast<Index>(models.size()));
  for (std::size_t m = 0; m < models.size(); ++m) {
    const double rss = least_squares_rss(X, y, models[m]);
    if (!(rss > 0.0)) throw Error("baselines", "BIC undefined for a perfect fit (RSS = 0)");
    const double bic = n * std::log(rss / n) + (static_cast<double>(models[m].size()) + 2.0) * std::log(n);
    w.log_scores(static_cast<Index>(m)) = -0.5 * bic;
  }
  w.probs = normalize_log_weights(w.log_scores);
  return w;
}

/// Posterior mean of the reference noise variance, the default EW plug-in.
inline double reference_noise_variance(const ReferenceFit& ref) {
  return ref.rss0 / (static_cast<double>(ref.n) - 2.0);
}

/// Exponential weights from the unbiased risk estimate:
/// log w_j = -RSS_j / (4 sigma0^2) - (p_j + 1) / 2 + n / 4.
inline BaselineWeights exponential_weights(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                           std::span<const CandidateModel> models, double sigma0_sq) {
  if (!(sigma0_sq > 0.0)) throw InputError("baselines", "sigma0^2 must be positive");
  const double n = static_cast<double>(y.size());
  BaselineWeights w;
  w.method = "ew";
  w.log_scores.resize(static_cast<Index>(models.size()));
  for (std::size_t m = 0; m < models.size(); ++m) {
    const double rss = least_squares_rss(X, y, models[m]);
    w.log_scores(static_cast<Index>(m)) =
        -rss / (4.0 * sigma0_sq) - 0.5 * (static_cast<double>(models[m].size()) + 1.0) + 0.25 * n;
  }
  w.probs = normalize_log_weights(w.log_scores);
  return w;
}

/// method,model,log_score,prob
inline std::string baselines_csv(std::span<const BaselineWeights> methods, std::span<const CandidateModel> models,
                                 const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "method,model,log_score,prob\n";
  for (const auto& w : methods)
    for (std::size_t m = 0; m < models.size(); ++m)
      os << w.method << ',' << detail::csv_quote(model_label(models[m], names)) << ','
         << detail::fmt_double(w.log_scores(static_cast<Index>(m))) << ','
         << detail::fmt_double(w.probs(static_cast<Index>(m))) << '\n';
  return os.str();
}

inline nlohmann::json to_json(const BaselineWeights& w, std::span<const CandidateModel> models,
                              const std::vector<std::string>& names) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t m = 0; m < models.size(); ++m)
    rows.push_back({{"model", model_label(models[m], names)},
                    {"log_score", w.log_scores(static_cast<Index>(m))},
                    {"prob", w.probs(static_cast<Index>(m))}});
  return {{"method", w.method}, {"models", rows}};
}

}  // namespace dprob

#endif  // DPROB_BASELINES_HPP
