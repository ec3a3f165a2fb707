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

#ifndef DPROB_NUMERIC_HPP
#define DPROB_NUMERIC_HPP

#include <Eigen/Dense>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dprob/error.hpp"

namespace dprob {

inline double log_sum_exp(const Eigen::VectorXd& v) {
  if (v.size() == 0) return -std::numeric_limits<double>::infinity();
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

/// Turns log scores into probabilities; shift invariant by construction.
inline Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& log_w) {
  if (log_w.size() == 0) throw Error("numeric", "cannot normalize an empty weight vector");
  const double m = log_w.maxCoeff();
  if (!std::isfinite(m)) throw Error("numeric", "log weights contain no finite maximum");
  Eigen::VectorXd w = (log_w.array() - m).exp();
  return w / w.sum();
}

/// Gauss-Legendre rule mapped to [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline QuadratureRule gauss_legendre(unsigned order, double a = -1.0, double b = 1.0) {
  if (order == 0) throw Error("numeric", "quadrature order must be positive");
  // legendre_p_zeros returns the nonnegative half of the roots in increasing order.
  const std::vector<double> half = boost::math::legendre_p_zeros<double>(static_cast<int>(order));
  std::vector<double> roots;
  roots.reserve(order);
  for (auto it = half.rbegin(); it != half.rend(); ++it)
    if (*it != 0.0) roots.push_back(-*it);
  for (double r : half) roots.push_back(r);

  QuadratureRule rule;
  rule.nodes.reserve(order);
  rule.weights.reserve(order);
  const double half_width = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (double x : roots) {
    const double dp = boost::math::legendre_p_prime<double>(static_cast<int>(order), x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes.push_back(mid + half_width * x);
    rule.weights.push_back(half_width * w);
  }
  return rule;
}

inline double sample_sd(const Eigen::VectorXd& v) {
  const auto n = v.size();
  if (n < 2) return 0.0;
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(n - 1));
}

}  // namespace dprob

#endif  // DPROB_NUMERIC_HPP
