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

#ifndef DPROB_KERNEL_GP_HPP
#define DPROB_KERNEL_GP_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dprob/error.hpp"

namespace dprob {

using Index = Eigen::Index;

/// Squared-exponential kernel hyperparameters: one bandwidth per covariate and an amplitude.
struct KernelConfig {
  Eigen::VectorXd lambda;
  double tau = 1.0;

  Index dim() const { return lambda.size(); }

  void validate() const {
    if (lambda.size() == 0) throw InputError("kernel_gp", "kernel needs at least one bandwidth");
    if (!lambda.allFinite() || (lambda.array() <= 0.0).any())
      throw InputError("kernel_gp", "bandwidths must be positive and finite");
    if (!std::isfinite(tau) || tau <= 0.0) throw InputError("kernel_gp", "amplitude must be positive and finite");
  }

  bool operator==(const KernelConfig& o) const { return tau == o.tau && lambda == o.lambda; }
};

/// K(a, b) = tau^2 exp(-sum_j (a_j - b_j)^2 / (2 lambda_j^2)) for every row pair.
inline Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const KernelConfig& cfg) {
  cfg.validate();
  if (A.cols() != cfg.dim() || B.cols() != cfg.dim())
    throw InputError("kernel_gp", "covariate count does not match bandwidth count");
  const Eigen::ArrayXd inv2l2 = 1.0 / (2.0 * cfg.lambda.array().square());
  const Eigen::MatrixXd As = A * inv2l2.sqrt().matrix().asDiagonal();
  const Eigen::MatrixXd Bs = B * inv2l2.sqrt().matrix().asDiagonal();
  Eigen::MatrixXd K(A.rows(), B.rows());
  for (Index j = 0; j < B.rows(); ++j)
    for (Index i = 0; i < A.rows(); ++i) K(i, j) = (As.row(i) - Bs.row(j)).squaredNorm();
  const double t2 = cfg.tau * cfg.tau;
  return (t2 * (-K.array()).exp()).matrix();
}

/// Symmetric kernel matrix over the rows of X; the diagonal is exactly tau^2.
inline Eigen::MatrixXd build_kernel(const Eigen::MatrixXd& X, const KernelConfig& cfg) {
  cfg.validate();
  if (!X.allFinite()) throw InputError("kernel_gp", "covariates must be finite");
  if (X.cols() != cfg.dim()) throw InputError("kernel_gp", "covariate count does not match bandwidth count");
  const Index n = X.rows();
  const Eigen::ArrayXd inv2l2 = 1.0 / (2.0 * cfg.lambda.array().square());
  const double t2 = cfg.tau * cfg.tau;
  Eigen::MatrixXd K(n, n);
  for (Index j = 0; j < n; ++j) {
    K(j, j) = t2;
    for (Index i = j + 1; i < n; ++i) {
      const double d = ((X.row(i) - X.row(j)).array().square().transpose() * inv2l2).sum();
      K(i, j) = K(j, i) = t2 * std::exp(-d);
    }
  }
  return K;
}

/// Caches per-pair squared coordinate differences so repeated kernel builds
/// over the same design cost one matrix-vector product plus n^2/2 exponentials.
class KernelWorkspace {
 public:
  explicit KernelWorkspace(const Eigen::MatrixXd& X) : n_(X.rows()), p_(X.cols()) {
    if (!X.allFinite()) throw InputError("kernel_gp", "covariates must be finite");
    const Index pairs = n_ * (n_ - 1) / 2;
    sq_.resize(pairs, p_);
    Index k = 0;
    for (Index j = 0; j < n_; ++j)
      for (Index i = j + 1; i < n_; ++i) sq_.row(k++) = (X.row(i) - X.row(j)).array().square();
  }

  Index n() const { return n_; }
  Index p() const { return p_; }

  Eigen::MatrixXd kernel(const KernelConfig& cfg) const {
    cfg.validate();
    if (cfg.dim() != p_) throw InputError("kernel_gp", "covariate count does not match bandwidth count");
    const Eigen::VectorXd inv2l2 = (1.0 / (2.0 * cfg.lambda.array().square())).matrix();
    const Eigen::VectorXd expo = sq_ * inv2l2;
    const double t2 = cfg.tau * cfg.tau;
    Eigen::MatrixXd K(n_, n_);
    Index k = 0;
    for (Index j = 0; j < n_; ++j) {
      K(j, j) = t2;
      for (Index i = j + 1; i < n_; ++i) K(i, j) = K(j, i) = t2 * std::exp(-expo(k++));
    }
    return K;
  }

 private:
  Index n_;
  Index p_;
  Eigen::MatrixXd sq_;
};

/// Posterior quantities of the Gaussian-process reference model, all derived
/// from one symmetric eigendecomposition K = V diag(ev) V'.
///
/// H = K (K + I)^{-1} has eigenvalues ev / (1 + ev) in [0, 1).
struct ReferenceFit {
  Eigen::VectorXd eigvals;  // clamped at 0
  Eigen::MatrixXd eigvecs;
  double trH = 0.0;
  double logdet_IplusH = 0.0;
  double rss0 = 0.0;  // y'(I - H)y
  Index n = 0;
  Eigen::MatrixXd hat;     // H, dense
  Eigen::VectorXd fitted;  // H y

  Eigen::VectorXd hat_eigvals() const { return (eigvals.array() / (1.0 + eigvals.array())).matrix(); }
};

inline double jitter_tolerance(double tau) { return 1e-8 * tau * tau; }

/// Reference fit from an already-built kernel matrix.
inline ReferenceFit fit_reference_from_kernel(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double tau) {
  if (K.rows() != K.cols() || K.rows() != y.size())
    throw InputError("kernel_gp", "kernel and response sizes disagree");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  if (es.info() != Eigen::Success) throw Error("kernel_gp", "eigendecomposition of the kernel failed");

  ReferenceFit fit;
  fit.n = K.rows();
  fit.eigvals = es.eigenvalues();
  const double tol = jitter_tolerance(tau);
  const double lowest = fit.eigvals.minCoeff();
  if (lowest < -tol)
    throw Error("kernel_gp", "kernel eigenvalue " + std::to_string(lowest) + " is below -" + std::to_string(tol) +
                                 "; the kernel is not positive semidefinite");
  fit.eigvals = fit.eigvals.cwiseMax(0.0);
  fit.eigvecs = es.eigenvectors();

  const Eigen::ArrayXd ev = fit.eigvals.array();
  const Eigen::ArrayXd h = ev / (1.0 + ev);
  fit.trH = h.sum();
  fit.logdet_IplusH = h.log1p().sum();

  const Eigen::VectorXd proj = fit.eigvecs.transpose() * y;
  fit.rss0 = std::max(0.0, (proj.array().square() / (1.0 + ev)).sum());
  fit.fitted = fit.eigvecs * (h * proj.array()).matrix();
  fit.hat = fit.eigvecs * h.matrix().asDiagonal() * fit.eigvecs.transpose();
  return fit;
}

inline ReferenceFit fit_reference(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const KernelConfig& cfg) {
  if (X.rows() != y.size()) throw InputError("kernel_gp", "covariate and response row counts differ");
  return fit_reference_from_kernel(build_kernel(X, cfg), y, cfg.tau);
}

/// Log marginal likelihood of y with the noise variance integrated out under
/// p(sigma^2) ~ 1/sigma^2:
///
///   -1/2 log|K + I| - (n/2) log(y'(K + I)^{-1} y)
///
/// The additive constant is omitted; only differences and maximisers are used.
/// K + I has all eigenvalues >= 1, so a Cholesky factorisation is stable here.
inline double log_marginal_from_kernel(const Eigen::MatrixXd& K, const Eigen::VectorXd& y) {
  const Index n = y.size();
  Eigen::MatrixXd A = K;
  A.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw Error("kernel_gp", "K + I is not positive definite");
  const Eigen::VectorXd z = llt.matrixL().solve(y);
  const double quad = z.squaredNorm();
  if (!(quad > 0.0) || !std::isfinite(quad))
    throw Error("kernel_gp", "y'(K+I)^{-1}y is not positive; kernel evaluation failed");
  const double half_logdet = llt.matrixLLT().diagonal().array().log().sum();
  return -half_logdet - 0.5 * static_cast<double>(n) * std::log(quad);
}

inline double log_marginal(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const KernelConfig& cfg) {
  if (X.rows() != y.size()) throw InputError("kernel_gp", "covariate and response row counts differ");
  return log_marginal_from_kernel(build_kernel(X, cfg), y);
}

}  // namespace dprob

#endif  // DPROB_KERNEL_GP_HPP
