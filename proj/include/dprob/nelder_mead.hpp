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

#ifndef DPROB_NELDER_MEAD_HPP
#define DPROB_NELDER_MEAD_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace dprob {

struct NelderMeadOptions {
  double ftol = 1e-8;        // stop once max - min over the simplex is at most this
  int max_evals = 2000;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::infinity();
  int evals = 0;
  bool converged = false;
};

/// Unconstrained downhill simplex minimisation with the standard
/// reflection / expansion / contraction / shrink coefficients (1, 2, 1/2, 1/2).
///
/// Non-finite objective values are treated as +infinity, so the simplex
/// backs away from regions where the objective cannot be evaluated.
template <class Objective>
NelderMeadResult nelder_mead_minimize(Objective&& objective, const Eigen::VectorXd& x0,
                                      const NelderMeadOptions& opt = {}) {
  const Eigen::Index d = x0.size();
  NelderMeadResult res;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evals;
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(d + 1), x0);
  std::vector<double> fv(static_cast<std::size_t>(d + 1));
  for (Eigen::Index k = 0; k < d; ++k) pts[static_cast<std::size_t>(k + 1)](k) += opt.initial_step;
  for (std::size_t k = 0; k < pts.size(); ++k) fv[k] = eval(pts[k]);

  std::vector<std::size_t> order(pts.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    std::vector<Eigen::VectorXd> p2;
    std::vector<double> f2;
    p2.reserve(pts.size());
    f2.reserve(pts.size());
    for (auto i : order) {
      p2.push_back(pts[i]);
      f2.push_back(fv[i]);
    }
    pts.swap(p2);
    fv.swap(f2);
  };

  const auto worst = static_cast<std::size_t>(d);
  while (true) {
    sort_simplex();
    if (std::isfinite(fv[worst]) && fv[worst] - fv[0] <= opt.ftol) {
      res.converged = true;
      break;
    }
    if (res.evals >= opt.max_evals) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (std::size_t k = 0; k < worst; ++k) centroid += pts[k];
    centroid /= static_cast<double>(d);

    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < fv[0]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[worst - 1]) {
      pts[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const Eigen::VectorXd xc =
        outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid)) : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : fv[worst])) {
      pts[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t k = 1; k < pts.size(); ++k) {
      pts[k] = pts[0] + 0.5 * (pts[k] - pts[0]);
      fv[k] = eval(pts[k]);
    }
  }
  res.x = pts[0];
  res.f = fv[0];
  return res;
}

}  // namespace dprob

#endif  // DPROB_NELDER_MEAD_HPP
