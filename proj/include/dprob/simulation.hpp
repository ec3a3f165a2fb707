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

#ifndef DPROB_SIMULATION_HPP
#define DPROB_SIMULATION_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dprob/aggregate.hpp"
#include "dprob/baselines.hpp"
#include "dprob/candidate_models.hpp"
#include "dprob/dataset.hpp"
#include "dprob/dprob_engine.hpp"
#include "dprob/error.hpp"
#include "dprob/hyper_select.hpp"
#include "dprob/numeric.hpp"
#include "dprob/parallel.hpp"

namespace dprob {

enum class MeanKind { curvature, case1, case2, case3, case4 };

/// One-covariate regression y = mu(x) + N(0, sigma^2) with x ~ U(0, 1).
struct SimScenario {
  MeanKind kind = MeanKind::curvature;
  double gamma = 0.0;  // curvature only
  double sigma = 1.0;
  Index n = 100;

  static double gamma_max() { return 2.0 * std::sqrt(std::expm1(0.1)); }

  void validate() const {
    if (kind == MeanKind::curvature && !(gamma >= 0.0 && gamma <= gamma_max() * (1.0 + 1e-12)))
      throw InputError("sim_oracle", "gamma " + std::to_string(gamma) + " outside [0, " +
                                         std::to_string(gamma_max()) + "]");
    if (!(sigma > 0.0)) throw InputError("sim_oracle", "noise sd must be positive");
    if (n < 3) throw InputError("sim_oracle", "sample size must be at least 3");
  }

  std::string name() const {
    switch (kind) {
      case MeanKind::curvature:
        return "curvature(" + std::to_string(gamma) + ")";
      case MeanKind::case1:
        return "case1";
      case MeanKind::case2:
        return "case2";
      case MeanKind::case3:
        return "case3";
      case MeanKind::case4:
        return "case4";
    }
    return "?";
  }
};

/// Slope that keeps the null model's divergence at 0.05 along the curvature family.
inline double curvature_beta(double gamma) {
  const double inner = 12.0 * (std::expm1(0.1) - gamma * gamma / 4.0);
  return std::sqrt(std::max(0.0, inner)) - 3.0 * gamma;
}

/// 20 equally spaced gamma values from 0 to the family's upper limit.
inline std::vector<double> curvature_grid(int points = 20) {
  if (points < 2) throw InputError("sim_oracle", "grid needs at least two points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = SimScenario::gamma_max() * i / (points - 1);
  g.back() = SimScenario::gamma_max();
  return g;
}

inline double mean_function(const SimScenario& scn, double x) {
  switch (scn.kind) {
    case MeanKind::curvature:
      return 10.0 + curvature_beta(scn.gamma) * x + (scn.gamma == 0.0 ? 0.0 : scn.gamma * std::log(x));
    case MeanKind::case1:
      return 10.0 + 10.0 * x;
    case MeanKind::case2:
      return 10.0;
    case MeanKind::case3:
      return 10.0 + std::sin(30.0 * std::numbers::pi * x);
    case MeanKind::case4:
      return 10.0 * std::pow(x, 5);
  }
  return 0.0;
}

namespace detail {

inline Dataset draw_dataset(const SimScenario& scn, Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, scn.sigma);
  Eigen::MatrixXd X(n, 1);
  Eigen::VectorXd y(n);
  for (Index i = 0; i < n; ++i) {
    double x = 0.0;
    while (x == 0.0) x = unif(rng);  // log x must stay finite
    X(i, 0) = x;
    y(i) = mean_function(scn, x) + noise(rng);
  }
  return make_dataset_with_bounds(X, std::move(y), {"x"}, {{0.0, 1.0}}, "y");
}

}  // namespace detail

/// Training sample of size scn.n; covariates are kept on their natural (0, 1) scale.
inline Dataset generate(const SimScenario& scn, std::uint64_t seed) {
  scn.validate();
  std::mt19937_64 rng(seed);
  return detail::draw_dataset(scn, scn.n, rng);
}

/// Train and test samples drawn from one stream: the train set equals generate(scn, seed).
inline std::pair<Dataset, Dataset> generate_train_test(const SimScenario& scn, Index n_test, std::uint64_t seed) {
  scn.validate();
  if (n_test < 1) throw InputError("sim_oracle", "test size must be positive");
  std::mt19937_64 rng(seed);
  Dataset train = detail::draw_dataset(scn, scn.n, rng);
  Dataset test = detail::draw_dataset(scn, n_test, rng);
  return {std::move(train), std::move(test)};
}

struct DeltaOracle {
  std::vector<Index> subset;
  double delta = 0.0;
  double residual_variance = 0.0;
};

inline constexpr unsigned kDeltaNodes = 501;

/// Divergence of the best Gaussian linear model in the subset from the truth,
/// from the L2(U(0,1)) best affine approximation of the mean function.
/// Moments are integrated with x = u^4, which tames the log singularity at 0.
inline DeltaOracle delta_oracle(const SimScenario& scn, std::span<const Index> subset) {
  scn.validate();
  for (Index c : subset)
    if (c != 0) throw InputError("sim_oracle", "scenarios have a single covariate (index 0)");
  static const QuadratureRule rule = gauss_legendre(kDeltaNodes, 0.0, 1.0);
  double m1 = 0.0, mx = 0.0, mxx = 0.0, mmu = 0.0, mxmu = 0.0, mmumu = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double u = rule.nodes[k];
    const double x = u * u * u * u;
    const double w = rule.weights[k] * 4.0 * u * u * u;
    const double mu = mean_function(scn, x);
    m1 += w;
    mx += w * x;
    mxx += w * x * x;
    mmu += w * mu;
    mxmu += w * x * mu;
    mmumu += w * mu * mu;
  }
  const double var_mu = mmumu / m1 - (mmu / m1) * (mmu / m1);
  double resid = var_mu;
  if (!subset.empty()) {
    const double var_x = mxx / m1 - (mx / m1) * (mx / m1);
    const double cov = mxmu / m1 - (mx / m1) * (mmu / m1);
    resid -= cov * cov / var_x;
  }
  resid = std::max(0.0, resid);
  DeltaOracle out;
  out.subset.assign(subset.begin(), subset.end());
  out.residual_variance = resid;
  out.delta = 0.5 * std::log1p(resid / (scn.sigma * scn.sigma));
  return out;
}

enum class HyperMode { eb, mcmc };

struct SimOptions {
  HyperMode hyper = HyperMode::eb;
  int restarts = 3;
  int mcmc_draws = 200;
  int burn_in = 100;
  Index n_test = 100;
  unsigned threads = 1;  // across replications
};

/// Per-replication outcome for the two-model list {null, x}.
struct ReplicationOutcome {
  int rep = 0;
  std::uint64_t seed = 0;
  double kl1_null = 0.0, kl1_full = 0.0;
  double kl2_null = 0.0, kl2_full = 0.0;
  double log_pi1_full = 0.0, log_pi2_full = 0.0;
  double cond1_full = 0.0, cond2_full = 0.0;  // also the inclusion probability of x
  double unit_info_full = 0.0, hyper_g_full = 0.0;
  double rmse_d1 = 0.0, rmse_d2 = 0.0, rmse_unit_info = 0.0, rmse_hyper_g = 0.0, rmse_reference = 0.0;
};

inline ReplicationOutcome run_one_replication(const SimScenario& scn, int rep, std::uint64_t seed,
                                              const SimOptions& opt) {
  ReplicationOutcome out;
  out.rep = rep;
  out.seed = seed;
  const auto [train, test] = generate_train_test(scn, opt.n_test, seed);
  const std::vector<CandidateModel> models = enumerate_subsets(1);  // null, {x}

  KernelConfig cfg;
  std::vector<KlEstimate> kls;
  if (opt.hyper == HyperMode::eb) {
    cfg = optimize_eb(train.X, train.y, opt.restarts, seed).cfg;
    kls = model_kls(train.X, train.y, models, fit_reference(train.X, train.y, cfg));
  } else {
    cfg = optimize_eb(train.X, train.y, opt.restarts, seed).cfg;
    McmcOptions mo;
    mo.start = cfg;
    const auto trace = sample_mcmc(train.X, train.y, opt.mcmc_draws, opt.burn_in, seed, mo);
    kls = model_kls_over_trace(train.X, train.y, models, trace);
  }
  const auto report = make_report(models, kls, train.names);
  out.kl1_null = kls[0].kl1;
  out.kl1_full = kls[1].kl1;
  out.kl2_null = kls[0].kl2;
  out.kl2_full = kls[1].kl2;
  out.log_pi1_full = report.rows[1].log_pi1;
  out.log_pi2_full = report.rows[1].log_pi2;
  out.cond1_full = report.rows[1].cond_pi1;
  out.cond2_full = report.rows[1].cond_pi2;

  const auto unit = gprior_weights(train.X, train.y, models, GPriorMode::unit_info);
  const auto hyper = gprior_weights(train.X, train.y, models, GPriorMode::hyper_g);
  out.unit_info_full = unit.probs(1);
  out.hyper_g_full = hyper.probs(1);

  const auto top_rmse = [&](const Eigen::VectorXd& w) {
    const auto& m = models[top_model(models, w)];
    return rmse(predict_linear(train.X, train.y, m, test.X), test.y);
  };
  out.rmse_d1 = top_rmse(conditional_weights(report, 1));
  out.rmse_d2 = top_rmse(conditional_weights(report, 2));
  out.rmse_unit_info = top_rmse(unit.probs);
  out.rmse_hyper_g = top_rmse(hyper.probs);
  out.rmse_reference = rmse(predict_reference(train.X, train.y, cfg, test.X), test.y);
  return out;
}

/// Replication r uses seed + r; any failure aborts the run naming the replication.
inline std::vector<ReplicationOutcome> run_replications(const SimScenario& scn, int reps, std::uint64_t seed,
                                                        const SimOptions& opt = {}) {
  scn.validate();
  if (reps < 1) throw InputError("sim_oracle", "reps must be at least 1");
  std::vector<ReplicationOutcome> out(static_cast<std::size_t>(reps));
  parallel_for(out.size(), opt.threads, [&](std::size_t r) {
    try {
      out[r] = run_one_replication(scn, static_cast<int>(r), seed + r, opt);
    } catch (const std::exception& e) {
      throw Error("sim_oracle", "replication " + std::to_string(r) + " (" + scn.name() + "): " + e.what());
    }
  });
  return out;
}

struct TableRow {
  int rep = 0;
  std::string method;
  std::string metric;
  double value = 0.0;
};

/// Long-format view: rep, method, metric, value.
inline std::vector<TableRow> replication_table(std::span<const ReplicationOutcome> outcomes) {
  std::vector<TableRow> rows;
  for (const auto& o : outcomes) {
    const auto add = [&](const char* method, const char* metric, double v) {
      rows.push_back({o.rep, method, metric, v});
    };
    add("d1", "kl_null", o.kl1_null);
    add("d1", "kl_full", o.kl1_full);
    add("d1", "log_abs_full", o.log_pi1_full);
    add("d1", "prob_full", o.cond1_full);
    add("d1", "rmse", o.rmse_d1);
    add("d2", "kl_null", o.kl2_null);
    add("d2", "kl_full", o.kl2_full);
    add("d2", "log_abs_full", o.log_pi2_full);
    add("d2", "prob_full", o.cond2_full);
    add("d2", "rmse", o.rmse_d2);
    add("unit_info", "prob_full", o.unit_info_full);
    add("unit_info", "rmse", o.rmse_unit_info);
    add("hyper_g", "prob_full", o.hyper_g_full);
    add("hyper_g", "rmse", o.rmse_hyper_g);
    add("reference", "rmse", o.rmse_reference);
  }
  return rows;
}

inline double mean_of(std::span<const ReplicationOutcome> outcomes, double ReplicationOutcome::*field) {
  if (outcomes.empty()) throw InputError("sim_oracle", "no replications to average");
  double s = 0.0;
  for (const auto& o : outcomes) s += o.*field;
  return s / static_cast<double>(outcomes.size());
}

struct BoltzmannResult {
  double log_ratio_per_n = 0.0;   // (1/n) log[Mult(n; na; b) / Mult(n; na; a)]
  double log_single_per_n = 0.0;  // (1/n) log Mult(n; na; b)
  double kl = 0.0;                // KL(a, b)
};

/// Probability of observing the frequencies n*a under cell probabilities b,
/// relative to its value under a, evaluated exactly with log-gamma.
inline BoltzmannResult boltzmann_check(const std::vector<double>& a, const std::vector<double>& b, long n) {
  if (a.size() != b.size() || a.size() < 2) throw InputError("sim_oracle", "need two probability vectors of equal length >= 2");
  if (n < 1) throw InputError("sim_oracle", "n must be positive");
  double sa = 0.0, sb = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (!(a[l] > 0.0) || !(b[l] > 0.0)) throw InputError("sim_oracle", "probabilities must be strictly positive");
    sa += a[l];
    sb += b[l];
  }
  if (std::abs(sa - 1.0) > 1e-12 || std::abs(sb - 1.0) > 1e-12)
    throw InputError("sim_oracle", "probability vectors must sum to 1");

  const double nn = static_cast<double>(n);
  double log_coef = std::lgamma(nn + 1.0);
  double log_b = 0.0, log_a = 0.0, kl = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const double count = nn * a[l];
    if (std::abs(count - std::round(count)) > 1e-9 * std::max(1.0, count))
      throw InputError("sim_oracle", "n * a[" + std::to_string(l) + "] = " + std::to_string(count) + " is not an integer");
    const double c = std::round(count);
    log_coef -= std::lgamma(c + 1.0);
    log_b += c * std::log(b[l]);
    log_a += c * std::log(a[l]);
    kl += a[l] * std::log(a[l] / b[l]);
  }
  BoltzmannResult r;
  r.log_ratio_per_n = ((log_coef + log_b) - (log_coef + log_a)) / nn;
  r.log_single_per_n = (log_coef + log_b) / nn;
  r.kl = kl;
  return r;
}

struct GaussianSpec {
  double mean = 0.0;
  double sd = 1.0;
};

inline double gaussian_kl(const GaussianSpec& p, const GaussianSpec& q) {
  const double d = p.mean - q.mean;
  return std::log(q.sd / p.sd) + (p.sd * p.sd + d * d) / (2.0 * q.sd * q.sd) - 0.5;
}

struct DecisionRuleResult {
  double log_R = 0.0;        // log geometric-mean likelihood ratio
  double log_target = 0.0;   // -n KL(f*, f_j)
  double std_error = 0.0;    // of log_R
};

/// m experiments of n draws from f*; R = (prod_t T_t)^{1/m} with T_t the
/// likelihood ratio of f_j to f*.
inline DecisionRuleResult decision_rule_check(const GaussianSpec& f_star, const GaussianSpec& f_j, int n, long m,
                                              std::uint64_t seed) {
  if (n < 1 || m < 1) throw InputError("sim_oracle", "n and m must be positive");
  if (!(f_star.sd > 0.0) || !(f_j.sd > 0.0)) throw InputError("sim_oracle", "standard deviations must be positive");
  const auto log_density = [](const GaussianSpec& g, double y) {
    const double z = (y - g.mean) / g.sd;
    return -0.5 * z * z - std::log(g.sd);
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> draw(f_star.mean, f_star.sd);
  double sum = 0.0, sumsq = 0.0;
  for (long t = 0; t < m; ++t) {
    double log_T = 0.0;
    for (int i = 0; i < n; ++i) {
      const double y = draw(rng);
      log_T += log_density(f_j, y) - log_density(f_star, y);
    }
    sum += log_T;
    sumsq += log_T * log_T;
  }
  const double md = static_cast<double>(m);
  DecisionRuleResult r;
  r.log_R = sum / md;
  const double var = m > 1 ? (sumsq - md * r.log_R * r.log_R) / (md - 1.0) : 0.0;
  r.std_error = std::sqrt(std::max(0.0, var) / md);
  r.log_target = -static_cast<double>(n) * gaussian_kl(f_star, f_j);
  return r;
}

}  // namespace dprob

#endif  // DPROB_SIMULATION_HPP
