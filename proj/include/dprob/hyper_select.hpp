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

#ifndef DPROB_HYPER_SELECT_HPP
#define DPROB_HYPER_SELECT_HPP

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dprob/error.hpp"
#include "dprob/kernel_gp.hpp"
#include "dprob/nelder_mead.hpp"
#include "dprob/numeric.hpp"
#include "dprob/parallel.hpp"

namespace dprob {

// Hyperparameters are searched and sampled as theta = (log lambda_1..p, log tau).

inline KernelConfig config_from_log(const Eigen::VectorXd& theta) {
  const Index p = theta.size() - 1;
  KernelConfig cfg;
  cfg.lambda = theta.head(p).array().exp().matrix();
  cfg.tau = std::exp(theta(p));
  return cfg;
}

inline Eigen::VectorXd log_from_config(const KernelConfig& cfg) {
  Eigen::VectorXd theta(cfg.dim() + 1);
  theta.head(cfg.dim()) = cfg.lambda.array().log().matrix();
  theta(cfg.dim()) = std::log(cfg.tau);
  return theta;
}

/// Log-marginal objective over theta; returns -inf where the kernel cannot be evaluated.
class LogMarginalObjective {
 public:
  LogMarginalObjective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) : ws_(X), y_(y) {
    if (X.rows() != y.size()) throw InputError("hyper_select", "covariate and response row counts differ");
  }

  // |theta_k| beyond this bound means bandwidths or amplitudes outside
  // [3e-7, 3e6]; the kernel is numerically degenerate there.
  static constexpr double kLogBound = 15.0;

  double operator()(const Eigen::VectorXd& theta) const {
    if (!theta.allFinite() || (theta.array().abs() > kLogBound).any())
      return -std::numeric_limits<double>::infinity();
    try {
      return log_marginal_from_kernel(ws_.kernel(config_from_log(theta)), y_);
    } catch (const Error&) {
      return -std::numeric_limits<double>::infinity();
    }
  }

 private:
  KernelWorkspace ws_;
  Eigen::VectorXd y_;
};

struct EbOptions {
  NelderMeadOptions nelder_mead{};
  unsigned threads = 1;
};

struct RestartRecord {
  Eigen::VectorXd start;  // theta
  double start_logml = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd end;
  double end_logml = -std::numeric_limits<double>::infinity();
  int evals = 0;
  bool converged = false;
};

struct EBResult {
  KernelConfig cfg;
  double logml = -std::numeric_limits<double>::infinity();
  int n_restarts_used = 0;
  std::vector<bool> converged;
  std::vector<RestartRecord> trace;
};

/// Multi-start Nelder-Mead maximisation of the log marginal likelihood.
///
/// Restart r draws its start from seed + r: each log bandwidth uniform on
/// [log 0.05 r_j, log 5 r_j] (r_j the covariate range) and log tau uniform on
/// [log 0.1 sd(y), log 10 sd(y)]. The best restart wins; ties go to the lower index.
inline EBResult optimize_eb(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int restarts, std::uint64_t seed,
                            const EbOptions& opt = {}) {
  if (restarts < 1) throw InputError("hyper_select", "restarts must be at least 1");
  const Index p = X.cols();
  const LogMarginalObjective objective(X, y);
  double sd = sample_sd(y);
  if (!(sd > 0.0)) sd = 1.0;

  std::vector<RestartRecord> trace(static_cast<std::size_t>(restarts));
  parallel_for(trace.size(), opt.threads, [&](std::size_t r) {
    std::mt19937_64 rng(seed + r);
    Eigen::VectorXd theta(p + 1);
    for (Index j = 0; j < p; ++j) {
      double range = X.col(j).maxCoeff() - X.col(j).minCoeff();
      if (!(range > 0.0)) range = 1.0;
      std::uniform_real_distribution<double> u(std::log(0.05 * range), std::log(5.0 * range));
      theta(j) = u(rng);
    }
    std::uniform_real_distribution<double> ut(std::log(0.1 * sd), std::log(10.0 * sd));
    theta(p) = ut(rng);

    RestartRecord& rec = trace[r];
    rec.start = theta;
    rec.start_logml = objective(theta);
    const auto nm = nelder_mead_minimize([&](const Eigen::VectorXd& t) { return -objective(t); }, theta,
                                         opt.nelder_mead);
    rec.end = nm.x;
    rec.end_logml = std::isfinite(nm.f) ? -nm.f : -std::numeric_limits<double>::infinity();
    rec.evals = nm.evals;
    rec.converged = nm.converged;
  });

  EBResult out;
  out.n_restarts_used = restarts;
  out.trace = trace;
  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < trace.size(); ++r) {
    out.converged.push_back(trace[r].converged);
    if (std::isfinite(trace[r].end_logml) && (!best || trace[r].end_logml > trace[*best].end_logml)) best = r;
  }
  if (!best) {
    std::ostringstream msg;
    msg << "all " << restarts << " restarts produced a non-finite log marginal likelihood; starts:";
    for (const auto& rec : trace) msg << " [" << rec.start.transpose() << "]";
    throw Error("hyper_select", msg.str());
  }
  out.cfg = config_from_log(trace[*best].end);
  out.logml = trace[*best].end_logml;
  return out;
}

struct McmcOptions {
  double step = 0.15;
  double target_accept = 0.3;
  int adapt_interval = 50;
  double prior_shape = 2.0;  // Gamma(shape, rate) on every bandwidth and on tau
  double prior_rate = 1.0;
  bool use_likelihood = true;  // false samples the prior alone
  std::optional<KernelConfig> start;
};

struct McmcTrace {
  std::vector<KernelConfig> draws;
  double acceptance_rate = 0.0;
  std::uint64_t seed = 0;
  double step = 0.0;  // proposal scale after burn-in adaptation
};

/// Random-walk Metropolis on theta with an isotropic Gaussian proposal.
///
/// The target is the log marginal likelihood plus independent Gamma priors on
/// the positive parameters, including the log-transform Jacobian. The proposal
/// scale adapts in batches during burn-in and is frozen afterwards.
inline McmcTrace sample_mcmc(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int draws, int burn_in,
                             std::uint64_t seed, const McmcOptions& opt = {}) {
  if (draws < 1) throw InputError("hyper_select", "MCMC needs at least one draw");
  if (burn_in < 0) throw InputError("hyper_select", "burn-in must be nonnegative");
  const Index p = X.cols();
  const LogMarginalObjective likelihood(X, y);

  auto log_target = [&](const Eigen::VectorXd& theta) {
    if (!theta.allFinite()) return -std::numeric_limits<double>::infinity();
    double lp = 0.0;
    for (Index k = 0; k < theta.size(); ++k)
      lp += opt.prior_shape * theta(k) - opt.prior_rate * std::exp(theta(k));
    if (opt.use_likelihood) lp += likelihood(theta);
    return lp;
  };

  Eigen::VectorXd theta =
      opt.start ? log_from_config(*opt.start) : Eigen::VectorXd(Eigen::VectorXd::Zero(p + 1));
  if (theta.size() != p + 1) throw InputError("hyper_select", "MCMC start has the wrong dimension");
  double current = log_target(theta);
  if (!std::isfinite(current)) throw Error("hyper_select", "MCMC target is not finite at the starting point");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double step = opt.step;
  int batch_accepted = 0;
  int batch_size = 0;
  long long kept_accepted = 0;

  McmcTrace trace;
  trace.seed = seed;
  trace.draws.reserve(static_cast<std::size_t>(draws));
  const long long total = static_cast<long long>(burn_in) + draws;
  for (long long it = 0; it < total; ++it) {
    Eigen::VectorXd prop(p + 1);
    for (Index k = 0; k <= p; ++k) prop(k) = theta(k) + step * normal(rng);
    const double cand = log_target(prop);
    const double u = unif(rng);
    const bool accept = std::isfinite(cand) && std::log(u) < cand - current;
    if (accept) {
      theta = prop;
      current = cand;
    }
    if (it < burn_in) {
      batch_accepted += accept ? 1 : 0;
      if (++batch_size == opt.adapt_interval) {
        const double rate = static_cast<double>(batch_accepted) / batch_size;
        step *= std::exp(rate - opt.target_accept);
        batch_accepted = 0;
        batch_size = 0;
      }
    } else {
      kept_accepted += accept ? 1 : 0;
      trace.draws.push_back(config_from_log(theta));
    }
  }
  trace.acceptance_rate = static_cast<double>(kept_accepted) / draws;
  trace.step = step;
  return trace;
}

/// Mean of a per-configuration KL evaluator over the post-burn-in draws.
/// The matching log D-probability is -n times this mean.
template <class Evaluator>
double average_kl_over_trace(const McmcTrace& trace, Evaluator&& kl_eval, unsigned threads = 1) {
  if (trace.draws.empty()) throw InputError("hyper_select", "cannot average over an empty trace");
  std::vector<double> values(trace.draws.size());
  parallel_for(values.size(), threads, [&](std::size_t i) {
    try {
      values[i] = kl_eval(trace.draws[i]);
    } catch (const std::exception& e) {
      throw Error("hyper_select", "KL evaluation failed on draw " + std::to_string(i) + ": " + e.what());
    }
  });
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

inline nlohmann::json to_json(const KernelConfig& cfg) {
  return {{"lambda", std::vector<double>(cfg.lambda.data(), cfg.lambda.data() + cfg.lambda.size())},
          {"tau", cfg.tau}};
}

inline KernelConfig kernel_config_from_json(const nlohmann::json& j) {
  KernelConfig cfg;
  const auto lam = j.at("lambda").get<std::vector<double>>();
  cfg.lambda = Eigen::Map<const Eigen::VectorXd>(lam.data(), static_cast<Index>(lam.size()));
  cfg.tau = j.at("tau").get<double>();
  cfg.validate();
  return cfg;
}

inline nlohmann::json to_json(const EBResult& eb) {
  nlohmann::json restarts = nlohmann::json::array();
  for (const auto& r : eb.trace)
    restarts.push_back({{"start_logml", r.start_logml},
                        {"end_logml", r.end_logml},
                        {"evals", r.evals},
                        {"converged", r.converged}});
  return {{"cfg", to_json(eb.cfg)}, {"logml", eb.logml}, {"n_restarts_used", eb.n_restarts_used},
          {"restarts", restarts}};
}

inline EBResult eb_result_from_json(const nlohmann::json& j) {
  EBResult eb;
  eb.cfg = kernel_config_from_json(j.at("cfg"));
  eb.logml = j.at("logml").get<double>();
  eb.n_restarts_used = j.at("n_restarts_used").get<int>();
  for (const auto& r : j.value("restarts", nlohmann::json::array())) {
    eb.converged.push_back(r.at("converged").get<bool>());
    RestartRecord rec;
    rec.start_logml = r.at("start_logml").get<double>();
    rec.end_logml = r.at("end_logml").get<double>();
    rec.evals = r.at("evals").get<int>();
    rec.converged = r.at("converged").get<bool>();
    eb.trace.push_back(rec);
  }
  return eb;
}

inline nlohmann::json to_json(const McmcTrace& t) {
  nlohmann::json draws = nlohmann::json::array();
  for (const auto& d : t.draws) draws.push_back(to_json(d));
  return {{"draws", draws}, {"acceptance_rate", t.acceptance_rate}, {"seed", t.seed}, {"step", t.step}};
}

inline McmcTrace mcmc_trace_from_json(const nlohmann::json& j) {
  McmcTrace t;
  for (const auto& d : j.at("draws")) t.draws.push_back(kernel_config_from_json(d));
  t.acceptance_rate = j.at("acceptance_rate").get<double>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.step = j.value("step", 0.0);
  return t;
}

}  // namespace dprob

#endif  // DPROB_HYPER_SELECT_HPP
