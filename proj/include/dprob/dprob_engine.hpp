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

#ifndef DPROB_DPROB_ENGINE_HPP
#define DPROB_DPROB_ENGINE_HPP

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <iomanip>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dprob/candidate_models.hpp"
#include "dprob/error.hpp"
#include "dprob/hyper_select.hpp"
#include "dprob/kernel_gp.hpp"
#include "dprob/numeric.hpp"
#include "dprob/parallel.hpp"

namespace dprob {

/// Reference-model scalars shared by every candidate.
struct RefScalars {
  double trH = 0.0;
  double logdet_IplusH = 0.0;
  double rss0 = 0.0;
  Index n = 0;

  static RefScalars of(const ReferenceFit& f) { return {f.trH, f.logdet_IplusH, f.rss0, f.n}; }
};

struct FitPenalty {
  double g = 0.0;  // goodness of fit
  double p = 0.0;  // complexity penalty
};

/// KL~_t = (g_t + p_t) / n for the posterior-mean (t = 1) and
/// posterior-predictive (t = 2) estimators.
struct KlEstimate {
  double kl1 = 0.0;
  double kl2 = 0.0;
  double g1 = 0.0;
  double p1 = 0.0;
  double g2 = 0.0;
  double p2 = 0.0;
};

namespace detail {

inline void check_kl_inputs(const ModelFit& fit, const RefScalars& ref) {
  if (ref.n <= 2) throw InputError("dprob_engine", "need n > 2");
  if (!(fit.rssj > 0.0)) throw Error("dprob_engine", "candidate interpolates the data (y'(I-H_j)y = 0)");
  if (!(ref.rss0 > 0.0)) throw Error("dprob_engine", "reference interpolates the data (y'(I-H)y = 0)");
}

// Per-observation KL values may dip below zero only through rounding.
inline double clamp_kl(double kl, const char* which) {
  if (kl >= 0.0) return kl;
  if (kl >= -1e-10) return 0.0;
  throw Error("dprob_engine", std::string(which) + " estimate is negative (" + std::to_string(kl) + ")");
}

}  // namespace detail

/// Posterior mean of the conditional KL over both posteriors.
inline FitPenalty kl1_analytic(const ModelFit& fit, const RefScalars& ref) {
  detail::check_kl_inputs(fit, ref);
  const double n = static_cast<double>(ref.n);
  FitPenalty out;
  out.g = 0.5 * n *
          (fit.qform_diff / fit.rssj + (ref.trH + n) * ref.rss0 / ((n - 2.0) * fit.rssj) +
           std::log(fit.rssj / ref.rss0) - 1.0);
  out.p = 0.5 * fit.trHj;
  return out;
}

/// KL between the posterior predictive densities, with the variances
/// integrated over their inverse-gamma posteriors. The reference log-determinant
/// enters at 1/n inside the bracket, so g2 carries -logdet(I+H)/2 overall.
inline FitPenalty kl2_analytic(const ModelFit& fit, const RefScalars& ref) {
  detail::check_kl_inputs(fit, ref);
  const double n = static_cast<double>(ref.n);
  FitPenalty out;
  out.g = 0.5 * n *
          (fit.qform_pred / fit.rssj + (ref.rss0 / fit.rssj) * fit.trace_pred / (n - 2.0) +
           std::log(fit.rssj / ref.rss0) - ref.logdet_IplusH / n - 1.0);
  out.p = 0.5 * fit.logdet_IplusHj;
  return out;
}

inline KlEstimate estimate_kl(const ModelFit& fit, const RefScalars& ref) {
  const auto a = kl1_analytic(fit, ref);
  const auto b = kl2_analytic(fit, ref);
  const double n = static_cast<double>(ref.n);
  KlEstimate e;
  e.g1 = a.g;
  e.p1 = a.p;
  e.g2 = b.g;
  e.p2 = b.p;
  e.kl1 = detail::clamp_kl((a.g + a.p) / n, "KL1");
  e.kl2 = detail::clamp_kl((b.g + b.p) / n, "KL2");
  return e;
}

/// KL estimates for every model against one reference fit.
inline std::vector<KlEstimate> model_kls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                         std::span<const CandidateModel> models, const ReferenceFit& ref,
                                         unsigned threads = 1, const std::vector<std::string>* names = nullptr) {
  std::vector<KlEstimate> out(models.size());
  const auto scalars = RefScalars::of(ref);
  parallel_for(models.size(), threads, [&](std::size_t m) {
    out[m] = estimate_kl(fit_candidate(X, y, models[m], ref, names), scalars);
  });
  return out;
}

/// Per-model KL estimates averaged over MCMC draws of the kernel hyperparameters.
/// The reference is refitted once per draw; the g/p decomposition is averaged too.
inline std::vector<KlEstimate> model_kls_over_trace(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                                    std::span<const CandidateModel> models, const McmcTrace& trace,
                                                    unsigned threads = 1,
                                                    const std::vector<std::string>* names = nullptr) {
  if (trace.draws.empty()) throw InputError("dprob_engine", "cannot average over an empty trace");
  std::vector<std::vector<KlEstimate>> per_draw(trace.draws.size());
  parallel_for(per_draw.size(), threads, [&](std::size_t i) {
    try {
      per_draw[i] = model_kls(X, y, models, fit_reference(X, y, trace.draws[i]), 1, names);
    } catch (const std::exception& e) {
      throw Error("dprob_engine", "draw " + std::to_string(i) + ": " + e.what());
    }
  });
  std::vector<KlEstimate> out(models.size());
  for (const auto& draw : per_draw)
    for (std::size_t m = 0; m < models.size(); ++m) {
      out[m].kl1 += draw[m].kl1;
      out[m].kl2 += draw[m].kl2;
      out[m].g1 += draw[m].g1;
      out[m].p1 += draw[m].p1;
      out[m].g2 += draw[m].g2;
      out[m].p2 += draw[m].p2;
    }
  const double J = static_cast<double>(per_draw.size());
  for (auto& e : out) {
    e.kl1 /= J;
    e.kl2 /= J;
    e.g1 /= J;
    e.p1 /= J;
    e.g2 /= J;
    e.p2 /= J;
  }
  return out;
}

enum class Evidence { very_strong, strong, positive, bare_mention };

inline const char* to_string(Evidence e) {
  switch (e) {
    case Evidence::very_strong:
      return "very strong";
    case Evidence::strong:
      return "strong";
    case Evidence::positive:
      return "positive";
    case Evidence::bare_mention:
      return "bare mention";
  }
  return "?";
}

/// Strength of evidence of lack of fit carried by an absolute D-probability,
/// given as its natural log.
inline Evidence classify_evidence(double log_abs_dprob) {
  if (log_abs_dprob < std::log(1.0 / 150.0)) return Evidence::very_strong;
  if (log_abs_dprob < std::log(1.0 / 20.0)) return Evidence::strong;
  if (log_abs_dprob < std::log(1.0 / 3.0)) return Evidence::positive;
  return Evidence::bare_mention;
}

/// Which absolute weight drives the evidence label.
enum class EstimatorChoice { kl1, kl2, both };

struct WeightRow {
  std::string label;
  CandidateModel model;
  double log_pi1 = 0.0;  // -(g1 + p1)
  double log_pi2 = 0.0;
  double cond_pi1 = 0.0;
  double cond_pi2 = 0.0;
  Evidence evidence = Evidence::bare_mention;
};

struct WeightReport {
  std::vector<WeightRow> rows;
  std::vector<std::string> covariates;
  std::vector<double> inclusion1;
  std::vector<double> inclusion2;
};

/// Log absolute D-probabilities, conditional weights by log-sum-exp and
/// per-covariate inclusion probabilities. With EstimatorChoice::both the
/// evidence label follows the larger of the two absolute weights.
inline WeightReport make_report(std::span<const CandidateModel> models, std::span<const KlEstimate> kls,
                                const std::vector<std::string>& covariates,
                                EstimatorChoice evidence_from = EstimatorChoice::both) {
  if (models.empty()) throw InputError("dprob_engine", "cannot report on an empty model list");
  if (models.size() != kls.size()) throw InputError("dprob_engine", "model and estimate counts differ");
  const auto k = static_cast<Index>(models.size());
  Eigen::VectorXd l1(k), l2(k);
  for (Index m = 0; m < k; ++m) {
    l1(m) = -(kls[static_cast<std::size_t>(m)].g1 + kls[static_cast<std::size_t>(m)].p1);
    l2(m) = -(kls[static_cast<std::size_t>(m)].g2 + kls[static_cast<std::size_t>(m)].p2);
  }
  const Eigen::VectorXd c1 = normalize_log_weights(l1);
  const Eigen::VectorXd c2 = normalize_log_weights(l2);

  WeightReport rep;
  rep.covariates = covariates;
  rep.rows.resize(models.size());
  for (Index m = 0; m < k; ++m) {
    auto& row = rep.rows[static_cast<std::size_t>(m)];
    row.model = models[static_cast<std::size_t>(m)];
    row.label = model_label(row.model, covariates);
    row.log_pi1 = l1(m);
    row.log_pi2 = l2(m);
    row.cond_pi1 = c1(m);
    row.cond_pi2 = c2(m);
    const double basis = evidence_from == EstimatorChoice::kl1   ? l1(m)
                         : evidence_from == EstimatorChoice::kl2 ? l2(m)
                                                                 : std::max(l1(m), l2(m));
    row.evidence = classify_evidence(basis);
  }
  rep.inclusion1.assign(covariates.size(), 0.0);
  rep.inclusion2.assign(covariates.size(), 0.0);
  for (const auto& row : rep.rows)
    for (Index c : row.model.subset) {
      rep.inclusion1[static_cast<std::size_t>(c)] += row.cond_pi1;
      rep.inclusion2[static_cast<std::size_t>(c)] += row.cond_pi2;
    }
  return rep;
}

inline Eigen::VectorXd conditional_weights(const WeightReport& rep, int estimator) {
  Eigen::VectorXd w(static_cast<Index>(rep.rows.size()));
  for (std::size_t m = 0; m < rep.rows.size(); ++m)
    w(static_cast<Index>(m)) = estimator == 1 ? rep.rows[m].cond_pi1 : rep.rows[m].cond_pi2;
  return w;
}

/// Scientific-notation display of exp(log_value) that survives underflow.
inline std::string format_log_probability(double log_value) {
  if (!std::isfinite(log_value)) return log_value > 0 ? "inf" : "0";
  const double l10 = log_value / std::log(10.0);
  double expo = std::floor(l10);
  double mant = std::pow(10.0, l10 - expo);
  if (mant >= 9.995) {
    mant /= 10.0;
    expo += 1.0;
  }
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << mant << "e" << (expo < 0 ? "-" : "+")
     << std::abs(static_cast<long long>(expo));
  return os.str();
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace detail

/// model,log_pi1,log_pi2,cond_pi1,cond_pi2,evidence
inline std::string report_csv(const WeightReport& rep) {
  std::ostringstream os;
  os << "model,log_pi1,log_pi2,cond_pi1,cond_pi2,evidence\n";
  for (const auto& r : rep.rows)
    os << detail::csv_quote(r.label) << ',' << detail::fmt_double(r.log_pi1) << ',' << detail::fmt_double(r.log_pi2)
       << ',' << detail::fmt_double(r.cond_pi1) << ',' << detail::fmt_double(r.cond_pi2) << ',' << to_string(r.evidence)
       << '\n';
  return os.str();
}

inline std::string inclusion_csv(const WeightReport& rep) {
  std::ostringstream os;
  os << "covariate,inclusion_pi1,inclusion_pi2\n";
  for (std::size_t c = 0; c < rep.covariates.size(); ++c)
    os << detail::csv_quote(rep.covariates[c]) << ',' << detail::fmt_double(rep.inclusion1[c]) << ','
       << detail::fmt_double(rep.inclusion2[c]) << '\n';
  return os.str();
}

inline nlohmann::json to_json(const WeightReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"model", r.label},
                    {"log_pi1", r.log_pi1},
                    {"log_pi2", r.log_pi2},
                    {"pi1", format_log_probability(r.log_pi1)},
                    {"pi2", format_log_probability(r.log_pi2)},
                    {"cond_pi1", r.cond_pi1},
                    {"cond_pi2", r.cond_pi2},
                    {"evidence", to_string(r.evidence)}});
  nlohmann::json incl = nlohmann::json::array();
  for (std::size_t c = 0; c < rep.covariates.size(); ++c)
    incl.push_back({{"covariate", rep.covariates[c]}, {"pi1", rep.inclusion1[c]}, {"pi2", rep.inclusion2[c]}});
  return {{"models", rows}, {"inclusion", incl}};
}

}  // namespace dprob

#endif  // DPROB_DPROB_ENGINE_HPP
