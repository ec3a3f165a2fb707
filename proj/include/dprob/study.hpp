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

#ifndef DPROB_STUDY_HPP
#define DPROB_STUDY_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dprob/aggregate.hpp"
#include "dprob/baselines.hpp"
#include "dprob/candidate_models.hpp"
#include "dprob/dataset.hpp"
#include "dprob/dprob_engine.hpp"
#include "dprob/hyper_select.hpp"
#include "dprob/parallel.hpp"
#include "dprob/simulation.hpp"

namespace dprob {

struct StudyOptions {
  HyperMode hyper = HyperMode::eb;
  int restarts = 10;
  int mcmc_draws = 200;
  int burn_in = 100;
  CoefPrior prior{};  // for the D-probability candidates
  EstimatorChoice evidence_from = EstimatorChoice::both;
  unsigned threads = 1;
};

/// Everything computed from one dataset: reference hyperparameters, D-probability
/// report and the classical baselines over all 2^p subsets.
struct WeightsStudy {
  std::vector<CandidateModel> models;
  KernelConfig cfg;  // EB optimum, or the posterior mean of log hyperparameters under MCMC
  std::optional<EBResult> eb;
  std::optional<McmcTrace> trace;
  ReferenceFit ref;
  std::vector<KlEstimate> kls;
  WeightReport report;
  BaselineWeights unit_info, hyper_g, bic, ew;
};

inline WeightsStudy weights_study(const Dataset& ds, const StudyOptions& opt, std::uint64_t seed) {
  WeightsStudy st;
  st.models = enumerate_subsets(ds.p(), opt.prior);
  if (opt.hyper == HyperMode::eb) {
    EbOptions eo;
    eo.threads = opt.threads;
    st.eb = optimize_eb(ds.X, ds.y, opt.restarts, seed, eo);
    st.cfg = st.eb->cfg;
    st.ref = fit_reference(ds.X, ds.y, st.cfg);
    st.kls = model_kls(ds.X, ds.y, st.models, st.ref, opt.threads, &ds.names);
  } else {
    // The chain starts from the EB optimum so burn-in is spent mixing, not travelling.
    EbOptions eo;
    eo.threads = opt.threads;
    st.eb = optimize_eb(ds.X, ds.y, opt.restarts, seed, eo);
    McmcOptions mo;
    mo.start = st.eb->cfg;
    st.trace = sample_mcmc(ds.X, ds.y, opt.mcmc_draws, opt.burn_in, seed, mo);
    st.kls = model_kls_over_trace(ds.X, ds.y, st.models, *st.trace, opt.threads, &ds.names);
    Eigen::VectorXd mean_theta = Eigen::VectorXd::Zero(ds.p() + 1);
    for (const auto& d : st.trace->draws) mean_theta += log_from_config(d);
    st.cfg = config_from_log(mean_theta / static_cast<double>(st.trace->draws.size()));
    st.ref = fit_reference(ds.X, ds.y, st.cfg);
  }
  st.report = make_report(st.models, st.kls, ds.names, opt.evidence_from);
  st.unit_info = gprior_weights(ds.X, ds.y, st.models, GPriorMode::unit_info);
  st.hyper_g = gprior_weights(ds.X, ds.y, st.models, GPriorMode::hyper_g);
  st.bic = bic_weight_scores(ds.X, ds.y, st.models);
  st.ew = exponential_weights(ds.X, ds.y, st.models, reference_noise_variance(st.ref));
  return st;
}

/// One random train/test split: top-model and aggregated predictions.
struct SplitOutcome {
  int split = 0;
  std::uint64_t seed = 0;
  double rmse_reference = 0.0;
  double rmse_top_d1 = 0.0, rmse_top_d2 = 0.0, rmse_top_unit_info = 0.0, rmse_top_hyper_g = 0.0;
  double rmse_agg_d1 = 0.0, rmse_agg_d2 = 0.0, rmse_agg_ew = 0.0;
  double enm_d1 = 0.0, enm_d2 = 0.0, enm_ew = 0.0;

  double best_linear_rmse() const {
    return std::min({rmse_top_d1, rmse_top_d2, rmse_top_unit_info, rmse_top_hyper_g});
  }
};

/// Hyperparameters are re-selected on every training half; the EW plug-in
/// variance comes from that split's reference posterior.
inline SplitOutcome run_split(const Dataset& ds, double train_frac, int s, std::uint64_t seed,
                              const StudyOptions& opt) {
  const SplitPlan plan = split(ds, train_frac, seed);
  const Dataset train = ds.rows(plan.train_indices);
  const Dataset test = ds.rows(plan.test_indices);

  StudyOptions inner = opt;
  inner.threads = 1;
  const WeightsStudy st = weights_study(train, inner, seed);
  const PredictionSet preds = predict_all(train.X, train.y, st.models, test.X);

  SplitOutcome out;
  out.split = s;
  out.seed = seed;
  const auto top_rmse = [&](const Eigen::VectorXd& w) {
    return rmse(preds.model_preds.row(static_cast<Index>(top_model(st.models, w))).transpose(), test.y);
  };
  const Eigen::VectorXd w1 = conditional_weights(st.report, 1);
  const Eigen::VectorXd w2 = conditional_weights(st.report, 2);
  out.rmse_top_d1 = top_rmse(w1);
  out.rmse_top_d2 = top_rmse(w2);
  out.rmse_top_unit_info = top_rmse(st.unit_info.probs);
  out.rmse_top_hyper_g = top_rmse(st.hyper_g.probs);
  out.rmse_agg_d1 = rmse(aggregate(preds, w1), test.y);
  out.rmse_agg_d2 = rmse(aggregate(preds, w2), test.y);
  out.rmse_agg_ew = rmse(aggregate(preds, st.ew.probs), test.y);
  out.enm_d1 = effective_models(w1);
  out.enm_d2 = effective_models(w2);
  out.enm_ew = effective_models(st.ew.probs);
  out.rmse_reference = rmse(predict_reference(train.X, train.y, st.cfg, st.ref, test.X), test.y);
  return out;
}

/// Split s uses seed + s for both the partition and the hyperparameter search.
inline std::vector<SplitOutcome> run_split_study(const Dataset& ds, double train_frac, int splits, std::uint64_t seed,
                                                 const StudyOptions& opt) {
  if (splits < 1) throw InputError("aggregate_predict", "need at least one split");
  std::vector<SplitOutcome> out(static_cast<std::size_t>(splits));
  parallel_for(out.size(), opt.threads, [&](std::size_t s) {
    try {
      out[s] = run_split(ds, train_frac, static_cast<int>(s), seed + s, opt);
    } catch (const std::exception& e) {
      throw Error("aggregate_predict", "split " + std::to_string(s) + ": " + e.what());
    }
  });
  return out;
}

inline double mean_of(std::span<const SplitOutcome> outcomes, double SplitOutcome::*field) {
  if (outcomes.empty()) throw InputError("aggregate_predict", "no splits to average");
  double s = 0.0;
  for (const auto& o : outcomes) s += o.*field;
  return s / static_cast<double>(outcomes.size());
}

inline double std_error_of(std::span<const SplitOutcome> outcomes, double SplitOutcome::*field) {
  const double m = mean_of(outcomes, field);
  if (outcomes.size() < 2) return 0.0;
  double ss = 0.0;
  for (const auto& o : outcomes) ss += (o.*field - m) * (o.*field - m);
  return std::sqrt(ss / static_cast<double>(outcomes.size() - 1) / static_cast<double>(outcomes.size()));
}

}  // namespace dprob

#endif  // DPROB_STUDY_HPP
