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

#ifndef DPROB_COMMANDS_HPP
#define DPROB_COMMANDS_HPP

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dprob/baselines.hpp"
#include "dprob/dataset.hpp"
#include "dprob/dprob_engine.hpp"
#include "dprob/error.hpp"
#include "dprob/parallel.hpp"
#include "dprob/simulation.hpp"
#include "dprob/study.hpp"
#include "dprob/svg.hpp"

namespace dprob {

/// Fully resolved command-line settings.
struct RunConfig {
  std::string command;
  std::string data;
  std::string response;
  std::string estimator = "both";
  std::string prior = "flat";
  std::optional<std::string> g;
  std::string hyper = "eb";
  int restarts = 10;
  int mcmc_draws = 200;
  int burn_in = 100;
  std::optional<std::uint64_t> seed;
  double train_frac = 0.5;
  int reps = 100;
  unsigned threads = default_thread_count();
  std::string out;
  std::string scenario = "curvature";
  int n = 100;

  void validate() const {
    const auto bad = [](const std::string& what) { throw InputError("cli", what); };
    const auto one_of = [&](const std::string& flag, const std::string& v, std::initializer_list<const char*> ok) {
      for (const char* o : ok)
        if (v == o) return;
      std::string list;
      for (const char* o : ok) list += (list.empty() ? "" : ", ") + std::string(o);
      bad("--" + flag + " must be one of {" + list + "}, got '" + v + "'");
    };
    one_of("command", command, {"weights", "sim", "aggregate", "ozone"});
    one_of("estimator", estimator, {"kl1", "kl2", "both"});
    one_of("prior", prior, {"flat", "gprior"});
    one_of("hyper", hyper, {"eb", "mcmc"});
    if (!seed) bad("--seed is required");
    if (out.empty()) bad("--out is required");
    if (command != "sim") {
      if (data.empty()) bad("--data is required for '" + command + "'");
      if (response.empty()) bad("--response is required for '" + command + "'");
    } else {
      one_of("scenario", scenario, {"curvature", "case1", "case2", "case3", "case4"});
      if (n < 3) bad("--n must be at least 3");
    }
    if (g && prior == "flat") bad("--g applies only with --prior gprior");
    if (prior == "gprior") (void)g_value(100);
    if (restarts < 1) bad("--restarts must be at least 1");
    if (mcmc_draws < 1) bad("--mcmc-draws must be at least 1");
    if (burn_in < 0) bad("--burn-in must be nonnegative");
    if (!(train_frac > 0.0 && train_frac < 1.0)) bad("--train-frac must lie in (0, 1)");
    if (reps < 1) bad("--reps must be at least 1");
    if (threads < 1) bad("--threads must be at least 1");
  }

  /// g for the D-probability candidates under --prior gprior.
  double g_value(Index n_obs) const {
    const std::string v = g.value_or("n");
    if (v == "n") return static_cast<double>(n_obs);
    if (v == "hyper")
      throw InputError("cli", "--g hyper is only available for the Bayes-factor baselines; D-probabilities need a fixed g");
    double x = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || !(x > 0.0))
      throw InputError("cli", "--g must be 'n', 'hyper' or a positive number, got '" + v + "'");
    return x;
  }

  StudyOptions study_options(Index n_obs) const {
    StudyOptions o;
    o.hyper = hyper == "mcmc" ? HyperMode::mcmc : HyperMode::eb;
    o.restarts = restarts;
    o.mcmc_draws = mcmc_draws;
    o.burn_in = burn_in;
    o.prior = prior == "gprior" ? CoefPrior::gprior(g_value(n_obs)) : CoefPrior::flat();
    o.evidence_from = estimator == "kl1" ? EstimatorChoice::kl1
                      : estimator == "kl2" ? EstimatorChoice::kl2
                                           : EstimatorChoice::both;
    o.threads = threads;
    return o;
  }

  nlohmann::json to_json() const {
    nlohmann::json j = {{"command", command},     {"data", data},         {"response", response},
                        {"estimator", estimator}, {"prior", prior},       {"hyper", hyper},
                        {"restarts", restarts},   {"mcmc_draws", mcmc_draws}, {"burn_in", burn_in},
                        {"train_frac", train_frac}, {"reps", reps},       {"threads", threads},
                        {"out", out},             {"scenario", scenario}, {"n", n}};
    j["g"] = g ? nlohmann::json(*g) : nlohmann::json(nullptr);
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    return j;
  }
};

/// Writes into a private staging directory and moves the files into place
/// only when every output exists. Anything left uncommitted is deleted.
class OutputDir {
 public:
  OutputDir(const std::string& out, const nlohmann::json& config) : final_(out), config_(config) {
    namespace fs = std::filesystem;
    if (fs::exists(final_) && !fs::is_directory(final_))
      throw InputError("cli", "--out '" + out + "' exists and is not a directory");
    staging_ = final_;
    staging_ += ".staging";
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }
  OutputDir(const OutputDir&) = delete;
  OutputDir& operator=(const OutputDir&) = delete;

  ~OutputDir() {
    if (!committed_) {
      std::error_code ec;
      std::filesystem::remove_all(staging_, ec);
    }
  }

  /// Every file gets a <name>.config.json sidecar holding the resolved RunConfig.
  void write(const std::string& name, const std::string& content) {
    put(name, content);
    put(name + ".config.json", config_.dump(2) + "\n");
    names_.push_back(name);
  }

  void commit() {
    namespace fs = std::filesystem;
    fs::create_directories(final_);
    for (const auto& entry : fs::directory_iterator(staging_))
      fs::rename(entry.path(), final_ / entry.path().filename());
    fs::remove_all(staging_);
    committed_ = true;
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  void put(const std::string& name, const std::string& content) {
    std::ofstream f(staging_ / name, std::ios::binary);
    f << content;
    f.close();
    if (!f) throw Error("cli", "failed writing " + (staging_ / name).string());
  }

  std::filesystem::path final_;
  std::filesystem::path staging_;
  nlohmann::json config_;
  std::vector<std::string> names_;
  bool committed_ = false;
};

namespace detail {

inline std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

/// Indices of the k largest weights, ties as in top_model.
inline std::vector<std::size_t> top_k(const std::vector<CandidateModel>& models, const Eigen::VectorXd& w,
                                      std::size_t k) {
  std::vector<std::size_t> idx(models.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double wa = w(static_cast<Index>(a)), wb = w(static_cast<Index>(b));
    if (wa != wb) return wa > wb;
    const auto& sa = models[a].subset;
    const auto& sb = models[b].subset;
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    return sa < sb;
  });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

struct NamedWeights {
  std::string method;
  Eigen::VectorXd w;
};

inline std::vector<NamedWeights> method_weights(const WeightsStudy& st, const std::string& estimator) {
  std::vector<NamedWeights> out;
  if (estimator != "kl2") out.push_back({"d1", conditional_weights(st.report, 1)});
  if (estimator != "kl1") out.push_back({"d2", conditional_weights(st.report, 2)});
  out.push_back({"unit_info", st.unit_info.probs});
  out.push_back({"hyper_g", st.hyper_g.probs});
  out.push_back({"bic", st.bic.probs});
  out.push_back({"ew", st.ew.probs});
  return out;
}

inline void print_top_models(std::ostream& os, const WeightsStudy& st, const Dataset& ds, const std::string& estimator) {
  for (const auto& [method, w] : method_weights(st, estimator)) {
    os << method << '\n';
    for (std::size_t i : top_k(st.models, w, 5))
      os << "  " << std::left << std::setw(48) << model_label(st.models[i], ds.names) << ' '
         << fixed(w(static_cast<Index>(i)), 4) << '\n';
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& r : st.report.rows) best = std::max({best, r.log_pi1, r.log_pi2});
  os << "max absolute D-probability: " << format_log_probability(best) << '\n';
}

inline nlohmann::json hyper_json(const WeightsStudy& st) {
  nlohmann::json j = {{"kernel", to_json(st.cfg)}};
  if (st.eb) j["eb"] = to_json(*st.eb);
  if (st.trace) j["mcmc"] = {{"draws", st.trace->draws.size()}, {"acceptance_rate", st.trace->acceptance_rate}};
  j["reference"] = {{"trH", st.ref.trH}, {"logdet_IplusH", st.ref.logdet_IplusH}, {"rss0", st.ref.rss0}};
  return j;
}

inline nlohmann::json top_json(const WeightsStudy& st, const Dataset& ds, const std::string& estimator) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [method, w] : method_weights(st, estimator)) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i : top_k(st.models, w, 5))
      rows.push_back({{"model", model_label(st.models[i], ds.names)}, {"prob", w(static_cast<Index>(i))}});
    j[method] = rows;
  }
  return j;
}

inline void write_weights_outputs(OutputDir& out, const WeightsStudy& st, const Dataset& ds) {
  out.write("report.csv", report_csv(st.report));
  out.write("report.json", to_json(st.report).dump(2) + "\n");
  out.write("inclusion.csv", inclusion_csv(st.report));
  const std::vector<BaselineWeights> base{st.unit_info, st.hyper_g, st.bic, st.ew};
  out.write("baselines.csv", baselines_csv(base, st.models, ds.names));
}

}  // namespace detail

inline void cmd_weights(const RunConfig& cfg, std::ostream& log) {
  const Dataset ds = load_csv(cfg.data, cfg.response);
  const WeightsStudy st = weights_study(ds, cfg.study_options(ds.n()), *cfg.seed);
  OutputDir out(cfg.out, cfg.to_json());
  detail::write_weights_outputs(out, st, ds);
  nlohmann::json summary = {{"n", ds.n()}, {"p", ds.p()}, {"hyperparameters", detail::hyper_json(st)},
                            {"top_models", detail::top_json(st, ds, cfg.estimator)}};
  out.write("summary.json", summary.dump(2) + "\n");
  out.commit();
  detail::print_top_models(log, st, ds, cfg.estimator);
}

namespace detail {

inline std::string rmse_csv(const std::vector<SplitOutcome>& splits,
                            const std::vector<std::pair<std::string, double SplitOutcome::*>>& methods) {
  std::ostringstream os;
  os << "seed,method,rmse\n";
  for (const auto& s : splits)
    for (const auto& [name, field] : methods) os << s.seed << ',' << name << ',' << fmt_double(s.*field) << '\n';
  return os.str();
}

inline nlohmann::json mean_se(const std::vector<SplitOutcome>& splits, double SplitOutcome::*field) {
  return {{"mean", mean_of(splits, field)}, {"se", std_error_of(splits, field)}};
}

}  // namespace detail

/// Full-data weights plus out-of-sample RMSE of each method's top model over random splits.
inline void cmd_ozone(const RunConfig& cfg, std::ostream& log) {
  const Dataset ds = load_csv(cfg.data, cfg.response);
  const StudyOptions opt = cfg.study_options(ds.n());
  const WeightsStudy st = weights_study(ds, opt, *cfg.seed);
  const auto splits = run_split_study(ds, cfg.train_frac, cfg.reps, *cfg.seed, opt);

  const std::vector<std::pair<std::string, double SplitOutcome::*>> methods{
      {"d1", &SplitOutcome::rmse_top_d1},
      {"d2", &SplitOutcome::rmse_top_d2},
      {"unit_info", &SplitOutcome::rmse_top_unit_info},
      {"hyper_g", &SplitOutcome::rmse_top_hyper_g},
      {"reference", &SplitOutcome::rmse_reference}};

  OutputDir out(cfg.out, cfg.to_json());
  detail::write_weights_outputs(out, st, ds);
  out.write("rmse.csv", detail::rmse_csv(splits, methods));

  nlohmann::json table = nlohmann::json::array();
  const auto table_row = [&](const std::string& method, const Eigen::VectorXd& w, double SplitOutcome::*field) {
    const std::size_t top = top_model(st.models, w);
    table.push_back({{"method", method},
                     {"model", model_label(st.models[top], ds.names)},
                     {"prob", w(static_cast<Index>(top))},
                     {"rmse", detail::mean_se(splits, field)}});
  };
  table_row("d1", conditional_weights(st.report, 1), &SplitOutcome::rmse_top_d1);
  table_row("d2", conditional_weights(st.report, 2), &SplitOutcome::rmse_top_d2);
  table_row("unit_info", st.unit_info.probs, &SplitOutcome::rmse_top_unit_info);
  table_row("hyper_g", st.hyper_g.probs, &SplitOutcome::rmse_top_hyper_g);

  double best_log = -std::numeric_limits<double>::infinity();
  for (const auto& r : st.report.rows) best_log = std::max({best_log, r.log_pi1, r.log_pi2});
  int gp_wins = 0;
  for (const auto& s : splits) gp_wins += s.rmse_reference < s.best_linear_rmse() ? 1 : 0;

  nlohmann::json summary = {{"n", ds.n()},
                            {"p", ds.p()},
                            {"hyperparameters", detail::hyper_json(st)},
                            {"table", table},
                            {"max_log10_absolute_dprob", best_log / std::log(10.0)},
                            {"reference_rmse", detail::mean_se(splits, &SplitOutcome::rmse_reference)},
                            {"reference_beats_best_linear_fraction", static_cast<double>(gp_wins) / splits.size()},
                            {"splits", splits.size()}};
  out.write("summary.json", summary.dump(2) + "\n");

  std::vector<std::pair<std::string, std::vector<double>>> groups;
  for (const auto& [name, field] : methods) {
    std::vector<double> v;
    for (const auto& s : splits) v.push_back(s.*field);
    groups.emplace_back(name, std::move(v));
  }
  out.write("rmse.svg", svg::box_chart(groups, "Out-of-sample RMSE of top models", "RMSE"));
  out.commit();

  log << std::left << std::setw(10) << "method" << std::setw(48) << "variables" << std::setw(12) << "probability"
      << "rmse\n";
  for (const auto& row : table)
    log << std::setw(10) << row["method"].get<std::string>() << std::setw(48) << row["model"].get<std::string>()
        << std::setw(12) << detail::fixed(row["prob"].get<double>(), 2)
        << detail::fixed(row["rmse"]["mean"].get<double>(), 2) << '\n';
  log << "reference GP rmse " << detail::fixed(summary["reference_rmse"]["mean"].get<double>(), 2)
      << ", max absolute D-probability " << format_log_probability(best_log) << '\n';
}

/// Weighted-average predictions under D-probabilities and exponential weighting.
inline void cmd_aggregate(const RunConfig& cfg, std::ostream& log) {
  const Dataset ds = load_csv(cfg.data, cfg.response);
  const auto splits = run_split_study(ds, cfg.train_frac, cfg.reps, *cfg.seed, cfg.study_options(ds.n()));
  const std::vector<std::pair<std::string, double SplitOutcome::*>> rmses{
      {"d1", &SplitOutcome::rmse_agg_d1}, {"d2", &SplitOutcome::rmse_agg_d2}, {"ew", &SplitOutcome::rmse_agg_ew}};
  const std::vector<std::pair<std::string, double SplitOutcome::*>> enms{
      {"d1", &SplitOutcome::enm_d1}, {"d2", &SplitOutcome::enm_d2}, {"ew", &SplitOutcome::enm_ew}};

  OutputDir out(cfg.out, cfg.to_json());
  out.write("rmse.csv", detail::rmse_csv(splits, rmses));

  std::ostringstream diff, enm;
  diff << "seed,method,rmse_minus_ew\n";
  enm << "seed,method,effective_models\n";
  std::vector<double> d1, d2;
  for (const auto& s : splits) {
    diff << s.seed << ",d1," << detail::fmt_double(s.rmse_agg_d1 - s.rmse_agg_ew) << '\n';
    diff << s.seed << ",d2," << detail::fmt_double(s.rmse_agg_d2 - s.rmse_agg_ew) << '\n';
    d1.push_back(s.rmse_agg_d1 - s.rmse_agg_ew);
    d2.push_back(s.rmse_agg_d2 - s.rmse_agg_ew);
    for (const auto& [name, field] : enms) enm << s.seed << ',' << name << ',' << detail::fmt_double(s.*field) << '\n';
  }
  out.write("differences.csv", diff.str());
  out.write("effective_models.csv", enm.str());

  nlohmann::json summary = {{"splits", splits.size()}};
  for (const auto& [name, field] : rmses) summary["rmse"][name] = detail::mean_se(splits, field);
  for (const auto& [name, field] : enms) summary["effective_models"][name] = detail::mean_se(splits, field);
  out.write("summary.json", summary.dump(2) + "\n");
  out.write("differences.svg", svg::box_chart({{"D1", d1}, {"D2", d2}}, "RMSE minus EW RMSE", "difference"));
  out.commit();

  for (const auto& [name, field] : rmses)
    log << std::left << std::setw(4) << name << " rmse " << detail::fixed(mean_of(splits, field), 3)
        << "  effective models "
        << detail::fixed(summary["effective_models"][name]["mean"].get<double>(), 2) << '\n';
}

namespace detail {

inline SimScenario scenario_from(const RunConfig& cfg, double gamma) {
  SimScenario s;
  s.n = cfg.n;
  s.gamma = gamma;
  s.kind = cfg.scenario == "case1"   ? MeanKind::case1
           : cfg.scenario == "case2" ? MeanKind::case2
           : cfg.scenario == "case3" ? MeanKind::case3
           : cfg.scenario == "case4" ? MeanKind::case4
                                     : MeanKind::curvature;
  return s;
}

}  // namespace detail

/// Replications over the curvature grid or one of the fixed cases.
inline void cmd_sim(const RunConfig& cfg, std::ostream& log) {
  const bool curvature = cfg.scenario == "curvature";
  const std::vector<double> gammas = curvature ? curvature_grid() : std::vector<double>{0.0};
  SimOptions so;
  so.hyper = cfg.hyper == "mcmc" ? HyperMode::mcmc : HyperMode::eb;
  so.restarts = cfg.restarts;
  so.mcmc_draws = cfg.mcmc_draws;
  so.burn_in = cfg.burn_in;
  so.threads = cfg.threads;

  std::ostringstream reps, curves;
  reps << "scenario,gamma,rep,method,metric,value\n";
  curves << "scenario,gamma,delta_full,delta_null,method,prob_full,kl_full,kl_null,rmse\n";
  struct Point {
    double delta_full;
    std::vector<ReplicationOutcome> out;
  };
  std::vector<Point> points;
  nlohmann::json summary = nlohmann::json::array();
  const std::vector<Index> full{0};
  for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
    const SimScenario scn = detail::scenario_from(cfg, gammas[gi]);
    const auto outcomes = run_replications(scn, cfg.reps, *cfg.seed, so);
    const double dF = delta_oracle(scn, full).delta;
    const double dN = delta_oracle(scn, {}).delta;
    const std::string g = curvature ? detail::fmt_double(gammas[gi]) : "";
    for (const auto& row : replication_table(outcomes))
      reps << cfg.scenario << ',' << g << ',' << row.rep << ',' << row.method << ',' << row.metric << ','
           << detail::fmt_double(row.value) << '\n';
    const auto line = [&](const char* method, double prob, std::optional<double> klF, std::optional<double> klN,
                          double rm) {
      curves << cfg.scenario << ',' << g << ',' << detail::fmt_double(dF) << ',' << detail::fmt_double(dN) << ','
             << method << ',' << detail::fmt_double(prob) << ',' << (klF ? detail::fmt_double(*klF) : "") << ','
             << (klN ? detail::fmt_double(*klN) : "") << ',' << detail::fmt_double(rm) << '\n';
    };
    using R = ReplicationOutcome;
    line("d1", mean_of(outcomes, &R::cond1_full), mean_of(outcomes, &R::kl1_full), mean_of(outcomes, &R::kl1_null),
         mean_of(outcomes, &R::rmse_d1));
    line("d2", mean_of(outcomes, &R::cond2_full), mean_of(outcomes, &R::kl2_full), mean_of(outcomes, &R::kl2_null),
         mean_of(outcomes, &R::rmse_d2));
    line("unit_info", mean_of(outcomes, &R::unit_info_full), {}, {}, mean_of(outcomes, &R::rmse_unit_info));
    line("hyper_g", mean_of(outcomes, &R::hyper_g_full), {}, {}, mean_of(outcomes, &R::rmse_hyper_g));
    line("reference", std::numeric_limits<double>::quiet_NaN(), {}, {}, mean_of(outcomes, &R::rmse_reference));
    summary.push_back({{"scenario", scn.name()},
                       {"delta_full", dF},
                       {"delta_null", dN},
                       {"mean_cond_full_d1", mean_of(outcomes, &R::cond1_full)},
                       {"mean_cond_full_d2", mean_of(outcomes, &R::cond2_full)},
                       {"mean_kl1_full", mean_of(outcomes, &R::kl1_full)},
                       {"mean_kl2_full", mean_of(outcomes, &R::kl2_full)}});
    log << "[" << gi + 1 << "/" << gammas.size() << "] " << scn.name() << " done\n";
    points.push_back({dF, outcomes});
  }

  OutputDir out(cfg.out, cfg.to_json());
  out.write("replications.csv", reps.str());
  out.write("curves.csv", curves.str());
  out.write("summary.json", summary.dump(2) + "\n");
  if (curvature) {
    using R = ReplicationOutcome;
    const auto series = [&](const std::string& name, double R::*field) {
      svg::Series s{name, {}, {}};
      for (const auto& p : points) {
        s.x.push_back(p.delta_full);
        s.y.push_back(mean_of(p.out, field));
      }
      return s;
    };
    out.write("prob_full.svg", svg::line_chart({series("D1", &R::cond1_full), series("D2", &R::cond2_full),
                                                series("unit info", &R::unit_info_full),
                                                series("hyper-g", &R::hyper_g_full)},
                                               "Probability of the linear model", "delta_F", "probability"));
    out.write("kl.svg", svg::line_chart({series("KL1 full", &R::kl1_full), series("KL2 full", &R::kl2_full),
                                         series("KL1 null", &R::kl1_null), series("KL2 null", &R::kl2_null)},
                                        "Estimated divergences", "delta_F", "KL"));
    out.write("rmse.svg", svg::line_chart({series("D1", &R::rmse_d1), series("D2", &R::rmse_d2),
                                           series("unit info", &R::rmse_unit_info),
                                           series("hyper-g", &R::rmse_hyper_g),
                                           series("reference", &R::rmse_reference)},
                                          "Out-of-sample RMSE", "delta_F", "RMSE"));
  } else {
    using R = ReplicationOutcome;
    std::vector<std::pair<std::string, std::vector<double>>> groups;
    for (const auto& [name, field] :
         std::vector<std::pair<std::string, double R::*>>{{"D1", &R::rmse_d1},
                                                          {"D2", &R::rmse_d2},
                                                          {"unit info", &R::rmse_unit_info},
                                                          {"hyper-g", &R::rmse_hyper_g},
                                                          {"reference", &R::rmse_reference}}) {
      std::vector<double> v;
      for (const auto& o : points.front().out) v.push_back(o.*field);
      groups.emplace_back(name, std::move(v));
    }
    out.write("rmse.svg", svg::box_chart(groups, "Out-of-sample RMSE, " + cfg.scenario, "RMSE"));
  }
  out.commit();
}

/// Validates, dispatches and maps failures to exit codes: 0 success,
/// 2 bad input or configuration, 1 anything else.
inline int run_command(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    cfg.validate();
    if (cfg.command == "weights")
      cmd_weights(cfg, log);
    else if (cfg.command == "ozone")
      cmd_ozone(cfg, log);
    else if (cfg.command == "aggregate")
      cmd_aggregate(cfg, log);
    else
      cmd_sim(cfg, err);
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dprob

#endif  // DPROB_COMMANDS_HPP
