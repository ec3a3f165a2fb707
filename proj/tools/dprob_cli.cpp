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

// Command-line front end. See README.md for usage.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "dprob/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"D-probabilities for linear models against a Gaussian-process reference"};
  dprob::RunConfig cfg;
  std::string g;
  std::uint64_t seed = 0;

  app.add_option("--command", cfg.command, "weights | sim | aggregate | ozone")->required();
  app.add_option("--data", cfg.data, "CSV file with a header row");
  app.add_option("--response", cfg.response, "response column name");
  app.add_option("--estimator", cfg.estimator, "kl1 | kl2 | both")->capture_default_str();
  app.add_option("--prior", cfg.prior, "coefficient prior for D-probabilities: flat | gprior")->capture_default_str();
  auto* g_opt = app.add_option("--g", g, "g for --prior gprior: n or a positive number");
  app.add_option("--hyper", cfg.hyper, "kernel hyperparameters: eb | mcmc")->capture_default_str();
  app.add_option("--restarts", cfg.restarts, "Nelder-Mead restarts")->capture_default_str();
  app.add_option("--mcmc-draws", cfg.mcmc_draws, "kept MCMC draws")->capture_default_str();
  app.add_option("--burn-in", cfg.burn_in, "MCMC burn-in iterations")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "random seed (required)");
  app.add_option("--train-frac", cfg.train_frac, "training fraction for splits")->capture_default_str();
  app.add_option("--reps", cfg.reps, "replications or splits")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--scenario", cfg.scenario, "sim: curvature | case1 | case2 | case3 | case4")->capture_default_str();
  app.add_option("--n", cfg.n, "sim: training sample size")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*g_opt) cfg.g = g;
  if (*seed_opt) cfg.seed = seed;
  return dprob::run_command(cfg, std::cout, std::cerr);
}
