/*
 * Copyright 2026 The cfmimo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: single runs, sweeps over load/CPU count/strategy,
// and the brute-force oracle checks.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "cfmimo/cfmimo.hpp"
#include "cfmimo/oracles.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

struct CommonOpts {
  std::string config_path;
  std::string out_path = "results.csv";
  std::string format = "csv";
  std::string strategies;
  bool desk_scale = false;
  bool paper_scale = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

cfmimo::ScenarioConfig resolve_config(const CommonOpts& opts) {
  cfmimo::ScenarioConfig cfg;
  if (opts.desk_scale) {
    cfg = cfmimo::desk_scale_config();
  } else if (opts.paper_scale) {
    cfg = cfmimo::paper_scale_config();
  }
  if (!opts.config_path.empty()) {
    cfg = cfmimo::load_config(opts.config_path, cfg);
  } else if (!opts.desk_scale && !opts.paper_scale) {
    throw cfmimo::ConfigError("no configuration given: pass --config, --desk-scale or --paper-scale");
  }
  if (opts.seed_set) cfg.master_seed = opts.seed;
  if (!opts.strategies.empty()) cfg.strategies = cfmimo::parse_strategies(opts.strategies);
  return cfg;
}

cfmimo::OutputFormat resolve_format(const std::string& format) {
  if (format == "csv") return cfmimo::OutputFormat::kCsv;
  if (format == "json") return cfmimo::OutputFormat::kJson;
  throw cfmimo::ConfigError("unknown output format '" + format + "' (expected csv or json)");
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Path to a flat JSON config file");
  cmd->add_option("--seed", opts.seed, "Override the master seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--out", opts.out_path, "Output file path");
  cmd->add_option("--format", opts.format, "Output format: csv or json");
  cmd->add_option("--strategies", opts.strategies, "Comma-separated list from sc,wc,nc");
  cmd->add_flag("--desk-scale", opts.desk_scale, "Start from the reduced desk-scale preset");
  cmd->add_flag("--paper-scale", opts.paper_scale, "Start from the full-size preset (long-running)");
}

void print_summary(const cfmimo::ResultTable& table) {
  for (const auto& agg : table.aggregates) {
    std::printf("%-3s D=%d K=%-3d n=%-3d mean min_rate=%-12.6g mean quotient=%-12.6g dropped=%d\n",
                agg.strategy.c_str(), agg.D, agg.K, agg.n, agg.min_rate, agg.quotient,
                agg.dropped_trials);
  }
}

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> out;
  for (const auto& tok : cfmimo::parse_strategies(csv)) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw cfmimo::ConfigError(std::string("bad ") + what + " list entry '" + tok + "'");
    }
  }
  if (out.empty()) throw cfmimo::ConfigError(std::string("empty ") + what + " list");
  return out;
}

int run_oracles(const std::string& which, int instances, std::uint64_t seed) {
  using namespace cfmimo;
  bool all_ok = true;
  auto report = [&](const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] oracle %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    all_ok = all_ok && ok;
  };

  if (which == "all" || which == "maxmin-grid") {
    rng::Engine engine(rng::derive(seed, 0x91));
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
      MaxMinProblem prob;
      prob.gamma = Matrix::Zero(2, 2);
      prob.omega = Matrix::Zero(3, 2);
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) prob.gamma(r, c) = 0.3 * engine.uniform();
      }
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 2; ++c) prob.omega(r, c) = 0.7 + 0.8 * engine.uniform();
      }
      prob.p_ap = 1.0;
      prob.sigma2 = 1.0;
      double grid = oracle::maxmin_grid_search_2user(prob, 1e-3);
      double bisect = solve_maxmin(prob, 1e-6).t_star;
      worst = std::max(worst, std::abs(grid - bisect));
    }
    report("maxmin-grid", worst < 2e-3,
           "max |t_grid - t_bisect| = " + std::to_string(worst) + " over " +
               std::to_string(instances) + " instances");
  }

  if (which == "all" || which == "kmeans-enum") {
    NetworkGeometry geom;
    geom.side_length_m = 1000.0;
    geom.ap_positions = {{100, 100}, {110, 100}, {900, 900}, {910, 900}};
    geom.ms_positions = {{0, 0}};
    auto clusters = cluster_aps(geom, 2, seed);
    auto best = oracle::best_two_partition(geom.ap_positions, geom.side_length_m);
    bool match = (clusters.ap_to_cpu[0] == clusters.ap_to_cpu[1]) &&
                 (clusters.ap_to_cpu[2] == clusters.ap_to_cpu[3]) &&
                 (clusters.ap_to_cpu[0] != clusters.ap_to_cpu[2]) && (best[0] == best[1]) &&
                 (best[2] == best[3]) && (best[0] != best[2]);
    report("kmeans-enum", match, "k-means and enumeration agree on the 2x2 toy layout");
  }

  if (which == "all" || which == "gamma-k1") {
    Matrix beta(4, 1);
    beta << 2e-1, 1e-1, 5e-2, 2.5e-2;
    PilotBook book = build_pilot_book(2);
    PilotAssignment assignment{{0}, PilotScope::kGlobal};
    McConfig mc{200, rng::derive(seed, 0x92), 0.1, 1e-3};
    EstimationStats stats = estimation_stats(beta, assignment, book, mc.p_ms, mc.sigma2);
    auto ref = oracle::gamma_k1_oracle(beta, stats, assignment, book, mc);
    auto est = estimate_gamma(beta, stats, assignment, book, mc);
    double gamma_err = std::abs(ref.gamma - est.gamma(0, 0)) / ref.gamma;
    double omega_err = (ref.omega - est.omega.col(0)).cwiseAbs().maxCoeff();
    report("gamma-k1", gamma_err < 1e-10 && omega_err < 1e-10,
           "relative gamma deviation " + std::to_string(gamma_err));
  }

  return all_ok ? kExitOk : kExitRuntimeError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free massive MIMO downlink simulator"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a single scenario configuration");
  add_common(run_cmd, run_opts);

  CommonOpts sweep_opts;
  std::string sweep_k = "6,12,18";
  std::string sweep_d;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Grid sweep over K, D and strategies");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--K", sweep_k, "Comma-separated user loads");
  sweep_cmd->add_option("--D", sweep_d, "Comma-separated CPU counts (default: config D)");

  std::string oracle_which = "all";
  int oracle_instances = 10;
  std::uint64_t oracle_seed = 7;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Run the brute-force oracle checks against the solvers");
  oracle_cmd->add_option("--which", oracle_which, "all, maxmin-grid, kmeans-enum or gamma-k1");
  oracle_cmd->add_option("--instances", oracle_instances, "Instances for randomized oracles");
  oracle_cmd->add_option("--seed", oracle_seed, "Oracle RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      cfmimo::ScenarioConfig cfg = resolve_config(run_opts);
      cfmimo::ResultTable table = cfmimo::run_experiment(cfg);
      cfmimo::emit_results(table, run_opts.out_path, resolve_format(run_opts.format));
      print_summary(table);
      std::printf("results written to %s\n", run_opts.out_path.c_str());
      return kExitOk;
    }
    if (sweep_cmd->parsed()) {
      cfmimo::ScenarioConfig cfg = resolve_config(sweep_opts);
      std::vector<int> loads = parse_int_list(sweep_k, "K");
      std::vector<int> cpu_counts =
          sweep_d.empty() ? std::vector<int>{cfg.D} : parse_int_list(sweep_d, "D");
      cfmimo::ResultTable table = cfmimo::run_sweep(cfg, loads, cpu_counts, cfg.strategies);
      cfmimo::emit_results(table, sweep_opts.out_path, resolve_format(sweep_opts.format));
      print_summary(table);
      std::printf("results written to %s\n", sweep_opts.out_path.c_str());
      return kExitOk;
    }
    if (oracle_cmd->parsed()) {
      return run_oracles(oracle_which, oracle_instances, oracle_seed);
    }
  } catch (const cfmimo::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntimeError;
  }
  return kExitOk;
}
