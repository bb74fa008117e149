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

#ifndef CFMIMO_STRATEGIES_HPP
#define CFMIMO_STRATEGIES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cfmimo/power_control.hpp"

namespace cfmimo {

/// Everything one simulation trial needs: the large-scale state of a single
/// throw plus the training/power parameters. Fading draws and pilot noise are
/// generated inside from the trial seed.
struct TrialConfig {
  ClusterPartition partition;
  Matrix beta;  // M x K
  PilotBook book;
  double p_ap = 0.0;
  double p_ms = 0.0;
  double sigma2 = 0.0;
  int n_draws = 0;
  double bisect_tol = 1e-4;
  std::uint64_t seed = 0;
};

/// Per-trial outcome: per-user SINRs from the large-scale SINR expression at
/// the solved power coefficients, and the derived spectral efficiencies.
struct RateReport {
  std::string strategy;
  int num_cpus = 1;
  int num_users = 0;
  std::uint64_t seed = 0;
  Vector sinr;
  Vector rates;  // log2(1 + SINR)
  double min_rate = 0.0;
  double max_rate = 0.0;
  double quotient = 1.0;  // max_rate / min_rate, capped at kQuotientCap
  double mean_rate = 0.0;
  double t_star = 0.0;
  long n_singular_draws = 0;
  bool solver_feasible = false;
};

inline constexpr double kQuotientCap = 1e12;

namespace detail {

inline RateReport make_report(const std::string& strategy, const TrialConfig& trial,
                              const Vector& sinr, double t_star, long n_singular, bool feasible) {
  RateReport rep;
  rep.strategy = strategy;
  rep.num_cpus = trial.partition.num_cpus();
  rep.num_users = static_cast<int>(trial.beta.cols());
  rep.seed = trial.seed;
  rep.sinr = sinr;
  rep.rates = (sinr.array() + 1.0).log() / std::log(2.0);
  rep.min_rate = rep.rates.minCoeff();
  rep.max_rate = rep.rates.maxCoeff();
  rep.quotient = rep.min_rate > 0.0 ? std::min(rep.max_rate / rep.min_rate, kQuotientCap)
                                    : kQuotientCap;
  rep.mean_rate = rep.rates.mean();
  rep.t_star = t_star;
  rep.n_singular_draws = n_singular;
  rep.solver_feasible = feasible;
  return rep;
}

inline Matrix submatrix(const Matrix& full, const std::vector<int>& rows,
                        const std::vector<int>& cols) {
  Matrix sub(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      sub(i, j) = full(rows[i], cols[j]);
    }
  }
  return sub;
}

}  // namespace detail

/// Weak connectivity: local ZF precoders per cluster, but pilot allocation,
/// the gamma/gamma_bar statistics and the max-min power program are handled
/// jointly across CPUs (they only need large-scale information).
inline RateReport run_wc(const TrialConfig& trial) {
  PilotAssignment assignment = assign_pilots(trial.beta, trial.book.tau_p,
                                             rng::derive(trial.seed, rng::stream::kPilots));
  EstimationStats stats =
      estimation_stats(trial.beta, assignment, trial.book, trial.p_ms, trial.sigma2);
  McConfig mc{trial.n_draws, rng::derive(trial.seed, rng::stream::kGamma), trial.p_ms,
              trial.sigma2};
  PartitionInterferenceStats is =
      estimate_interference_stats(trial.beta, stats, assignment, trial.book, trial.partition, mc);

  MaxMinProblem prob{build_combined_gamma(trial.partition, is),
                     build_combined_omega(trial.partition, is), trial.p_ap, trial.sigma2};
  PowerSolution sol = solve_maxmin(prob, trial.bisect_tol);
  return detail::make_report("wc", trial, sol.sinr, sol.t_star, is.n_singular, sol.feasible);
}

/// Strong connectivity: with full CSI exchange the clustered system solves the
/// very same program as a single central unit, so this runs the centralized
/// pipeline on the trivial partition; the result is independent of the number
/// of CPUs. Each CPU's transmit block is a column selection of the overall
/// power-controlled precoder.
inline RateReport run_sc(const TrialConfig& trial) {
  TrialConfig central = trial;
  central.partition = trivial_partition(static_cast<int>(trial.beta.rows()),
                                        static_cast<int>(trial.beta.cols()));
  RateReport rep = run_wc(central);
  rep.strategy = "sc";
  rep.num_cpus = trial.partition.num_cpus();
  return rep;
}

/// The slice of the network a no-connectivity CPU is allowed to see: its own
/// APs' and users' large-scale gains, plus trial parameters and a cluster-local
/// seed. No field depends on out-of-cluster channel data.
struct CpuView {
  int cpu = 0;
  Matrix beta_local;  // M_d x K_d
  std::vector<int> ap_indices;
  std::vector<int> user_indices;
  double p_ap = 0.0;
  double p_ms = 0.0;
  double sigma2 = 0.0;
  int n_draws = 0;
  double bisect_tol = 1e-4;
  std::uint64_t seed = 0;
};

inline CpuView make_cpu_view(const TrialConfig& trial, int cpu) {
  CpuView view;
  view.cpu = cpu;
  view.ap_indices = trial.partition.cluster_ap_sets[cpu];
  view.user_indices = trial.partition.cluster_user_sets[cpu];
  view.beta_local = detail::submatrix(trial.beta, view.ap_indices, view.user_indices);
  view.p_ap = trial.p_ap;
  view.p_ms = trial.p_ms;
  view.sigma2 = trial.sigma2;
  view.n_draws = trial.n_draws;
  view.bisect_tol = trial.bisect_tol;
  view.seed = rng::derive(trial.seed, rng::stream::kNcPlan, cpu);
  return view;
}

/// What a no-connectivity CPU decides on its own: a cluster-local pilot
/// allocation and the power coefficients from a local max-min solve that
/// models only its own cluster (contamination and interference from other
/// clusters are invisible to it).
struct NcCpuPlan {
  std::vector<int> pilot_of_local_user;
  Vector eta_local;
  double t_star = 0.0;
  bool feasible = false;
};

inline NcCpuPlan plan_nc_cpu(const CpuView& view, const PilotBook& book) {
  NcCpuPlan plan;
  const int kd = static_cast<int>(view.user_indices.size());
  plan.eta_local = Vector::Zero(kd);
  if (kd == 0) return plan;

  PilotAssignment local =
      assign_pilots(view.beta_local, book.tau_p, rng::derive(view.seed, rng::stream::kPilots));
  plan.pilot_of_local_user = local.user_to_pilot;

  EstimationStats stats = estimation_stats(view.beta_local, local, book, view.p_ms, view.sigma2);
  McConfig mc{view.n_draws, rng::derive(view.seed, rng::stream::kGamma), view.p_ms, view.sigma2};
  ClusterPartition sub = trivial_partition(static_cast<int>(view.ap_indices.size()), kd);
  PartitionInterferenceStats is =
      estimate_interference_stats(view.beta_local, stats, local, book, sub, mc);

  PowerSolution sol = solve_maxmin(MaxMinProblem{is.gamma[0], is.omega[0], view.p_ap, view.sigma2},
                                   view.bisect_tol);
  plan.eta_local = sol.eta;
  plan.t_star = sol.t_star;
  plan.feasible = sol.feasible;
  return plan;
}

/// No connectivity: pilots and powers are planned per CPU from cluster-local
/// information only; the reported SINRs are then evaluated against the true
/// network statistics (merged pilot map, actual contamination, actual
/// cross-cluster leakage at the chosen powers).
inline RateReport run_nc(const TrialConfig& trial) {
  const int k_total = static_cast<int>(trial.beta.cols());
  const int num_cpus = trial.partition.num_cpus();

  if (num_cpus == 1) {
    // A single CPU's "local" scope is the whole network; no decentralization
    // is left and the run coincides with the centralized one.
    RateReport rep = run_wc(trial);
    rep.strategy = "nc";
    return rep;
  }

  std::vector<NcCpuPlan> plans(num_cpus);
  for (int d = 0; d < num_cpus; ++d) {
    plans[d] = plan_nc_cpu(make_cpu_view(trial, d), trial.book);
  }

  PilotAssignment merged;
  merged.scope = PilotScope::kPerCpu;
  merged.user_to_pilot.assign(k_total, -1);
  Vector eta = Vector::Zero(k_total);
  double t_star = std::numeric_limits<double>::infinity();
  bool any_infeasible = false;
  for (int d = 0; d < num_cpus; ++d) {
    const auto& users = trial.partition.cluster_user_sets[d];
    if (users.empty()) continue;
    for (std::size_t j = 0; j < users.size(); ++j) {
      merged.user_to_pilot[users[j]] = plans[d].pilot_of_local_user[j];
      eta(users[j]) = plans[d].eta_local(j);
    }
    t_star = std::min(t_star, plans[d].t_star);
    any_infeasible |= !plans[d].feasible;
  }
  if (!std::isfinite(t_star)) t_star = 0.0;

  // The realized evaluation shares the fading stream with run_wc/run_sc, so
  // cross-strategy comparisons on one trial use common random draws.
  EstimationStats true_stats =
      estimation_stats(trial.beta, merged, trial.book, trial.p_ms, trial.sigma2);
  McConfig mc{trial.n_draws, rng::derive(trial.seed, rng::stream::kGamma), trial.p_ms,
              trial.sigma2};
  PartitionInterferenceStats is = estimate_interference_stats(trial.beta, true_stats, merged,
                                                              trial.book, trial.partition, mc);
  Vector sinr = evaluate_sinr_wc(eta, trial.partition, is, trial.p_ap, trial.sigma2);
  return detail::make_report("nc", trial, sinr, t_star, is.n_singular, !any_infeasible);
}

inline RateReport run_strategy(const std::string& name, const TrialConfig& trial) {
  if (name == "sc") return run_sc(trial);
  if (name == "wc") return run_wc(trial);
  if (name == "nc") return run_nc(trial);
  throw ConfigError("unknown strategy '" + name + "' (expected sc, wc or nc)");
}

}  // namespace cfmimo

#endif  // CFMIMO_STRATEGIES_HPP
