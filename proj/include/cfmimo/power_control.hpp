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

#ifndef CFMIMO_POWER_CONTROL_HPP
#define CFMIMO_POWER_CONTROL_HPP

#include <optional>
#include <vector>

#include "cfmimo/clustering.hpp"
#include "cfmimo/common.hpp"
#include "cfmimo/precoding.hpp"

namespace cfmimo {

/// Max-min power program over one set of users:
///   maximize min_k SINR_k(eta) = P eta_k / (P (Gamma eta)_k + sigma2)
///   subject to sum_k Omega_mk eta_k <= P for every AP row m, eta >= 0.
/// Gamma combines own-cluster and cross-cluster interference coefficients;
/// Omega rows of APs outside a user's cluster are zero.
struct MaxMinProblem {
  Matrix gamma;   // K x K, non-negative
  Matrix omega;   // M x K, non-negative
  double p_ap = 0.0;
  double sigma2 = 0.0;
};

/// SINR_k = P eta_k / (P (Gamma eta)_k + sigma2), the centralized form; the
/// decentralized form is identical once Gamma is assembled across clusters.
inline Vector evaluate_sinr(const Vector& eta, const Matrix& gamma, double p_ap, double sigma2) {
  Vector denom = p_ap * (gamma * eta).array() + sigma2;
  return (p_ap * eta.array() / denom.array()).matrix();
}

enum class Feasibility { kFeasible, kInfeasible, kNotConverged };

struct FeasibilityResult {
  Feasibility status = Feasibility::kInfeasible;
  Vector eta;  // componentwise-minimal witness when feasible
};

/// Decides whether SINR target t admits eta >= 0 meeting every per-AP power
/// constraint.
///
/// For fixed t the SINR constraints read eta >= t (Gamma eta + sigma2/P 1),
/// a nonnegative linear system whose minimal solution is the limit of the
/// monotone fixed-point iteration from eta = 0. Any feasible point dominates
/// that minimal solution, so it is enough to iterate and test the per-AP
/// constraints on it; a constraint already violated along the (increasing)
/// iterates proves infeasibility early.
inline FeasibilityResult feasibility_check(double t, const MaxMinProblem& prob) {
  const int k_total = static_cast<int>(prob.gamma.rows());
  if (t < 0.0 || !std::isfinite(t)) throw SolverError("feasibility_check: bad target");
  if (!(prob.p_ap > 0.0)) throw SolverError("feasibility_check: p_ap must be positive");

  FeasibilityResult result;
  result.eta = Vector::Zero(k_total);
  if (t == 0.0) {
    result.status = Feasibility::kFeasible;
    return result;
  }

  constexpr int kMaxIters = 2000;
  constexpr double kConvergeTol = 1e-13;
  const double ap_slack = prob.p_ap * (1.0 + 1e-9);
  const Vector noise_term = Vector::Constant(k_total, t * prob.sigma2 / prob.p_ap);

  Vector eta = Vector::Zero(k_total);
  for (int iter = 0; iter < kMaxIters; ++iter) {
    Vector next = t * (prob.gamma * eta) + noise_term;
    if ((prob.omega * next).maxCoeff() > ap_slack) {
      result.status = Feasibility::kInfeasible;
      return result;
    }
    double delta = (next - eta).cwiseAbs().maxCoeff();
    eta = next;
    if (delta <= kConvergeTol * std::max(1e-300, eta.maxCoeff())) {
      result.status = Feasibility::kFeasible;
      result.eta = eta;
      return result;
    }
  }
  result.status = Feasibility::kNotConverged;
  return result;
}

/// Solution of the max-min program.
struct PowerSolution {
  Vector eta;
  double t_star = 0.0;
  Vector sinr;
  Vector rates;  // spectral efficiencies log2(1 + SINR)
  int iterations = 0;
  bool feasible = false;
};

/// Interference-free upper bound used to initialize the bisection:
/// max_k P eta_k^sup / sigma2 with eta_k^sup = min over constraining APs of
/// P / Omega_mk.
inline double maxmin_upper_bound(const MaxMinProblem& prob) {
  const int k_total = static_cast<int>(prob.omega.cols());
  double bound = 0.0;
  for (int k = 0; k < k_total; ++k) {
    double eta_sup = 1e30;
    for (int m = 0; m < prob.omega.rows(); ++m) {
      if (prob.omega(m, k) > 0.0) eta_sup = std::min(eta_sup, prob.p_ap / prob.omega(m, k));
    }
    bound = std::max(bound, prob.p_ap * eta_sup / std::max(prob.sigma2, 1e-300));
  }
  return bound;
}

/// Bisection over the common SINR target. NotConverged feasibility probes are
/// treated as infeasible, which only tightens the search from above. Returns
/// the last feasible witness; all SINRs equal t_star there because the
/// minimal witness makes every SINR constraint tight.
inline PowerSolution solve_maxmin(const MaxMinProblem& prob, double tol = 1e-4,
                                  std::optional<double> t_hi = std::nullopt) {
  if (!(tol > 0.0)) throw ConfigError("solve_maxmin: tol must be positive");
  constexpr int kMaxIters = 64;
  const int k_total = static_cast<int>(prob.gamma.rows());

  PowerSolution sol;
  sol.eta = Vector::Zero(k_total);
  if (k_total == 0) return sol;

  double lo = 0.0;
  double hi = t_hi.value_or(maxmin_upper_bound(prob));
  Vector witness = Vector::Zero(k_total);

  int iters = 0;
  while (iters < kMaxIters && (hi - lo) > tol * hi) {
    double mid = 0.5 * (lo + hi);
    FeasibilityResult fr = feasibility_check(mid, prob);
    ++iters;
    if (fr.status == Feasibility::kFeasible) {
      lo = mid;
      witness = fr.eta;
    } else {
      hi = mid;
    }
  }
  sol.iterations = iters;

  if (lo == 0.0) {
    // Nothing above zero found; probe the tolerance floor before declaring
    // the instance infeasible.
    FeasibilityResult fr = feasibility_check(tol, prob);
    if (fr.status == Feasibility::kFeasible) {
      lo = tol;
      witness = fr.eta;
    } else {
      sol.feasible = false;
      sol.t_star = 0.0;
      sol.sinr = Vector::Zero(k_total);
      sol.rates = Vector::Zero(k_total);
      return sol;
    }
  }

  sol.feasible = true;
  sol.t_star = lo;
  sol.eta = witness;
  sol.sinr = evaluate_sinr(sol.eta, prob.gamma, prob.p_ap, prob.sigma2);
  sol.rates = (sol.sinr.array() + 1.0).log() / std::log(2.0);
  return sol;
}

/// Assembles the network-wide K x K interference matrix for the decentralized
/// SINR expression: own-cluster entries come from gamma^{(d)}, cross-cluster
/// entries from gamma_bar^{(d')}.
inline Matrix build_combined_gamma(const ClusterPartition& partition,
                                   const PartitionInterferenceStats& stats) {
  const int k_total = static_cast<int>(partition.user_to_cpu.size());
  Matrix combined = Matrix::Zero(k_total, k_total);
  for (int l = 0; l < k_total; ++l) {
    const int dl = partition.user_to_cpu[l];
    const int j = partition.local_user_index(l);
    for (int k = 0; k < k_total; ++k) {
      if (partition.user_to_cpu[k] == dl) {
        combined(k, l) = stats.gamma[dl](partition.local_user_index(k), j);
      } else {
        combined(k, l) = stats.gamma_bar[dl](k, j);
      }
    }
  }
  return combined;
}

/// Network-wide M x K power-weight matrix; APs only carry weights for users
/// of their own cluster.
inline Matrix build_combined_omega(const ClusterPartition& partition,
                                   const PartitionInterferenceStats& stats) {
  const int k_total = static_cast<int>(partition.user_to_cpu.size());
  const int m_total = static_cast<int>(partition.ap_to_cpu.size());
  Matrix combined = Matrix::Zero(m_total, k_total);
  for (int d = 0; d < partition.num_cpus(); ++d) {
    const auto& aps = partition.cluster_ap_sets[d];
    const auto& users = partition.cluster_user_sets[d];
    for (std::size_t a = 0; a < aps.size(); ++a) {
      for (std::size_t j = 0; j < users.size(); ++j) {
        combined(aps[a], users[j]) = stats.omega[d](a, j);
      }
    }
  }
  return combined;
}

/// Centralized SINR (single-cluster scope).
inline Vector evaluate_sinr_centralized(const Vector& eta, const Matrix& gamma, double p_ap,
                                        double sigma2) {
  return evaluate_sinr(eta, gamma, p_ap, sigma2);
}

/// Decentralized SINR across clusters: eta is indexed by global user, the
/// interference matrix is assembled from the per-cluster statistics.
inline Vector evaluate_sinr_wc(const Vector& eta, const ClusterPartition& partition,
                               const PartitionInterferenceStats& stats, double p_ap,
                               double sigma2) {
  return evaluate_sinr(eta, build_combined_gamma(partition, stats), p_ap, sigma2);
}

}  // namespace cfmimo

#endif  // CFMIMO_POWER_CONTROL_HPP
