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

// Brute-force reference implementations kept deliberately independent of the
// main code paths they are used to verify. Shared by the test suites and the
// `oracle` CLI subcommand.

#ifndef CFMIMO_ORACLES_HPP
#define CFMIMO_ORACLES_HPP

#include <vector>

#include "cfmimo/power_control.hpp"
#include "cfmimo/strategies.hpp"

namespace cfmimo::oracle {

/// Exhaustive grid search for the two-user max-min program: max over the
/// feasible grid of min_k SINR_k, explicit loops only.
inline double maxmin_grid_search_2user(const MaxMinProblem& prob, double step) {
  const int m_total = static_cast<int>(prob.omega.rows());
  double eta_max[2];
  for (int k = 0; k < 2; ++k) {
    double cap = 1e30;
    for (int m = 0; m < m_total; ++m) {
      if (prob.omega(m, k) > 0.0) cap = std::min(cap, prob.p_ap / prob.omega(m, k));
    }
    eta_max[k] = cap;
  }
  const long n0 = static_cast<long>(eta_max[0] / step) + 1;
  const long n1 = static_cast<long>(eta_max[1] / step) + 1;

  double best = 0.0;
  for (long i = 0; i <= n0; ++i) {
    const double e0 = std::min(i * step, eta_max[0]);
    for (long j = 0; j <= n1; ++j) {
      const double e1 = std::min(j * step, eta_max[1]);
      bool ok = true;
      for (int m = 0; m < m_total && ok; ++m) {
        if (prob.omega(m, 0) * e0 + prob.omega(m, 1) * e1 > prob.p_ap * (1.0 + 1e-12)) ok = false;
      }
      if (!ok) continue;
      const double d0 = prob.p_ap * (prob.gamma(0, 0) * e0 + prob.gamma(0, 1) * e1) + prob.sigma2;
      const double d1 = prob.p_ap * (prob.gamma(1, 0) * e0 + prob.gamma(1, 1) * e1) + prob.sigma2;
      const double sinr0 = prob.p_ap * e0 / d0;
      const double sinr1 = prob.p_ap * e1 / d1;
      best = std::max(best, std::min(sinr0, sinr1));
    }
  }
  return best;
}

namespace detail {

/// 1-D circle mean by two-stage grid search (independent of the production
/// centroid update).
inline double grid_circle_mean(const std::vector<double>& xs, double L) {
  auto cost = [&](double c) {
    double acc = 0.0;
    for (double x : xs) {
      double d = std::abs(x - c);
      d = std::min(d, L - d);
      acc += d * d;
    }
    return acc;
  };
  double best_c = 0.0;
  double best = std::numeric_limits<double>::infinity();
  const double coarse = L / 2000.0;
  for (double c = 0.0; c < L; c += coarse) {
    double v = cost(c);
    if (v < best) {
      best = v;
      best_c = c;
    }
  }
  const double fine = coarse / 100.0;
  double center = best_c;
  for (double c = center - coarse; c <= center + coarse; c += fine) {
    double cc = std::fmod(c + L, L);
    double v = cost(cc);
    if (v < best) {
      best = v;
      best_c = cc;
    }
  }
  return best_c;
}

}  // namespace detail

/// Exhaustive enumeration of all 2-partitions of a point set on the torus;
/// returns the assignment minimizing the within-cluster sum of squared
/// wrap-around distances (cluster ids normalized so point 0 is in cluster 0).
inline std::vector<int> best_two_partition(const std::vector<Point>& pts, double L) {
  const int n = static_cast<int>(pts.size());
  auto wcss = [&](const std::vector<int>& assign) {
    double total = 0.0;
    for (int c = 0; c < 2; ++c) {
      std::vector<double> xs, ys;
      for (int i = 0; i < n; ++i) {
        if (assign[i] == c) {
          xs.push_back(pts[i][0]);
          ys.push_back(pts[i][1]);
        }
      }
      if (xs.empty()) continue;
      Point centroid(detail::grid_circle_mean(xs, L), detail::grid_circle_mean(ys, L));
      for (int i = 0; i < n; ++i) {
        if (assign[i] == c) {
          double d = wrap_distance(pts[i], centroid, L);
          total += d * d;
        }
      }
    }
    return total;
  };

  std::vector<int> best_assign;
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n) - 1; ++mask) {
    std::vector<int> assign(n);
    for (int i = 0; i < n; ++i) assign[i] = (mask >> i) & 1;
    if (assign[0] != 0) continue;  // complement symmetry
    double v = wcss(assign);
    if (v < best) {
      best = v;
      best_assign = assign;
    }
  }
  return best_assign;
}

/// Single-user gamma/omega by direct re-implementation, replaying the draw
/// streams of estimate_interference_stats (fading stream kFading, pilot noise
/// stream kPilotNoise, indexed by attempt).
struct GammaK1Oracle {
  double gamma = 0.0;
  Vector omega;
};

inline GammaK1Oracle gamma_k1_oracle(const Matrix& beta, const EstimationStats& stats,
                                     const PilotAssignment& assignment, const PilotBook& book,
                                     const McConfig& mc) {
  const int m_total = static_cast<int>(beta.rows());
  GammaK1Oracle out;
  out.omega = Vector::Zero(m_total);
  for (int i = 0; i < mc.n_draws; ++i) {
    ChannelRealization ch = realize_channel(beta, rng::derive(mc.seed, rng::stream::kFading, i));
    CMatrix y = receive_pilots(ch, assignment, book, mc.p_ms, mc.sigma2,
                               rng::derive(mc.seed, rng::stream::kPilotNoise, i));
    CMatrix ghat = cfmimo::detail::mmse_estimate_with_stats(y, beta, assignment, book, mc.p_ms, stats);
    // Pseudo-inverse of a single column: w = conj(ghat) / ||ghat||^2.
    double norm2 = 0.0;
    for (int m = 0; m < m_total; ++m) norm2 += std::norm(ghat(m, 0));
    double draw_gamma = 0.0;
    for (int m = 0; m < m_total; ++m) {
      double w2 = std::norm(ghat(m, 0)) / (norm2 * norm2);
      draw_gamma += w2 * stats.error_var(m, 0);
      out.omega(m) += w2;
    }
    out.gamma += draw_gamma;
  }
  out.gamma /= mc.n_draws;
  out.omega /= mc.n_draws;
  return out;
}

/// Cross-cluster leakage by direct averaging of |g_k^T W^{(d)} e_j|^2 with an
/// explicitly inverted Gram matrix, replaying the shared draw streams.
inline std::vector<Matrix> gamma_bar_bruteforce(const Matrix& beta, const EstimationStats& stats,
                                                const PilotAssignment& assignment,
                                                const PilotBook& book,
                                                const ClusterPartition& partition,
                                                const McConfig& mc) {
  const int k_total = static_cast<int>(beta.cols());
  const int num_clusters = partition.num_cpus();
  std::vector<Matrix> gbar(num_clusters);
  for (int d = 0; d < num_clusters; ++d) {
    gbar[d] = Matrix::Zero(k_total, partition.cluster_user_sets[d].size());
  }
  for (int i = 0; i < mc.n_draws; ++i) {
    ChannelRealization ch = realize_channel(beta, rng::derive(mc.seed, rng::stream::kFading, i));
    CMatrix y = receive_pilots(ch, assignment, book, mc.p_ms, mc.sigma2,
                               rng::derive(mc.seed, rng::stream::kPilotNoise, i));
    CMatrix ghat = cfmimo::detail::mmse_estimate_with_stats(y, beta, assignment, book, mc.p_ms, stats);
    for (int d = 0; d < num_clusters; ++d) {
      const auto& aps = partition.cluster_ap_sets[d];
      const auto& users = partition.cluster_user_sets[d];
      if (users.empty()) continue;
      CMatrix gd(aps.size(), users.size());
      for (std::size_t a = 0; a < aps.size(); ++a) {
        for (std::size_t j = 0; j < users.size(); ++j) gd(a, j) = ghat(aps[a], users[j]);
      }
      CMatrix w = gd.conjugate() * (gd.transpose() * gd.conjugate()).inverse();
      for (int k = 0; k < k_total; ++k) {
        if (partition.user_to_cpu[k] == d) continue;
        CVector gk(aps.size());
        for (std::size_t a = 0; a < aps.size(); ++a) gk(a) = ch.g(aps[a], k);
        for (std::size_t j = 0; j < users.size(); ++j) {
          gbar[d](k, j) += std::norm((gk.transpose() * w.col(j))(0, 0));
        }
      }
    }
  }
  for (auto& g : gbar) g /= mc.n_draws;
  return gbar;
}

}  // namespace cfmimo::oracle

#endif  // CFMIMO_ORACLES_HPP
