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

#ifndef CFMIMO_PRECODING_HPP
#define CFMIMO_PRECODING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cfmimo/estimation.hpp"

namespace cfmimo {

/// Zero-forcing precoder W = Ghat* (Ghat^T Ghat*)^{-1}, the minimum-norm
/// right inverse of Ghat^T. Satisfies Ghat^T W = I in its scope.
struct ZfPrecoder {
  CMatrix w;            // M x K (scope-sized)
  double residual = 0;  // Frobenius norm of Ghat^T W - I
};

inline constexpr double kZfResidualTol = 1e-9;

/// Builds the ZF precoder for an estimate matrix with K <= M columns.
/// Throws SingularMatrixError when the K x K Gram matrix is numerically
/// rank-deficient (non-PD Cholesky or residual above kZfResidualTol); Monte-
/// Carlo callers drop such realizations.
inline ZfPrecoder zf_precoder(const CMatrix& ghat) {
  const auto m_total = ghat.rows();
  const auto k_total = ghat.cols();
  if (k_total > m_total) {
    throw SingularMatrixError("zf_precoder: more users than APs in scope");
  }
  // A = Ghat^T, Gram = A A^H = Ghat^T Ghat* (Hermitian PSD).
  CMatrix a = ghat.transpose();
  CMatrix gram = a * a.adjoint();
  Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("zf_precoder: Gram matrix not positive definite");
  }
  ZfPrecoder out;
  // W = A^H Gram^{-1}  =>  W^H = Gram^{-1} A.
  out.w = llt.solve(a).adjoint();
  out.residual = (a * out.w - CMatrix::Identity(k_total, k_total)).norm();
  if (!(out.residual < kZfResidualTol)) {
    throw SingularMatrixError("zf_precoder: ZF residual " + std::to_string(out.residual));
  }
  return out;
}

/// Monte-Carlo interference statistics for one cluster partition.
///
/// Per accepted draw the full network is realized (channel, pilot reception,
/// MMSE estimation) so co-pilot estimate columns share their pilot
/// projections; each cluster then forms its local ZF precoder from its own
/// estimate block. Accumulated per cluster d:
///   gamma[d](i, j)     own-cluster interference of local user i caused by
///                      local beam j: E{ [W^H diag(beta_i - alpha_i) W]_jj }
///   omega[d](a, j)     expected precoder power E|w_aj|^2 per local AP a
///   gamma_bar[d](k, j) cross-cluster leakage onto global user k from local
///                      beam j: E{ |g_k^T w_j|^2 }, rows of own users unused
/// Standard errors of the gamma/gamma_bar entries are accumulated alongside.
struct PartitionInterferenceStats {
  std::vector<Matrix> gamma;
  std::vector<Matrix> gamma_se;
  std::vector<Matrix> omega;
  std::vector<Matrix> gamma_bar;
  std::vector<Matrix> gamma_bar_se;
  long n_draws = 0;
  long n_singular = 0;
};

/// Spec of one statistics estimation: which draws to generate and how the
/// training phase is parameterized. Draw i uses the fading stream
/// derive(seed, kFading, i) and the pilot-noise stream
/// derive(seed, kPilotNoise, i); i counts attempts, so singular draws consume
/// an index and are replaced by the next one.
struct McConfig {
  int n_draws = 1000;
  std::uint64_t seed = 0;
  double p_ms = 0.1;
  double sigma2 = 0.0;
};

inline PartitionInterferenceStats estimate_interference_stats(
    const Matrix& beta, const EstimationStats& stats, const PilotAssignment& assignment,
    const PilotBook& book, const ClusterPartition& partition, const McConfig& mc) {
  const int k_total = static_cast<int>(beta.cols());
  const int num_clusters = partition.num_cpus();
  if (mc.n_draws < 1) throw ConfigError("estimate_interference_stats: n_draws must be >= 1");

  PartitionInterferenceStats out;
  out.gamma.resize(num_clusters);
  out.gamma_se.resize(num_clusters);
  out.omega.resize(num_clusters);
  out.gamma_bar.resize(num_clusters);
  out.gamma_bar_se.resize(num_clusters);
  std::vector<Matrix> gamma_sq(num_clusters), gamma_bar_sq(num_clusters);
  for (int d = 0; d < num_clusters; ++d) {
    const int kd = static_cast<int>(partition.cluster_user_sets[d].size());
    const int md = static_cast<int>(partition.cluster_ap_sets[d].size());
    out.gamma[d] = Matrix::Zero(kd, kd);
    gamma_sq[d] = Matrix::Zero(kd, kd);
    out.omega[d] = Matrix::Zero(md, kd);
    out.gamma_bar[d] = Matrix::Zero(k_total, kd);
    gamma_bar_sq[d] = Matrix::Zero(k_total, kd);
    if (kd > md) {
      throw SingularMatrixError("estimate_interference_stats: cluster " + std::to_string(d) +
                                " has more users than APs");
    }
  }

  const long singular_budget = std::max<long>(1, mc.n_draws / 10);
  long accepted = 0;
  std::uint64_t attempt = 0;
  std::vector<CMatrix> w_d(num_clusters);

  while (accepted < mc.n_draws) {
    ChannelRealization ch =
        realize_channel(beta, rng::derive(mc.seed, rng::stream::kFading, attempt));
    CMatrix y = receive_pilots(ch, assignment, book, mc.p_ms, mc.sigma2,
                               rng::derive(mc.seed, rng::stream::kPilotNoise, attempt));
    CMatrix ghat = detail::mmse_estimate_with_stats(y, beta, assignment, book, mc.p_ms, stats);
    ++attempt;

    bool singular = false;
    for (int d = 0; d < num_clusters && !singular; ++d) {
      const auto& users = partition.cluster_user_sets[d];
      const auto& aps = partition.cluster_ap_sets[d];
      if (users.empty()) {
        w_d[d].resize(aps.size(), 0);
        continue;
      }
      CMatrix ghat_d(aps.size(), users.size());
      for (std::size_t a = 0; a < aps.size(); ++a) {
        for (std::size_t j = 0; j < users.size(); ++j) {
          ghat_d(a, j) = ghat(aps[a], users[j]);
        }
      }
      try {
        w_d[d] = zf_precoder(ghat_d).w;
      } catch (const SingularMatrixError&) {
        singular = true;
      }
    }
    if (singular) {
      if (++out.n_singular > singular_budget) {
        throw SolverError("estimate_interference_stats: more than 10% of draws singular (" +
                          std::to_string(out.n_singular) + " of " + std::to_string(attempt) + ")");
      }
      continue;
    }

    for (int d = 0; d < num_clusters; ++d) {
      const auto& users = partition.cluster_user_sets[d];
      const auto& aps = partition.cluster_ap_sets[d];
      const int kd = static_cast<int>(users.size());
      if (kd == 0) continue;
      const CMatrix& w = w_d[d];
      Matrix w_abs2 = w.cwiseAbs2();
      out.omega[d] += w_abs2;

      // Own-cluster rows: [W^H diag(beta_i - alpha_i)|_{M(d)} W]_jj.
      for (int i = 0; i < kd; ++i) {
        const int k_global = users[i];
        for (int j = 0; j < kd; ++j) {
          double v = 0.0;
          for (std::size_t a = 0; a < aps.size(); ++a) {
            v += w_abs2(a, j) * stats.error_var(aps[a], k_global);
          }
          out.gamma[d](i, j) += v;
          gamma_sq[d](i, j) += v * v;
        }
      }

      // Cross-cluster rows: |g_k^T w_j|^2 for users served elsewhere.
      for (int k = 0; k < k_total; ++k) {
        if (partition.user_to_cpu[k] == d) continue;
        CVector g_k(aps.size());
        for (std::size_t a = 0; a < aps.size(); ++a) g_k(a) = ch.g(aps[a], k);
        for (int j = 0; j < kd; ++j) {
          double v = std::norm((g_k.transpose() * w.col(j)).value());
          out.gamma_bar[d](k, j) += v;
          gamma_bar_sq[d](k, j) += v * v;
        }
      }
    }
    ++accepted;
  }

  const double n = static_cast<double>(mc.n_draws);
  out.n_draws = mc.n_draws;
  for (int d = 0; d < num_clusters; ++d) {
    out.gamma[d] /= n;
    out.gamma_bar[d] /= n;
    out.omega[d] /= n;
    out.gamma_se[d] =
        ((gamma_sq[d] / n - out.gamma[d].cwiseProduct(out.gamma[d])).cwiseMax(0.0) / n)
            .cwiseSqrt();
    out.gamma_bar_se[d] =
        ((gamma_bar_sq[d] / n - out.gamma_bar[d].cwiseProduct(out.gamma_bar[d])).cwiseMax(0.0) / n)
            .cwiseSqrt();
  }
  return out;
}

/// Global-scope interference statistics (own-cluster gamma plus the per-AP
/// expected precoder powers omega).
struct InterferenceStats {
  Matrix gamma;     // K x K, row k holds gamma_kk'
  Matrix gamma_se;  // standard errors of the gamma entries
  Matrix omega;     // M x K, omega_mk = E|w_mk|^2
  long n_mc = 0;
  long n_singular = 0;
};

inline InterferenceStats estimate_gamma(const Matrix& beta, const EstimationStats& stats,
                                        const PilotAssignment& assignment, const PilotBook& book,
                                        const McConfig& mc) {
  ClusterPartition all =
      trivial_partition(static_cast<int>(beta.rows()), static_cast<int>(beta.cols()));
  PartitionInterferenceStats ps = estimate_interference_stats(beta, stats, assignment, book, all, mc);
  InterferenceStats out;
  out.gamma = std::move(ps.gamma[0]);
  out.gamma_se = std::move(ps.gamma_se[0]);
  out.omega = std::move(ps.omega[0]);
  out.n_mc = ps.n_draws;
  out.n_singular = ps.n_singular;
  return out;
}

/// Cross-cluster leakage tensors gamma_bar only; thin view over the partition
/// estimator, sharing its draw scheme.
inline std::vector<Matrix> estimate_gamma_bar(const Matrix& beta, const EstimationStats& stats,
                                              const PilotAssignment& assignment,
                                              const PilotBook& book,
                                              const ClusterPartition& partition,
                                              const McConfig& mc) {
  return estimate_interference_stats(beta, stats, assignment, book, partition, mc).gamma_bar;
}

}  // namespace cfmimo

#endif  // CFMIMO_PRECODING_HPP
