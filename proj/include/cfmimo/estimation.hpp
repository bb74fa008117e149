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

#ifndef CFMIMO_ESTIMATION_HPP
#define CFMIMO_ESTIMATION_HPP

#include <cstdint>
#include <utility>

#include "cfmimo/channel.hpp"
#include "cfmimo/pilots.hpp"

namespace cfmimo {

/// Second-order statistics of the MMSE channel estimates.
///
/// xi_mk is the received pilot-projection power at AP m for user k's pilot,
/// alpha_mk = tau_p P_ms beta_mk^2 / xi_mk the estimate variance, and
/// error_var = beta - alpha the estimation-error variance.
struct EstimationStats {
  Matrix xi;         // M x K
  Matrix alpha;      // M x K
  Matrix error_var;  // M x K
};

/// Closed-form xi/alpha from the actual pilot cross-correlations:
///   xi_mk = tau_p P_ms sum_k' beta_mk' |phi_{p(k')}^H phi_{p(k)}|^2 + sigma2.
inline EstimationStats estimation_stats(const Matrix& beta, const PilotAssignment& assignment,
                                        const PilotBook& book, double p_ms, double sigma2) {
  const int m_total = static_cast<int>(beta.rows());
  const int k_total = static_cast<int>(beta.cols());
  const double tp_pms = book.tau_p * p_ms;

  // |phi_i^H phi_j|^2 for all pilot pairs.
  Matrix gram2 = (book.sequences.adjoint() * book.sequences).cwiseAbs2();

  EstimationStats stats;
  stats.xi.resize(m_total, k_total);
  stats.alpha.resize(m_total, k_total);
  for (int k = 0; k < k_total; ++k) {
    const int pk = assignment.user_to_pilot[k];
    for (int m = 0; m < m_total; ++m) {
      double xi = sigma2;
      for (int j = 0; j < k_total; ++j) {
        xi += tp_pms * beta(m, j) * gram2(assignment.user_to_pilot[j], pk);
      }
      stats.xi(m, k) = xi;
      stats.alpha(m, k) = xi > 0.0 ? tp_pms * beta(m, k) * beta(m, k) / xi : 0.0;
    }
  }
  stats.error_var = beta - stats.alpha;
  return stats;
}

/// Uplink training phase: returns the tau_p x M block of received pilot
/// signals, column m being
///   y_m = sqrt(tau_p P_ms) sum_k g_mk phi_{p(k)} + w_m,
/// with i.i.d. CN(0, sigma2) noise entries.
inline CMatrix receive_pilots(const ChannelRealization& channel, const PilotAssignment& assignment,
                              const PilotBook& book, double p_ms, double sigma2,
                              std::uint64_t seed) {
  const int m_total = static_cast<int>(channel.g.rows());
  const int k_total = static_cast<int>(channel.g.cols());
  const double scale = std::sqrt(book.tau_p * p_ms);

  // tau_p x K matrix whose column k is user k's pilot.
  CMatrix sent(book.tau_p, k_total);
  for (int k = 0; k < k_total; ++k) sent.col(k) = book.pilot(assignment.user_to_pilot[k]);

  CMatrix y = scale * (sent * channel.g.transpose());

  rng::Engine engine(seed);
  const double noise_std = std::sqrt(sigma2);
  for (int m = 0; m < m_total; ++m) {
    for (int n = 0; n < book.tau_p; ++n) {
      y(n, m) += noise_std * engine.complex_gaussian();
    }
  }
  return y;
}

namespace detail {

/// MMSE estimate given precomputed statistics:
///   ghat_mk = sqrt(tau_p P_ms) beta_mk / xi_mk * phi_{p(k)}^H y_m.
inline CMatrix mmse_estimate_with_stats(const CMatrix& y_pilots, const Matrix& beta,
                                        const PilotAssignment& assignment, const PilotBook& book,
                                        double p_ms, const EstimationStats& stats) {
  const int m_total = static_cast<int>(beta.rows());
  const int k_total = static_cast<int>(beta.cols());
  const double scale = std::sqrt(book.tau_p * p_ms);

  CMatrix sent(book.tau_p, k_total);
  for (int k = 0; k < k_total; ++k) sent.col(k) = book.pilot(assignment.user_to_pilot[k]);
  // proj(k, m) = phi_{p(k)}^H y_m
  CMatrix proj = sent.adjoint() * y_pilots;

  CMatrix ghat(m_total, k_total);
  for (int k = 0; k < k_total; ++k) {
    for (int m = 0; m < m_total; ++m) {
      double xi = stats.xi(m, k);
      ghat(m, k) = xi > 0.0 ? (scale * beta(m, k) / xi) * proj(k, m) : Complex(0.0, 0.0);
    }
  }
  return ghat;
}

}  // namespace detail

/// MMSE channel estimation from received pilot blocks. Returns the estimate
/// matrix together with its error statistics.
inline std::pair<CMatrix, EstimationStats> mmse_estimate(const CMatrix& y_pilots,
                                                         const Matrix& beta,
                                                         const PilotAssignment& assignment,
                                                         const PilotBook& book, double p_ms,
                                                         double sigma2) {
  EstimationStats stats = estimation_stats(beta, assignment, book, p_ms, sigma2);
  CMatrix ghat = detail::mmse_estimate_with_stats(y_pilots, beta, assignment, book, p_ms, stats);
  return {std::move(ghat), std::move(stats)};
}

}  // namespace cfmimo

#endif  // CFMIMO_ESTIMATION_HPP
