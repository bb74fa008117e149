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

#ifndef CFMIMO_LARGE_SCALE_HPP
#define CFMIMO_LARGE_SCALE_HPP

#include <cstdint>

#include "cfmimo/geometry.hpp"

namespace cfmimo {

/// Propagation model parameters.
///
/// Defaults are the conventional values for the three-slope model family;
/// every field is config-overridable.
struct LargeScaleParams {
  double carrier_freq_MHz = 1900.0;
  double ap_height_m = 15.0;
  double ms_height_m = 1.65;
  double d0_m = 10.0;   // inner slope breakpoint
  double d1_m = 50.0;   // outer slope breakpoint
  double shadow_sigma_dB = 8.0;
  double shadow_delta = 0.5;    // AP/MS mixing weight, in [0, 1]
  double decorr_dist_m = 100.0; // shadowing decorrelation distance

  void validate() const {
    if (!(d0_m < d1_m)) throw ConfigError("LargeScaleParams: need d0 < d1");
    if (shadow_sigma_dB < 0.0) throw ConfigError("LargeScaleParams: shadow sigma must be >= 0");
    if (shadow_delta < 0.0 || shadow_delta > 1.0) {
      throw ConfigError("LargeScaleParams: shadow delta must lie in [0, 1]");
    }
    if (!(decorr_dist_m > 0.0)) throw ConfigError("LargeScaleParams: decorr distance must be > 0");
  }
};

/// Path loss, shadowing and composite large-scale gains, all linear scale.
struct LargeScaleState {
  Matrix zeta;  // M x K path-loss gains
  Matrix chi;   // M x K shadowing gains
  Matrix beta;  // M x K composite gains, beta = zeta .* chi
};

/// Fixed term of the Hata-COST231 propagation model, in dB.
/// f in MHz, antenna heights in meters.
inline double hata_cost231_constant_dB(const LargeScaleParams& p) {
  double lf = std::log10(p.carrier_freq_MHz);
  return 46.3 + 33.9 * lf - 13.82 * std::log10(p.ap_height_m) -
         (1.1 * lf - 0.7) * p.ms_height_m + (1.56 * lf - 0.8);
}

/// Three-slope path loss in dB at torus distance d (meters):
///   -Lbar - 35 log10(d_km)                          for d > d1
///   -Lbar - 15 log10(d1_km) - 20 log10(d_km)        for d0 < d <= d1
///   -Lbar - 15 log10(d1_km) - 20 log10(d0_km)       for d <= d0
/// The flat inner region removes the d -> 0 singularity.
inline double path_loss_dB(double distance_m, const LargeScaleParams& p) {
  const double lbar = hata_cost231_constant_dB(p);
  const double d_km = distance_m / 1000.0;
  const double d0_km = p.d0_m / 1000.0;
  const double d1_km = p.d1_m / 1000.0;
  if (distance_m > p.d1_m) {
    return -lbar - 35.0 * std::log10(d_km);
  }
  if (distance_m > p.d0_m) {
    return -lbar - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d_km);
  }
  return -lbar - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d0_km);
}

inline Matrix compute_path_loss(const NetworkGeometry& geom, const LargeScaleParams& params) {
  params.validate();
  const int m_total = geom.num_aps();
  const int k_total = geom.num_users();
  Matrix zeta(m_total, k_total);
  for (int m = 0; m < m_total; ++m) {
    for (int k = 0; k < k_total; ++k) {
      double d = wrap_distance(geom.ap_positions[m], geom.ms_positions[k], geom.side_length_m);
      zeta(m, k) = db_to_linear(path_loss_dB(d, params));
    }
  }
  return zeta;
}

namespace detail {

/// Correlated standard-normal field over a point set, covariance
/// 2^(-distance/decorr). Cholesky with escalating jitter on failure; the
/// covariance can be numerically borderline PSD on wrap-around geometry.
inline Vector correlated_field(const std::vector<Point>& pts, double L, double decorr,
                               rng::Engine& engine) {
  const int n = static_cast<int>(pts.size());
  Matrix cov(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cov(i, j) = std::exp2(-wrap_distance(pts[i], pts[j], L) / decorr);
    }
  }
  Eigen::LLT<Matrix> llt(cov);
  double jitter = 1e-10;
  int tries = 0;
  while (llt.info() != Eigen::Success && tries < 8) {
    llt.compute(cov + jitter * Matrix::Identity(n, n));
    jitter *= 10.0;
    ++tries;
  }
  if (llt.info() != Eigen::Success) {
    throw SolverError("correlated_field: shadowing covariance not factorizable");
  }
  Vector z(n);
  for (int i = 0; i < n; ++i) z(i) = engine.gaussian();
  return llt.matrixL() * z;
}

}  // namespace detail

/// Correlated log-normal shadowing:
///   chi_mk = 10^((sqrt(delta) a_m + sqrt(1-delta) b_k) sigma / 10)
/// with unit-variance Gaussian fields a over APs and b over MSs, covariance
/// 2^(-distance/decorr) within each field.
inline Matrix generate_shadowing(const NetworkGeometry& geom, const LargeScaleParams& params,
                                 std::uint64_t seed) {
  params.validate();
  const int m_total = geom.num_aps();
  const int k_total = geom.num_users();
  if (params.shadow_sigma_dB == 0.0) {
    return Matrix::Ones(m_total, k_total);
  }
  rng::Engine ap_engine(rng::derive(seed, rng::stream::kShadowAp));
  rng::Engine ms_engine(rng::derive(seed, rng::stream::kShadowMs));
  Vector a = detail::correlated_field(geom.ap_positions, geom.side_length_m,
                                      params.decorr_dist_m, ap_engine);
  Vector b = detail::correlated_field(geom.ms_positions, geom.side_length_m,
                                      params.decorr_dist_m, ms_engine);
  const double wa = std::sqrt(params.shadow_delta);
  const double wb = std::sqrt(1.0 - params.shadow_delta);
  Matrix chi(m_total, k_total);
  for (int m = 0; m < m_total; ++m) {
    for (int k = 0; k < k_total; ++k) {
      chi(m, k) = db_to_linear(params.shadow_sigma_dB * (wa * a(m) + wb * b(k)));
    }
  }
  return chi;
}

inline LargeScaleState make_large_scale_state(const NetworkGeometry& geom,
                                              const LargeScaleParams& params,
                                              std::uint64_t seed) {
  LargeScaleState state;
  state.zeta = compute_path_loss(geom, params);
  state.chi = generate_shadowing(geom, params, seed);
  state.beta = state.zeta.cwiseProduct(state.chi);
  return state;
}

}  // namespace cfmimo

#endif  // CFMIMO_LARGE_SCALE_HPP
