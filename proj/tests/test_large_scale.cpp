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

#include <catch2/catch_amalgamated.hpp>

#include "cfmimo/large_scale.hpp"

using namespace cfmimo;

// Fixed term at the default parameters, recomputed independently:
//   46.3 + 33.9 log10(1900) - 13.82 log10(15) - (1.1 log10(1900) - 0.7) 1.65
//   + (1.56 log10(1900) - 0.8)
static constexpr double kexpected_const_dB = 140.7150637039084;

TEST_CASE("Hata-COST231 constant at the defaults") {
  LargeScaleParams p;
  CHECK(hata_cost231_constant_dB(p) == Catch::Approx(kexpected_const_dB).epsilon(1e-12));
}

TEST_CASE("three-slope path loss shape") {
  LargeScaleParams p;

  SECTION("the -35 log10 term vanishes at 1 km") {
    CHECK(path_loss_dB(1000.0, p) == Catch::Approx(-kexpected_const_dB).epsilon(1e-12));
  }

  SECTION("flat inner region") {
    CHECK(path_loss_dB(0.0, p) == path_loss_dB(p.d0_m / 2.0, p));
    CHECK(std::isfinite(path_loss_dB(0.0, p)));
  }

  SECTION("continuous at the breakpoints") {
    CHECK(path_loss_dB(p.d0_m, p) == Catch::Approx(path_loss_dB(p.d0_m + 1e-9, p)).margin(1e-6));
    CHECK(path_loss_dB(p.d1_m, p) == Catch::Approx(path_loss_dB(p.d1_m + 1e-9, p)).margin(1e-6));
  }

  SECTION("non-increasing with distance") {
    double prev = path_loss_dB(0.0, p);
    for (double d = 1.0; d < 2000.0; d += 13.7) {
      double cur = path_loss_dB(d, p);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("compute_path_loss is non-increasing in wrap distance") {
  NetworkGeometry geom = generate_deployment(3, 10, 8, 900.0);
  LargeScaleParams p;
  Matrix zeta = compute_path_loss(geom, p);
  for (int m = 0; m < 10; ++m) {
    for (int k = 0; k < 8; ++k) {
      for (int k2 = 0; k2 < 8; ++k2) {
        double dk = wrap_distance(geom.ap_positions[m], geom.ms_positions[k], 900.0);
        double dk2 = wrap_distance(geom.ap_positions[m], geom.ms_positions[k2], 900.0);
        if (dk < dk2) CHECK(zeta(m, k) >= zeta(m, k2));
      }
    }
  }
}

TEST_CASE("shadowing structure") {
  NetworkGeometry geom = generate_deployment(5, 6, 5, 400.0);

  SECTION("zero sigma gives unit shadowing") {
    LargeScaleParams p;
    p.shadow_sigma_dB = 0.0;
    Matrix chi = generate_shadowing(geom, p, 1);
    CHECK((chi.array() == 1.0).all());
  }

  SECTION("delta = 1 depends only on the AP index") {
    LargeScaleParams p;
    p.shadow_delta = 1.0;
    Matrix chi = generate_shadowing(geom, p, 2);
    for (int m = 0; m < 6; ++m) {
      for (int k = 1; k < 5; ++k) CHECK(chi(m, k) == Catch::Approx(chi(m, 0)));
    }
  }

  SECTION("beta composes exactly") {
    LargeScaleParams p;
    LargeScaleState state = make_large_scale_state(geom, p, 3);
    CHECK((state.beta.array() == (state.zeta.array() * state.chi.array())).all());
    CHECK((state.beta.array() > 0.0).all());
  }
}

TEST_CASE("shadowing moments match the model") {
  // Single link: Var(10 log10 chi) = sigma^2.
  NetworkGeometry geom = generate_deployment(8, 1, 1, 500.0);
  LargeScaleParams p;
  const int n = 10000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    Matrix chi = generate_shadowing(geom, p, 1000 + i);
    double db = linear_to_db(chi(0, 0));
    sum += db;
    sumsq += db * db;
  }
  double var = sumsq / n - (sum / n) * (sum / n);
  CHECK(var == Catch::Approx(p.shadow_sigma_dB * p.shadow_sigma_dB).epsilon(0.05));
}

TEST_CASE("shadowing spatial correlation follows 2^(-d/decorr)") {
  // Two APs, one user, AP-only shadowing so 10log10 chi is sigma * a_m.
  NetworkGeometry geom;
  geom.side_length_m = 1000.0;
  geom.ap_positions = {{100.0, 500.0}, {250.0, 500.0}};  // 150 m apart
  geom.ms_positions = {{0.0, 0.0}};
  LargeScaleParams p;
  p.shadow_delta = 1.0;
  const int n = 10000;
  double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
  for (int i = 0; i < n; ++i) {
    Matrix chi = generate_shadowing(geom, p, 5000 + i);
    double a = linear_to_db(chi(0, 0)) / p.shadow_sigma_dB;
    double b = linear_to_db(chi(1, 0)) / p.shadow_sigma_dB;
    s1 += a;
    s2 += b;
    s11 += a * a;
    s22 += b * b;
    s12 += a * b;
  }
  double cov = s12 / n - (s1 / n) * (s2 / n);
  double va = s11 / n - (s1 / n) * (s1 / n);
  double vb = s22 / n - (s2 / n) * (s2 / n);
  double corr = cov / std::sqrt(va * vb);
  CHECK(corr == Catch::Approx(std::exp2(-150.0 / p.decorr_dist_m)).margin(0.05));
}

TEST_CASE("parameter validation") {
  LargeScaleParams p;
  p.d0_m = 60.0;  // above d1
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.shadow_delta = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.shadow_sigma_dB = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
