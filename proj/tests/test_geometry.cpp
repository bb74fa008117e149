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

#include "cfmimo/geometry.hpp"

using namespace cfmimo;

TEST_CASE("wrap_distance basic values") {
  CHECK(wrap_distance({3.0, 4.0}, {3.0, 4.0}, 10.0) == 0.0);
  // Wrap across the edge.
  CHECK(wrap_distance({0.0, 0.0}, {999.0, 0.0}, 1000.0) == Catch::Approx(1.0));
  // No wrapping triggered, plain 3-4-5 triangle scaled by 100.
  CHECK(wrap_distance({100.0, 200.0}, {400.0, 600.0}, 1000.0) == Catch::Approx(500.0));
}

TEST_CASE("wrap_distance is a metric on random triples") {
  rng::Engine engine(42);
  const double L = 1000.0;
  for (int trial = 0; trial < 200; ++trial) {
    Point p(engine.uniform(L), engine.uniform(L));
    Point q(engine.uniform(L), engine.uniform(L));
    Point r(engine.uniform(L), engine.uniform(L));
    double pq = wrap_distance(p, q, L);
    double qp = wrap_distance(q, p, L);
    CHECK(pq == qp);
    CHECK(pq >= 0.0);
    CHECK(wrap_distance(p, q, L) <= wrap_distance(p, r, L) + wrap_distance(r, q, L) + 1e-9);
  }
}

TEST_CASE("generate_deployment places points inside the square") {
  NetworkGeometry geom = generate_deployment(7, 100, 40, 1000.0);
  REQUIRE(geom.num_aps() == 100);
  REQUIRE(geom.num_users() == 40);
  for (const auto& p : geom.ap_positions) {
    CHECK(p[0] >= 0.0);
    CHECK(p[0] < 1000.0);
    CHECK(p[1] >= 0.0);
    CHECK(p[1] < 1000.0);
  }
  for (const auto& p : geom.ms_positions) {
    CHECK(p[0] >= 0.0);
    CHECK(p[0] < 1000.0);
  }

  NetworkGeometry tiny = generate_deployment(1, 1, 1, 10.0);
  CHECK(tiny.ap_positions[0][0] < 10.0);
  CHECK(tiny.ms_positions[0][1] < 10.0);
}

TEST_CASE("generate_deployment is deterministic in the seed") {
  NetworkGeometry a = generate_deployment(7, 20, 10, 500.0);
  NetworkGeometry b = generate_deployment(7, 20, 10, 500.0);
  for (int m = 0; m < 20; ++m) {
    CHECK(a.ap_positions[m][0] == b.ap_positions[m][0]);
    CHECK(a.ap_positions[m][1] == b.ap_positions[m][1]);
  }
  for (int k = 0; k < 10; ++k) {
    CHECK(a.ms_positions[k][0] == b.ms_positions[k][0]);
  }
  NetworkGeometry c = generate_deployment(8, 20, 10, 500.0);
  CHECK(a.ap_positions[0][0] != c.ap_positions[0][0]);
}

TEST_CASE("generate_deployment rejects bad arguments") {
  CHECK_THROWS_AS(generate_deployment(1, 0, 5, 100.0), ConfigError);
  CHECK_THROWS_AS(generate_deployment(1, 5, 0, 100.0), ConfigError);
  CHECK_THROWS_AS(generate_deployment(1, 5, 5, 0.0), ConfigError);
  CHECK_THROWS_AS(generate_deployment(1, 5, 5, -1.0), ConfigError);
}
