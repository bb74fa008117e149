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

#ifndef CFMIMO_GEOMETRY_HPP
#define CFMIMO_GEOMETRY_HPP

#include <cstdint>
#include <vector>

#include "cfmimo/common.hpp"
#include "cfmimo/rng.hpp"

namespace cfmimo {

/// Random network layout on an L x L wrap-around square.
struct NetworkGeometry {
  double side_length_m = 0.0;
  std::vector<Point> ap_positions;
  std::vector<Point> ms_positions;
  int num_cpus = 1;

  int num_aps() const { return static_cast<int>(ap_positions.size()); }
  int num_users() const { return static_cast<int>(ms_positions.size()); }
};

/// Torus metric on the wrap-around square: per-axis displacement is
/// min(|d|, L - |d|), the result is the Euclidean norm of the wrapped
/// displacements.
inline double wrap_distance(const Point& p, const Point& q, double side_length_m) {
  double acc = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    double d = std::abs(p[axis] - q[axis]);
    d = std::min(d, side_length_m - d);
    acc += d * d;
  }
  return std::sqrt(acc);
}

/// Draws AP and MS positions i.i.d. uniform on [0, L)^2. Identical seeds give
/// bitwise-identical layouts.
inline NetworkGeometry generate_deployment(std::uint64_t seed, int num_aps, int num_users,
                                           double side_length_m) {
  if (num_aps < 1 || num_users < 1) {
    throw ConfigError("generate_deployment: counts must be >= 1");
  }
  if (!(side_length_m > 0.0)) {
    throw ConfigError("generate_deployment: side length must be positive");
  }
  NetworkGeometry geom;
  geom.side_length_m = side_length_m;
  rng::Engine ap_engine(rng::derive(seed, rng::stream::kDeployAp));
  geom.ap_positions.reserve(num_aps);
  for (int m = 0; m < num_aps; ++m) {
    geom.ap_positions.emplace_back(ap_engine.uniform(side_length_m),
                                   ap_engine.uniform(side_length_m));
  }
  rng::Engine ms_engine(rng::derive(seed, rng::stream::kDeployMs));
  geom.ms_positions.reserve(num_users);
  for (int k = 0; k < num_users; ++k) {
    geom.ms_positions.emplace_back(ms_engine.uniform(side_length_m),
                                   ms_engine.uniform(side_length_m));
  }
  return geom;
}

}  // namespace cfmimo

#endif  // CFMIMO_GEOMETRY_HPP
