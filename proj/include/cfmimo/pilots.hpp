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

#ifndef CFMIMO_PILOTS_HPP
#define CFMIMO_PILOTS_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "cfmimo/clustering.hpp"
#include "cfmimo/common.hpp"
#include "cfmimo/rng.hpp"

namespace cfmimo {

/// Orthonormal pilot book: the columns of a tau_p x tau_p DFT matrix, each
/// normalized to unit norm.
struct PilotBook {
  int tau_p = 0;
  CMatrix sequences;  // tau_p x tau_p, column j is pilot j

  CVector pilot(int j) const { return sequences.col(j); }
};

inline PilotBook build_pilot_book(int tau_p) {
  if (tau_p < 1) throw ConfigError("build_pilot_book: tau_p must be >= 1");
  PilotBook book;
  book.tau_p = tau_p;
  book.sequences.resize(tau_p, tau_p);
  const double norm = 1.0 / std::sqrt(static_cast<double>(tau_p));
  for (int n = 0; n < tau_p; ++n) {
    for (int j = 0; j < tau_p; ++j) {
      double angle = -2.0 * M_PI * n * j / tau_p;
      book.sequences(n, j) = norm * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return book;
}

enum class PilotScope { kGlobal, kPerCpu };

struct PilotAssignment {
  std::vector<int> user_to_pilot;  // MS index -> pilot index in [0, tau_p)
  PilotScope scope = PilotScope::kGlobal;
};

namespace detail {

inline std::vector<int> random_permutation(int n, rng::Engine& engine) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(engine.uniform_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

}  // namespace detail

/// Greedy fingerprint pilot allocation over one scope.
///
/// A user's fingerprint is its column of 10*log10(beta); beta carries only the
/// rows and columns visible in the scope, so large-scale information is all
/// this uses. Users are processed in a seed-derived random order. While unused
/// pilots remain the lowest-indexed one is taken, so the first tau_p users get
/// distinct pilots; afterwards each user picks the pilot maximizing the
/// minimum fingerprint distance to its prospective co-pilot users.
inline PilotAssignment assign_pilots(const Matrix& beta, int tau_p, std::uint64_t seed) {
  const int k_total = static_cast<int>(beta.cols());
  if (tau_p < 1) throw ConfigError("assign_pilots: tau_p must be >= 1");
  if ((beta.array() < 0.0).any()) throw ConfigError("assign_pilots: beta must be non-negative");

  Matrix fingerprints = (beta.array().max(1e-300)).log10() * 10.0;

  rng::Engine engine(rng::derive(seed, rng::stream::kPilotOrder));
  std::vector<int> order = detail::random_permutation(k_total, engine);

  PilotAssignment assignment;
  assignment.user_to_pilot.assign(k_total, -1);
  std::vector<std::vector<int>> users_of_pilot(tau_p);

  for (int k : order) {
    int choice = -1;
    for (int p = 0; p < tau_p; ++p) {
      if (users_of_pilot[p].empty()) {
        choice = p;
        break;
      }
    }
    if (choice < 0) {
      double best = -1.0;
      for (int p = 0; p < tau_p; ++p) {
        double min_dist = std::numeric_limits<double>::infinity();
        for (int j : users_of_pilot[p]) {
          min_dist = std::min(min_dist, (fingerprints.col(k) - fingerprints.col(j)).norm());
        }
        if (min_dist > best) {
          best = min_dist;
          choice = p;
        }
      }
    }
    assignment.user_to_pilot[k] = choice;
    users_of_pilot[choice].push_back(k);
  }
  return assignment;
}

/// Per-CPU pilot allocation: runs the greedy heuristic independently inside
/// each cluster on the cluster-local beta submatrix, then merges the local
/// choices into one network-wide map. Pilot indices refer to the shared book,
/// so reuse across clusters is allowed (and is where the no-connectivity
/// contamination comes from).
inline PilotAssignment assign_pilots_per_cpu(const Matrix& beta, const ClusterPartition& partition,
                                             int tau_p, std::uint64_t seed) {
  PilotAssignment merged;
  merged.scope = PilotScope::kPerCpu;
  merged.user_to_pilot.assign(static_cast<int>(beta.cols()), -1);
  for (int d = 0; d < partition.num_cpus(); ++d) {
    const auto& aps = partition.cluster_ap_sets[d];
    const auto& users = partition.cluster_user_sets[d];
    if (users.empty()) continue;
    Matrix sub(aps.size(), users.size());
    for (std::size_t i = 0; i < aps.size(); ++i) {
      for (std::size_t j = 0; j < users.size(); ++j) {
        sub(i, j) = beta(aps[i], users[j]);
      }
    }
    PilotAssignment local = assign_pilots(sub, tau_p, rng::derive(seed, rng::stream::kPilotCpu, d));
    for (std::size_t j = 0; j < users.size(); ++j) {
      merged.user_to_pilot[users[j]] = local.user_to_pilot[j];
    }
  }
  return merged;
}

}  // namespace cfmimo

#endif  // CFMIMO_PILOTS_HPP
