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

#ifndef CFMIMO_CLUSTERING_HPP
#define CFMIMO_CLUSTERING_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "cfmimo/geometry.hpp"

namespace cfmimo {

/// AP-side result of the k-means clustering step.
struct ApClusters {
  std::vector<int> ap_to_cpu;               // AP index -> cluster in [0, D)
  std::vector<Point> centroids;             // cluster centroids on the torus
  std::vector<std::vector<int>> ap_sets;    // the sets M(d)
  double wcss = 0.0;                        // within-cluster sum of squared torus distances
};

/// Disjoint AP clusters plus the exclusive user association.
struct ClusterPartition {
  std::vector<int> ap_to_cpu;
  std::vector<int> user_to_cpu;
  std::vector<std::vector<int>> cluster_ap_sets;    // M(d)
  std::vector<std::vector<int>> cluster_user_sets;  // C(d)

  int num_cpus() const { return static_cast<int>(cluster_ap_sets.size()); }
  int cluster_of_ap(int m) const { return ap_to_cpu[m]; }
  int cluster_of_user(int k) const { return user_to_cpu[k]; }

  /// Local index of user k within its cluster's user set.
  int local_user_index(int k) const {
    const auto& set = cluster_user_sets[user_to_cpu[k]];
    return static_cast<int>(std::find(set.begin(), set.end(), k) - set.begin());
  }
};

/// A partition with a single cluster holding every AP and user. Used for the
/// centralized (strong-connectivity) code path.
inline ClusterPartition trivial_partition(int num_aps, int num_users) {
  ClusterPartition part;
  part.ap_to_cpu.assign(num_aps, 0);
  part.user_to_cpu.assign(num_users, 0);
  part.cluster_ap_sets.resize(1);
  part.cluster_user_sets.resize(1);
  part.cluster_ap_sets[0].resize(num_aps);
  std::iota(part.cluster_ap_sets[0].begin(), part.cluster_ap_sets[0].end(), 0);
  part.cluster_user_sets[0].resize(num_users);
  std::iota(part.cluster_user_sets[0].begin(), part.cluster_user_sets[0].end(), 0);
  return part;
}

namespace detail {

/// Exact minimizer of sum_i circledist(x_i, c)^2 on a circle of circumference
/// L. The optimum is one of the n candidate means obtained by unwrapping the
/// sorted points at each possible cut.
inline double circular_mean(std::vector<double> xs, double L) {
  const int n = static_cast<int>(xs.size());
  if (n == 1) return xs[0];
  std::sort(xs.begin(), xs.end());
  double sum = std::accumulate(xs.begin(), xs.end(), 0.0);
  auto circ_sq = [L](double a, double b) {
    double d = std::abs(a - b);
    d = std::min(d, L - d);
    return d * d;
  };
  double best_cost = std::numeric_limits<double>::infinity();
  double best_mean = 0.0;
  for (int cut = 0; cut < n; ++cut) {
    // Points xs[0..cut-1] are shifted by +L.
    double mean = (sum + L * cut) / n;
    mean = std::fmod(mean, L);
    if (mean < 0.0) mean += L;
    double cost = 0.0;
    for (double x : xs) cost += circ_sq(x, mean);
    if (cost < best_cost) {
      best_cost = cost;
      best_mean = mean;
    }
  }
  return best_mean;
}

inline double wcss_of(const std::vector<Point>& pts, const std::vector<int>& assign,
                      const std::vector<Point>& centroids, double L) {
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double d = wrap_distance(pts[i], centroids[assign[i]], L);
    acc += d * d;
  }
  return acc;
}

/// k-means++ style seeding with torus distances.
inline std::vector<Point> seed_centroids(const std::vector<Point>& pts, int k, double L,
                                         rng::Engine& engine) {
  std::vector<Point> centroids;
  centroids.reserve(k);
  centroids.push_back(pts[engine.uniform_below(pts.size())]);
  std::vector<double> d2(pts.size());
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centroids) best = std::min(best, wrap_distance(pts[i], c, L));
      d2[i] = best * best;
      total += d2[i];
    }
    if (total <= 0.0) {
      // All points coincide with existing centroids; fall back to uniform.
      centroids.push_back(pts[engine.uniform_below(pts.size())]);
      continue;
    }
    double r = engine.uniform(total);
    std::size_t pick = 0;
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      acc += d2[i];
      if (r < acc) {
        pick = i;
        break;
      }
      pick = i;
    }
    centroids.push_back(pts[pick]);
  }
  return centroids;
}

}  // namespace detail

/// k-means over AP positions with the torus metric.
///
/// Centroid updates use the exact per-axis circular mean, so the
/// within-cluster sum of squares is non-increasing until convergence. Runs 10
/// seeded restarts and keeps the best objective; a cluster that empties is
/// repaired by re-seeding its centroid at the point farthest from its current
/// centroid.
inline ApClusters cluster_aps(const NetworkGeometry& geom, int num_clusters, std::uint64_t seed) {
  const int m_total = geom.num_aps();
  const double L = geom.side_length_m;
  if (num_clusters < 1 || num_clusters > m_total) {
    throw ConfigError("cluster_aps: need 1 <= D <= M");
  }
  const auto& pts = geom.ap_positions;

  constexpr int kRestarts = 10;
  constexpr int kMaxIters = 200;

  ApClusters best;
  best.wcss = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < kRestarts; ++restart) {
    rng::Engine engine(rng::derive(seed, rng::stream::kKmeans, restart));
    auto centroids = detail::seed_centroids(pts, num_clusters, L, engine);
    std::vector<int> assign(m_total, -1);

    for (int iter = 0; iter < kMaxIters; ++iter) {
      bool changed = false;
      for (int i = 0; i < m_total; ++i) {
        int arg = 0;
        double bestd = std::numeric_limits<double>::infinity();
        for (int c = 0; c < num_clusters; ++c) {
          double d = wrap_distance(pts[i], centroids[c], L);
          if (d < bestd) {
            bestd = d;
            arg = c;
          }
        }
        if (assign[i] != arg) {
          assign[i] = arg;
          changed = true;
        }
      }

      // Repair empty clusters before the update step.
      for (int c = 0; c < num_clusters; ++c) {
        if (std::count(assign.begin(), assign.end(), c) > 0) continue;
        int farthest = 0;
        double worst = -1.0;
        for (int i = 0; i < m_total; ++i) {
          double d = wrap_distance(pts[i], centroids[assign[i]], L);
          if (d > worst) {
            worst = d;
            farthest = i;
          }
        }
        assign[farthest] = c;
        changed = true;
      }

      if (!changed && iter > 0) break;

      for (int c = 0; c < num_clusters; ++c) {
        std::vector<double> xs, ys;
        for (int i = 0; i < m_total; ++i) {
          if (assign[i] == c) {
            xs.push_back(pts[i][0]);
            ys.push_back(pts[i][1]);
          }
        }
        centroids[c] = Point(detail::circular_mean(xs, L), detail::circular_mean(ys, L));
      }
    }

    double wcss = detail::wcss_of(pts, assign, centroids, L);
    if (wcss < best.wcss) {
      best.wcss = wcss;
      best.ap_to_cpu = assign;
      best.centroids = centroids;
    }
  }

  best.ap_sets.assign(num_clusters, {});
  for (int i = 0; i < m_total; ++i) best.ap_sets[best.ap_to_cpu[i]].push_back(i);
  return best;
}

/// Assigns each user to the CPU with the largest average linear gain over the
/// cluster's APs (equivalently minimum average large-scale loss); ties break
/// toward the lowest CPU index.
inline ClusterPartition associate_users(const Matrix& beta, const ApClusters& ap_clusters) {
  const int num_users = static_cast<int>(beta.cols());
  const int num_clusters = static_cast<int>(ap_clusters.ap_sets.size());
  if ((beta.array() <= 0.0).any()) {
    throw ConfigError("associate_users: beta must be strictly positive");
  }

  ClusterPartition part;
  part.ap_to_cpu = ap_clusters.ap_to_cpu;
  part.cluster_ap_sets = ap_clusters.ap_sets;
  part.user_to_cpu.assign(num_users, 0);
  part.cluster_user_sets.assign(num_clusters, {});

  for (int k = 0; k < num_users; ++k) {
    int arg = 0;
    double best = -1.0;
    for (int d = 0; d < num_clusters; ++d) {
      const auto& aps = ap_clusters.ap_sets[d];
      double avg = 0.0;
      for (int m : aps) avg += beta(m, k);
      avg /= static_cast<double>(aps.size());
      if (avg > best) {
        best = avg;
        arg = d;
      }
    }
    part.user_to_cpu[k] = arg;
    part.cluster_user_sets[arg].push_back(k);
  }
  return part;
}

}  // namespace cfmimo

#endif  // CFMIMO_CLUSTERING_HPP
