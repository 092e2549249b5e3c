#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "fcs/grid.hpp"
#include "fcs/rng.hpp"

namespace fcs {

struct CentroidSet {
  int J = 0;
  std::vector<RealGrid> centroids;
  std::vector<int> assignment;  // point index -> centroid index
};

namespace detail {

inline double dist_sq(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace detail

/// k-means++ seeding (D^2 weighting) followed by Lloyd iterations with
/// squared Euclidean distance. Empty clusters are re-seeded to the point
/// farthest from its current centroid. Deterministic given the seed.
inline CentroidSet kmeans_pp(const std::vector<NormalizedUncertainty>& points, int J,
                             uint64_t seed, int max_iters = 100) {
  const int n = static_cast<int>(points.size());
  if (n < 1) throw std::invalid_argument("kmeans_pp: empty point list");
  if (J < 1) throw std::invalid_argument("kmeans_pp: J must be >= 1");
  const int h = points[0].height, w = points[0].width;
  for (const auto& p : points)
    if (p.height != h || p.width != w) throw std::invalid_argument("kmeans_pp: shape mismatch");
  const size_t dim = points[0].values.size();

  Rng rng(mix_seed(seed, 0x6b6d'6561'6e73ULL));
  std::vector<std::vector<double>> centers;
  centers.reserve(J);
  centers.push_back(points[rng.below(n)].values);
  std::vector<double> d2(n, std::numeric_limits<double>::max());
  while (static_cast<int>(centers.size()) < J) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], detail::dist_sq(points[i].values, centers.back()));
      total += d2[i];
    }
    int pick = 0;
    if (total > 0.0) {
      double r = rng.uniform() * total;
      for (int i = 0; i < n; ++i) {
        r -= d2[i];
        if (r <= 0.0) {
          pick = i;
          break;
        }
        pick = i;  // numeric tail: last point
      }
    } else {
      pick = static_cast<int>(rng.below(n));  // all points already covered
    }
    centers.push_back(points[pick].values);
  }

  std::vector<int> assignment(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = detail::dist_sq(points[i].values, centers[0]);
      for (int j = 1; j < J; ++j) {
        const double d = detail::dist_sq(points[i].values, centers[j]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }

    // re-seed empty clusters before the update step
    std::vector<int> counts(J, 0);
    for (int a : assignment) ++counts[a];
    for (int j = 0; j < J; ++j) {
      if (counts[j] > 0) continue;
      int far = -1;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (counts[assignment[i]] <= 1) continue;  // don't empty another cluster
        const double d = detail::dist_sq(points[i].values, centers[assignment[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far < 0) break;  // fewer distinct points than clusters
      --counts[assignment[far]];
      assignment[far] = j;
      counts[j] = 1;
      changed = true;
    }

    for (int j = 0; j < J; ++j) {
      if (counts[j] == 0) continue;
      std::vector<double> mean(dim, 0.0);
      for (int i = 0; i < n; ++i)
        if (assignment[i] == j)
          for (size_t d = 0; d < dim; ++d) mean[d] += points[i].values[d];
      for (auto& x : mean) x /= counts[j];
      centers[j] = std::move(mean);
    }
    if (!changed) break;
  }

  CentroidSet out;
  out.J = J;
  out.assignment = std::move(assignment);
  out.centroids.reserve(J);
  for (auto& c : centers) {
    RealGrid g(h, w);
    g.values = std::move(c);
    out.centroids.push_back(std::move(g));
  }
  return out;
}

}  // namespace fcs
