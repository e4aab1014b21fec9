#pragma once
// Shared helpers for the test suites: seeded random sources, planted
// instances, and independent oracles.

#include "linklab/linkage.hpp"
#include "linklab/metric.hpp"
#include "linklab/rng.hpp"

#include <vector>

namespace linklab::testing {

/// Random feature-backed source: n points uniform in [0, 1)^d.
inline DistanceSource random_feature_source(int n, int d, std::uint64_t seed,
                                            Norm norm = Norm::L2) {
  SplitMix64 rng(seed);
  std::vector<double> rows(static_cast<std::size_t>(n) * d);
  for (auto& v : rows) v = rng.uniform();
  return DistanceSource::from_features(std::move(rows), n, d, norm);
}

/// Random symmetric matrix source with entries in [lo, hi); generally
/// violates the triangle inequality.
inline DistanceSource random_matrix_source(int n, std::uint64_t seed,
                                           double lo = 0.1, double hi = 10.0) {
  SplitMix64 rng(seed);
  std::vector<double> condensed(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (auto& v : condensed) v = lo + (hi - lo) * rng.uniform();
  return DistanceSource::from_condensed(n, std::move(condensed));
}

/// All indices [0, n).
inline IndexSet all_points(int n) {
  IndexSet s(n);
  for (int i = 0; i < n; ++i) s[i] = i;
  return s;
}

/// Planted well-separated instance: k tight planar clusters with
/// in-cluster spread <= 1 and pairwise center distance >= 100, so the
/// planted partition has a tiny diameter-to-separation ratio.
struct Planted {
  DistanceSource source;
  std::vector<int> labels;
};

inline Planted planted_clusters(int n, int k, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<int> labels(n);
  std::vector<double> rows;
  rows.reserve(2 * n);
  for (int i = 0; i < n; ++i) {
    const int c = i < k ? i : static_cast<int>(rng.bounded(k));
    labels[i] = c;
    rows.push_back(1000.0 * c + rng.uniform() * 0.5);
    rows.push_back(rng.uniform() * 0.5);
  }
  return {DistanceSource::from_features(std::move(rows), n, 2, Norm::L2),
          std::move(labels)};
}

/// Independent tree-cost oracle: explicit lowest-common-ancestor walk per
/// point pair, then diss(a,b) times the leaf count under the ancestor.
inline double ckmm_by_lca(const Dendrogram& d, const DistanceSource& src) {
  const int total = 2 * d.n - 1;
  std::vector<int> parent(total, -1), size(total, 1);
  for (int t = 0; t < d.n - 1; ++t) {
    parent[d.merges[t].left_id] = d.n + t;
    parent[d.merges[t].right_id] = d.n + t;
    size[d.n + t] = d.merges[t].size;
  }
  double cost = 0.0;
  for (int a = 0; a < d.n; ++a)
    for (int b = a + 1; b < d.n; ++b) {
      std::vector<char> seen(total, 0);
      for (int x = a; x != -1; x = parent[x]) seen[x] = 1;
      int lca = b;
      while (!seen[lca]) lca = parent[lca];
      cost += src.dist(a, b) * size[lca];
    }
  return cost;
}

}  // namespace linklab::testing
