#pragma once
// Brute-force ground truth at small n: optimal criterion values over every
// k-partition, maximum-average point subsets, and verification of the
// theorem bounds against the average-link output.
//
// Enumeration budgets are fixed (n <= 13 partitions, C(n,k) <= 2e6
// subsets) and overruns raise errors instead of silently truncating.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "linklab/criteria.hpp"
#include "linklab/linkage.hpp"
#include "linklab/metric.hpp"

namespace linklab {

inline constexpr int kMaxOraclePoints = 13;
inline constexpr long long kMaxSubsetCount = 2'000'000;

/// Visits every partition of [0, n) into exactly k nonempty blocks once,
/// in restricted-growth-string lexicographic order. The visitor receives
/// the raw label vector; copy it if you keep it.
void for_each_partition(int n, int k,
                        const std::function<void(const std::vector<int>&)>& fn);

/// Number of partitions counted by actually enumerating (test helper).
long long count_partitions(int n, int k);

/// Exact optima over all k-partitions. Witnesses are the restricted-
/// growth-lexicographically smallest optimizers, and each reported optimum
/// is the criteria-module evaluation of its witness.
struct OptReport {
  int k = 0;
  double opt_sep = 0.0;    // maximum sep_av
  double opt_dm = 0.0;     // minimum max_diam
  double opt_av = 0.0;     // minimum avg_diam
  double opt_cs_dm = 0.0;  // minimum cs_ratio_dm
  Clustering witness_sep, witness_dm, witness_av, witness_cs_dm;
};

OptReport compute_opts(const DistanceSource& src, int k);

/// The k-point subset maximizing avg_within, with its value.
std::pair<IndexSet, double> max_avg_subset(const DistanceSource& src, int k);

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // slack in the passing direction
  bool pass = false;
  bool skipped = false;
  std::string note;
};

struct BoundReport {
  int k = 0;
  bool metric = true;
  std::vector<BoundCheck> checks;
  bool all_pass() const;
};

/// Runs average-link, cuts at k, and checks the bounds against the brute
/// force optima: the sep_av lower bound, the per-cluster diameter bound
/// against opt_av, and the cs_ratio_dm approximation bound. Triangle-
/// inequality-dependent checks are skipped (flagged) on non-metric
/// sources; the cs_ratio_av <= 1 check always runs.
BoundReport verify_bounds(const DistanceSource& src, int k,
                          LinkageRule rule = LinkageRule::AVERAGE);

std::string format_bound_report(const BoundReport& report);

}  // namespace linklab
