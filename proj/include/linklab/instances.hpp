#pragma once
// Deterministic generators for the adversarial constructions, each
// returning the source together with machine-checkable expectations:
// engine-reproducible partitions, reference clusterings, and scalar
// assertions with provenance.
//
// Generators are pure given their parameters; bundles are immutable after
// construction. Matrix-backed generators self-verify their declared
// metricity at construction with an exhaustive triple scan when n is small
// enough for that to be cheap (n <= 1000).

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "linklab/criteria.hpp"
#include "linklab/linkage.hpp"
#include "linklab/metric.hpp"

namespace linklab {

enum class Engine { NAIVE, NNCHAIN };

std::string engine_name(Engine e);

Dendrogram build(const DistanceSource& src, LinkageRule rule, Engine engine,
                 TieBreak tb = TieBreak::LEX_MIN_ID);

enum class Cmp { EQ, LE, GE };

/// Where an expected value comes from: a closed form of the construction
/// (analytic), an inequality certified by evaluating the criteria modules
/// (evaluated), or a value frozen at first run (regression).
enum class Basis { ANALYTIC, EVALUATED, REGRESSION };

struct InstanceBundle;

struct ScalarExpectation {
  std::string name;
  Cmp cmp = Cmp::EQ;
  double target = 0.0;
  double tol = 1e-9;
  Basis basis = Basis::ANALYTIC;
  std::function<double(const InstanceBundle&)> compute;
};

/// A k-clustering the designated engine must reproduce exactly.
struct PartitionExpectation {
  std::string name;
  LinkageRule rule = LinkageRule::AVERAGE;
  Engine engine = Engine::NAIVE;
  int k = 0;
  Clustering expected;
};

struct InstanceBundle {
  std::string name;
  std::string params;
  DistanceSource source;
  std::string point_order;  // how indices map onto the construction
  bool declared_metric = true;
  bool metric_checked = false;  // whether the O(n^3) scan ran
  std::vector<PartitionExpectation> partitions;
  std::map<std::string, Clustering> references;  // rival clusterings etc.
  std::vector<ScalarExpectation> scalars;
  std::map<std::string, double> facts;  // named construction quantities
};

struct BundleCheck {
  std::string name;
  bool pass = false;
  double lhs = 0.0;
  double target = 0.0;
  std::string detail;
};

/// Re-runs every expectation in the bundle: the metricity declaration, the
/// engine-reproduced partitions, and all scalar assertions.
std::vector<BundleCheck> verify_bundle(const InstanceBundle& bundle);

bool all_pass(const std::vector<BundleCheck>& checks);

/// Writes the bundle's source (feature CSV or condensed matrix) plus a
/// structured expectations file listing every assertion.
void write_bundle(const InstanceBundle& bundle, const std::string& out_dir);

// --- generators ----------------------------------------------------------

/// Line instance with factorially growing groups. Group i holds
/// (i+1)! - i! points at position p_i, with p_0 = 0, p_1 = 1 and
/// p_i = p_{i-1} + avg(group_{i-1}, groups_{0..i-2}) + eps. For k <= t the
/// average-link k-cut keeps the first t-k+1 groups merged and the later
/// groups separate. eps > 0 makes every inter-group merge strict; with
/// eps = 0 lexicographic tie-breaking reproduces the same execution.
InstanceBundle gen_ics(int t, double eps);

/// gen_ics with t = k plus one satellite per group: dist(x_i, group_i) =
/// k+1+eps, dist(x_i, x_j) = |p_j - p_i| + 2(k+1+eps), dist(x_i, group_j)
/// = |p_j - p_i| + k+1+eps. Average-link's (k+1)-cut isolates every
/// satellite while the satellite-pairing clustering has max_diam k+1+eps.
InstanceBundle gen_ics_augmented(int k, double eps);

/// Two eps-tight groups of (k-1)/2 points, k-2 points at mutual distance 1,
/// and distance D across groups. All three rules produce the k-cut
/// (S1, S2, singletons of S3); separation-optimal clusterings look very
/// different.
InstanceBundle gen_sep(int k, double d_cross, double eps);

/// Collinear points with slowly shrinking gaps: x_0 = 1 and
/// x_i = x_{i-1} + 1 - (i+1) eps. Single-linkage grows one big suffix
/// block and isolates the first points.
InstanceBundle gen_sl_line(int n, double eps);

/// The ell_1 construction with blocks A, B, C, D on the first axis and a
/// far block E of pairwise distance 3t. The block-shaped clustering
/// (A+C, B+D, E split) has bounded separation but within-block average 3t.
InstanceBundle gen_cl_l1(int m);

/// Two unit-tight groups at mutual distance 2 plus one point z at distance
/// D > n^2 from everything. Average-link always isolates z; a random
/// hierarchy usually does not.
InstanceBundle gen_random_bad(int n, double d_far);

/// Two singletons at distance T and two eps-tight groups at mutual
/// distance T, with 2T between a singleton and any group. Average-link's
/// 2-cut pairs the singletons; cross-pairing them with the groups gives a
/// much smaller cohesion/separation ratio.
InstanceBundle gen_unbounded_av(int n, double t_scale, double eps);

/// The triangle-inequality counterexample: one remote point at distance
/// n/2-2 from a single witness inside an otherwise tight group. The
/// 2H_n diameter bound fails once n/2-2 outgrows it.
InstanceBundle gen_nonmetric(int n);

/// Single-linkage separation instance: a tight mass A, a chain B of sqrt(n)
/// points at increasing distance from A, and a satellite p just beyond the
/// first chain link. Single-linkage isolates p even though splitting off B
/// separates far better.
InstanceBundle gen_sl_sep(int n, double eps);

}  // namespace linklab
