#pragma once
// Agglomerative hierarchy construction under average / single / complete
// rules, via an exact greedy engine and a nearest-neighbor-chain engine,
// plus random hierarchies and dendrogram cutting.
//
// Engines never mutate the DistanceSource. A build is single-threaded;
// distinct builds over a shared source may run concurrently. Dendrogram
// and Clustering are immutable once returned.

#include <cstdint>
#include <string>
#include <vector>

#include "linklab/metric.hpp"

namespace linklab {

enum class LinkageRule { AVERAGE, SINGLE, COMPLETE };

std::string rule_name(LinkageRule rule);
LinkageRule parse_rule(const std::string& name);

/// Tie policy for the greedy engine when several cluster pairs attain the
/// minimum rule distance (exact float comparison):
///   LEX_MIN_ID   - pair with lexicographically smallest (min id, max id)
///   FIRST_FOUND  - first minimal pair in colexicographic scan order
enum class TieBreak { LEX_MIN_ID, FIRST_FOUND };

struct Merge {
  int left_id = 0;   // smaller child id
  int right_id = 0;  // larger child id
  double height = 0.0;
  int size = 0;  // leaves under the created node
};

/// Ordered sequence of n-1 merges. Ids 0..n-1 are leaves; merge t creates
/// id n+t; the root is id 2n-2. Heights are stored as computed by the
/// engine and are never clamped.
struct Dendrogram {
  int n = 0;
  std::vector<Merge> merges;
};

/// Throws if the merge sequence violates the structural invariants
/// (child reuse, size bookkeeping, bad ids).
void validate(const Dendrogram& d);

/// Partition of [0, n) into k nonempty blocks. Labels are canonical:
/// block labels appear in order of each block's first point index, so two
/// Clusterings describe the same partition iff their fields are equal.
struct Clustering {
  int n = 0;
  int k = 0;
  std::vector<int> labels;  // size n, values in [0, k)

  bool operator==(const Clustering&) const = default;
};

/// Canonicalizes an arbitrary label vector into a Clustering.
Clustering clustering_from_labels(const std::vector<int>& labels);

/// Blocks as sorted index sets, ordered by label.
std::vector<IndexSet> blocks(const Clustering& c);

Clustering clustering_from_blocks(int n, const std::vector<IndexSet>& parts);

/// Exact greedy agglomeration: at every step merges the active pair with
/// minimum rule distance under the tie policy; the recorded height is that
/// minimum, recomputed from the source (no recurrence shortcuts).
Dendrogram build_naive(const DistanceSource& src, LinkageRule rule,
                       TieBreak tb = TieBreak::LEX_MIN_ID);

/// Nearest-neighbor-chain engine, O(n^2) time, own condensed working copy.
/// Cluster distances are maintained with the size-weighted recurrence
/// (mean for AVERAGE, min for SINGLE, max for COMPLETE); merges are then
/// ordered by height. All three rules are reducible, so on sources with
/// distinct pairwise rule distances the cuts coincide with build_naive.
Dendrogram build_nnchain(const DistanceSource& src, LinkageRule rule);

/// Undo the last k-1 merges; requires 1 <= k <= n.
Clustering cut(const Dendrogram& d, int k);

/// Random hierarchy: draw a random permutation of the points, then
/// repeatedly pick j uniform in {1..n-1} and, when positions j and j+1 of
/// the permutation still share a cluster, split that cluster between them.
/// Recorded bottom-up with height = n - (clusters after the split), so
/// cut(k) returns exactly the process's k-clustering. Deterministic given
/// the seed.
Dendrogram random_hierarchy(int n, std::uint64_t seed);

struct TracedHierarchy {
  Dendrogram dendrogram;
  std::vector<int> order;  // the permutation; order[p] = point at slot p
};

/// Same process, also exposing the permutation (used by structural tests).
TracedHierarchy random_hierarchy_traced(int n, std::uint64_t seed);

// --- serialization ------------------------------------------------------
//
// One merge per line, "step,left_id,right_id,new_id,height,size", with a
// header line; bit-stable across runs given equal inputs and tie policy.

std::string dendrogram_to_csv(const Dendrogram& d);
Dendrogram dendrogram_from_csv(const std::string& text);
void write_dendrogram_csv(const Dendrogram& d, const std::string& path);
Dendrogram load_dendrogram_csv(const std::string& path);

}  // namespace linklab
