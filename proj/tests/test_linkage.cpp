#include <doctest.h>

#include <algorithm>
#include <limits>
#include <set>

#include "linklab/linkage.hpp"
#include "support.hpp"

using namespace linklab;
using namespace linklab::testing;

namespace {

// Test-side rule distance, independent of the engines.
double ref_rule_dist(const DistanceSource& src, LinkageRule rule,
                     const IndexSet& a, const IndexSet& b) {
  if (rule == LinkageRule::AVERAGE) return avg_between(src, a, b);
  double best = rule == LinkageRule::SINGLE
                    ? std::numeric_limits<double>::infinity()
                    : 0.0;
  for (int x : a)
    for (int y : b) {
      const double v = src.dist(x, y);
      best = rule == LinkageRule::SINGLE ? std::min(best, v)
                                         : std::max(best, v);
    }
  return best;
}

// Member lists for every node id of a dendrogram.
std::vector<IndexSet> member_table(const Dendrogram& d) {
  std::vector<IndexSet> members(2 * d.n - 1);
  for (int i = 0; i < d.n; ++i) members[i] = {i};
  for (int t = 0; t < d.n - 1; ++t) {
    const auto& m = d.merges[t];
    IndexSet u = members[m.left_id];
    u.insert(u.end(), members[m.right_id].begin(), members[m.right_id].end());
    std::sort(u.begin(), u.end());
    members[d.n + t] = std::move(u);
  }
  return members;
}

}  // namespace

TEST_CASE("greedy engine on a 3-point line") {
  auto line = DistanceSource::from_features({0, 1, 3}, 3, 1, Norm::L2);
  const auto d = build_naive(line, LinkageRule::AVERAGE);
  validate(d);
  REQUIRE(d.merges.size() == 2);
  CHECK(d.merges[0].left_id == 0);
  CHECK(d.merges[0].right_id == 1);
  CHECK(d.merges[0].height == doctest::Approx(1.0));
  CHECK(d.merges[1].height == doctest::Approx(2.5));

  const auto c2 = cut(d, 2);
  CHECK(c2 == clustering_from_labels({0, 0, 1}));
}

TEST_CASE("two points merge at their distance under any rule") {
  auto src = DistanceSource::from_condensed(2, {3.25});
  for (auto rule :
       {LinkageRule::AVERAGE, LinkageRule::SINGLE, LinkageRule::COMPLETE}) {
    const auto d = build_naive(src, rule);
    REQUIRE(d.merges.size() == 1);
    CHECK(d.merges[0].height == 3.25);
    const auto f = build_nnchain(src, rule);
    CHECK(f.merges[0].height == 3.25);
  }
}

TEST_CASE("tie at distance one resolves toward the smallest ids") {
  // Factorial line instance at t=3: positions 0,1,2,2,2,2. The final two
  // merges must be ({0},{1}) at height 1 and then the 1.5 join.
  auto src = DistanceSource::from_features({0, 1, 2, 2, 2, 2}, 6, 1, Norm::L2);
  const auto d = build_naive(src, LinkageRule::AVERAGE, TieBreak::LEX_MIN_ID);
  REQUIRE(d.merges.size() == 5);
  CHECK(d.merges[3].left_id == 0);
  CHECK(d.merges[3].right_id == 1);
  CHECK(d.merges[3].height == doctest::Approx(1.0));
  CHECK(d.merges[4].height == doctest::Approx(1.5));
  CHECK(cut(d, 2) == clustering_from_labels({0, 0, 1, 1, 1, 1}));
}

TEST_CASE("tie policies scan in different orders") {
  // d(0,3) = d(1,2) = 1, everything else 2: id-lex prefers (0,3), the
  // colexicographic scan reaches (1,2) first.
  std::vector<double> condensed(6, 2.0);
  condensed[DistanceSource::condensed_index(4, 0, 3)] = 1.0;
  condensed[DistanceSource::condensed_index(4, 1, 2)] = 1.0;
  auto src = DistanceSource::from_condensed(4, condensed);

  const auto lex = build_naive(src, LinkageRule::SINGLE, TieBreak::LEX_MIN_ID);
  CHECK(lex.merges[0].left_id == 0);
  CHECK(lex.merges[0].right_id == 3);

  const auto ff = build_naive(src, LinkageRule::SINGLE, TieBreak::FIRST_FOUND);
  CHECK(ff.merges[0].left_id == 1);
  CHECK(ff.merges[0].right_id == 2);
}

TEST_CASE("cut edge cases") {
  auto src = random_feature_source(7, 2, 11);
  const auto d = build_naive(src, LinkageRule::COMPLETE);
  const auto singletons = cut(d, 7);
  CHECK(singletons.k == 7);
  const auto whole = cut(d, 1);
  CHECK(whole.k == 1);
  CHECK_THROWS_AS(cut(d, 0), std::out_of_range);
  CHECK_THROWS_AS(cut(d, 8), std::out_of_range);
}

TEST_CASE("single-point source yields an empty merge list") {
  auto src = DistanceSource::from_features({1.0}, 1, 1, Norm::L2);
  CHECK(build_naive(src, LinkageRule::AVERAGE).merges.empty());
  CHECK(build_nnchain(src, LinkageRule::SINGLE).merges.empty());
}

TEST_CASE("greedy certificate: every alive pair is at least the merge height") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto src = random_feature_source(18, 2, seed);
    for (auto rule :
         {LinkageRule::AVERAGE, LinkageRule::SINGLE, LinkageRule::COMPLETE}) {
      const auto d = build_naive(src, rule);
      const auto members = member_table(d);
      std::set<int> alive;
      for (int i = 0; i < d.n; ++i) alive.insert(i);
      for (int t = 0; t < d.n - 1; ++t) {
        const auto& m = d.merges[t];
        const double paired =
            ref_rule_dist(src, rule, members[m.left_id], members[m.right_id]);
        CHECK(paired == doctest::Approx(m.height).epsilon(1e-12));
        for (auto a = alive.begin(); a != alive.end(); ++a)
          for (auto b = std::next(a); b != alive.end(); ++b)
            CHECK(ref_rule_dist(src, rule, members[*a], members[*b]) >=
                  m.height - 1e-9);
        alive.erase(m.left_id);
        alive.erase(m.right_id);
        alive.insert(d.n + t);
      }
    }
  }
}

TEST_CASE("single-linkage heights are nondecreasing") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto src = seed % 2 ? random_feature_source(24, 3, seed)
                        : random_matrix_source(24, seed);
    const Dendrogram ds[] = {build_naive(src, LinkageRule::SINGLE),
                             build_nnchain(src, LinkageRule::SINGLE)};
    for (const auto& d : ds)
      for (std::size_t t = 1; t < d.merges.size(); ++t)
        CHECK(d.merges[t].height >= d.merges[t - 1].height);
  }
}

TEST_CASE("fast engine matches the greedy engine on distinct distances") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto src = random_feature_source(60, 2, seed);
    for (auto rule :
         {LinkageRule::AVERAGE, LinkageRule::SINGLE, LinkageRule::COMPLETE}) {
      const auto slow = build_naive(src, rule);
      const auto fast = build_nnchain(src, rule);
      validate(fast);
      for (int k = 1; k <= 60; ++k) CHECK(cut(slow, k) == cut(fast, k));
      for (int t = 0; t < 59; ++t)
        CHECK(fast.merges[t].height ==
              doctest::Approx(slow.merges[t].height).epsilon(1e-9));
    }
  }
}

TEST_CASE("fast engine's maintained averages equal recomputed ones") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto src = random_feature_source(64, 3, seed);
    const auto d = build_nnchain(src, LinkageRule::AVERAGE);
    const auto members = member_table(d);
    for (const auto& m : d.merges) {
      const double exact =
          avg_between(src, members[m.left_id], members[m.right_id]);
      CHECK(m.height == doctest::Approx(exact).epsilon(1e-9));
    }
  }
}

TEST_CASE("random hierarchy basics") {
  CHECK(random_hierarchy(2, 7).merges.size() == 1);

  const auto a = random_hierarchy(8, 123);
  const auto b = random_hierarchy(8, 123);
  REQUIRE(a.merges.size() == b.merges.size());
  for (std::size_t t = 0; t < a.merges.size(); ++t) {
    CHECK(a.merges[t].left_id == b.merges[t].left_id);
    CHECK(a.merges[t].right_id == b.merges[t].right_id);
  }
  validate(a);
}

TEST_CASE("random hierarchy cuts split the permutation contiguously") {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto traced = random_hierarchy_traced(5, seed);
    const auto c = cut(traced.dendrogram, 2);
    // Position of each point in the permutation.
    std::vector<int> slot(5);
    for (int p = 0; p < 5; ++p) slot[traced.order[p]] = p;
    // Both blocks must occupy contiguous slot ranges.
    for (const auto& block : blocks(c)) {
      std::vector<int> s;
      for (int i : block) s.push_back(slot[i]);
      std::sort(s.begin(), s.end());
      for (std::size_t r = 1; r < s.size(); ++r) CHECK(s[r] == s[r - 1] + 1);
    }
  }
}

TEST_CASE("every k-cut of a random hierarchy matches the split process") {
  const int n = 9;
  const auto traced = random_hierarchy_traced(n, 42);
  for (int k = 1; k <= n; ++k) {
    const auto c = cut(traced.dendrogram, k);
    CHECK(c.k == k);
  }
}

TEST_CASE("dendrogram csv round-trip is bit-stable") {
  auto src = random_feature_source(12, 2, 5);
  const auto d = build_naive(src, LinkageRule::AVERAGE);
  const std::string text = dendrogram_to_csv(d);
  const auto back = dendrogram_from_csv(text);
  CHECK(dendrogram_to_csv(back) == text);
  CHECK(back.n == d.n);
}

TEST_CASE("validate rejects corrupted dendrograms") {
  auto src = random_feature_source(5, 2, 9);
  auto d = build_naive(src, LinkageRule::SINGLE);
  auto broken = d;
  broken.merges[1].left_id = broken.merges[0].left_id;  // child reuse
  CHECK_THROWS(validate(broken));
  auto bad_size = d;
  bad_size.merges.back().size = 99;
  CHECK_THROWS(validate(bad_size));
}
