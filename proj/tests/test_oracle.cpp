#include <doctest.h>

#include <cmath>
#include <set>

#include "linklab/instances.hpp"
#include "linklab/oracle.hpp"
#include "support.hpp"

using namespace linklab;
using namespace linklab::testing;

namespace {

// Stirling numbers of the second kind by the textbook recurrence.
long long stirling2(int n, int k) {
  if (n == 0 && k == 0) return 1;
  if (n == 0 || k == 0 || k > n) return 0;
  return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1);
}

}  // namespace

TEST_CASE("partition enumeration counts match the recurrence") {
  CHECK(count_partitions(3, 2) == 3);
  CHECK(count_partitions(4, 2) == 7);
  CHECK(count_partitions(6, 3) == stirling2(6, 3));
  CHECK(stirling2(6, 3) == 90);
  CHECK(count_partitions(9, 4) == stirling2(9, 4));
  CHECK(count_partitions(5, 1) == 1);
  CHECK(count_partitions(5, 5) == 1);
  CHECK_THROWS_AS(count_partitions(14, 3), std::invalid_argument);
  CHECK_THROWS_AS(count_partitions(5, 0), std::invalid_argument);
}

TEST_CASE("every enumerated partition is valid and distinct") {
  std::set<std::vector<int>> seen;
  for_each_partition(7, 3, [&](const std::vector<int>& labels) {
    CHECK(seen.insert(labels).second);
    int top = 0;
    for (int l : labels) top = std::max(top, l);
    CHECK(top == 2);
  });
  CHECK(static_cast<long long>(seen.size()) == stirling2(7, 3));
}

TEST_CASE("optima on a three-point line") {
  auto line = DistanceSource::from_features({0, 1, 3}, 3, 1, Norm::L2);
  const auto report = compute_opts(line, 2);
  CHECK(report.opt_sep == doctest::Approx(2.5));
  CHECK(report.witness_sep == clustering_from_labels({0, 0, 1}));
  CHECK(report.opt_dm == doctest::Approx(1.0));
  CHECK(report.witness_dm == clustering_from_labels({0, 0, 1}));
}

TEST_CASE("optima on identical points are zero") {
  auto src = DistanceSource::from_features({2, 2, 2, 2, 2}, 5, 1, Norm::L2);
  for (int k = 2; k <= 4; ++k) {
    const auto report = compute_opts(src, k);
    CHECK(report.opt_dm == 0.0);
    CHECK(report.opt_av == 0.0);
  }
}

TEST_CASE("witnesses re-evaluate to their reported optimum") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto src = random_feature_source(9, 2, seed);
    for (int k : {2, 3, 4}) {
      const auto r = compute_opts(src, k);
      CHECK(sep_av(r.witness_sep, src) == r.opt_sep);
      CHECK(max_diam(r.witness_dm, src) == r.opt_dm);
      CHECK(avg_diam(r.witness_av, src) == r.opt_av);
      CHECK(cs_ratio_dm(r.witness_cs_dm, src) == r.opt_cs_dm);
    }
  }
}

TEST_CASE("optimal diameters never increase with k") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto src = random_feature_source(8, 2, seed);
    double prev_dm = std::numeric_limits<double>::infinity();
    double prev_av = std::numeric_limits<double>::infinity();
    for (int k = 2; k <= 7; ++k) {
      const auto r = compute_opts(src, k);
      CHECK(r.opt_dm <= prev_dm + 1e-12);
      CHECK(r.opt_av <= prev_av + 1e-12);
      prev_dm = r.opt_dm;
      prev_av = r.opt_av;
    }
  }
}

TEST_CASE("max-average subsets") {
  auto line = DistanceSource::from_features({0, 1, 3}, 3, 1, Norm::L2);
  const auto [set2, value2] = max_avg_subset(line, 2);
  CHECK(set2 == IndexSet{0, 2});
  CHECK(value2 == doctest::Approx(3.0));

  const auto [whole, value3] = max_avg_subset(line, 3);
  CHECK(whole == IndexSet{0, 1, 2});
  CHECK(value3 == doctest::Approx(avg_within(line, whole)));

  CHECK_THROWS(max_avg_subset(random_feature_source(21, 2, 1), 3));
}

TEST_CASE("subset average dominates the separation optimum") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto src = random_feature_source(10, 3, seed);
    for (int k : {2, 3}) {
      const auto r = compute_opts(src, k);
      const auto [set, value] = max_avg_subset(src, k);
      CHECK(value >= r.opt_sep - 1e-9);
    }
  }
}

TEST_CASE("bound verification on random metric sources") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto src = random_feature_source(10, 2, seed);
    for (int k : {2, 3, 4}) {
      const auto report = verify_bounds(src, k);
      CHECK(report.metric);
      CHECK(report.all_pass());
      for (const auto& c : report.checks) CHECK(!c.skipped);
    }
  }
}

TEST_CASE("bound verification flags non-metric sources") {
  const auto bundle = gen_nonmetric(12);
  const auto report = verify_bounds(bundle.source, 2);
  CHECK(!report.metric);
  int skipped = 0;
  for (const auto& c : report.checks) {
    if (c.skipped) {
      ++skipped;
      CHECK(c.note == "non-metric");
    } else {
      CHECK(c.name == "cs_ratio_av<=1");
      CHECK(c.pass);
    }
  }
  CHECK(skipped == 3);
}

TEST_CASE("bound verification on identical points passes trivially") {
  auto src = DistanceSource::from_features({1, 1, 1, 1, 1, 1}, 6, 1, Norm::L2);
  for (int k : {2, 3}) CHECK(verify_bounds(src, k).all_pass());
}

TEST_CASE("well-separated optima are rebuilt exactly by average-link") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const int k = 2 + static_cast<int>(seed % 3);
    const auto planted = planted_clusters(10, k, seed);
    const auto r = compute_opts(planted.source, k);
    REQUIRE(r.opt_cs_dm < 1.0 / 3.0);
    CHECK(r.witness_cs_dm == clustering_from_labels(planted.labels));
    const auto d = build_naive(planted.source, LinkageRule::AVERAGE);
    CHECK(cut(d, k) == r.witness_cs_dm);
  }
}

TEST_CASE("bound report formatting is a fixed-order table") {
  auto src = random_feature_source(8, 2, 3);
  const auto report = verify_bounds(src, 3);
  const std::string text = format_bound_report(report);
  CHECK(text.find("bound,lhs,rhs,margin,status") == 0);
  CHECK(text.find("cs_ratio_av<=1") != std::string::npos);
  CHECK(text.find("PASS") != std::string::npos);
}
