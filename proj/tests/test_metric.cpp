#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "linklab/metric.hpp"
#include "support.hpp"

using namespace linklab;
using namespace linklab::testing;

namespace {

// Three disjoint nonempty index sets drawn from [0, n).
struct Triple {
  IndexSet a, b, c;
};

Triple random_disjoint_triple(int n, SplitMix64& rng) {
  std::vector<int> idx = all_points(n);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.bounded(i + 1));
    std::swap(idx[i], idx[j]);
  }
  const int sa = 1 + static_cast<int>(rng.bounded(n / 3));
  const int sb = 1 + static_cast<int>(rng.bounded(n / 3));
  const int sc = 1 + static_cast<int>(rng.bounded(n - sa - sb - 1));
  Triple t;
  t.a.assign(idx.begin(), idx.begin() + sa);
  t.b.assign(idx.begin() + sa, idx.begin() + sa + sb);
  t.c.assign(idx.begin() + sa + sb, idx.begin() + sa + sb + sc);
  std::sort(t.a.begin(), t.a.end());
  std::sort(t.b.begin(), t.b.end());
  std::sort(t.c.begin(), t.c.end());
  return t;
}

}  // namespace

TEST_CASE("dist on feature rows") {
  auto src = DistanceSource::from_features({0, 0, 3, 4}, 2, 2, Norm::L2);
  CHECK(src.dist(0, 1) == doctest::Approx(5.0));
  auto l1 = DistanceSource::from_features({0, 0, 3, 4}, 2, 2, Norm::L1);
  CHECK(l1.dist(0, 1) == doctest::Approx(7.0));
  auto linf = DistanceSource::from_features({0, 0, 3, 4}, 2, 2, Norm::LINF);
  CHECK(linf.dist(0, 1) == doctest::Approx(4.0));
  CHECK(src.dist(1, 1) == 0.0);
  CHECK(src.dist(0, 1) == src.dist(1, 0));
  CHECK_THROWS_AS(src.dist(0, 2), std::out_of_range);
}

TEST_CASE("condensed storage round-trips dist") {
  auto src = random_feature_source(9, 3, 42);
  const auto condensed = src.to_condensed();
  auto back = DistanceSource::from_condensed(9, condensed);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) CHECK(back.dist(i, j) == src.dist(i, j));
}

TEST_CASE("averages and diameter on a line") {
  auto line = DistanceSource::from_features({0, 1, 2}, 3, 1, Norm::L2);
  CHECK(avg_within(line, {0, 1, 2}) == doctest::Approx(4.0 / 3.0));
  CHECK(avg_within(line, {1}) == 0.0);
  auto pairsrc = DistanceSource::from_condensed(2, {7.0});
  CHECK(avg_within(pairsrc, {0, 1}) == doctest::Approx(7.0));

  CHECK(avg_between(line, {0}, {1, 2}) == doctest::Approx(1.5));
  CHECK(avg_between(line, {0}, {2}) == doctest::Approx(line.dist(0, 2)));
  CHECK_THROWS_AS(avg_between(line, {0, 1}, {1, 2}), std::invalid_argument);

  auto far = DistanceSource::from_features({0, 1, 5}, 3, 1, Norm::L2);
  CHECK(diam(far, {0, 1, 2}) == doctest::Approx(5.0));
  CHECK(diam(far, {2}) == 0.0);
  auto equal = DistanceSource::from_features({3, 3, 3}, 3, 1, Norm::L2);
  CHECK(diam(equal, {0, 1, 2}) == 0.0);
}

TEST_CASE("merge identity over random 8-point sources") {
  // C(|A|+|B|,2) avg(A u B) = C(|A|,2) avg(A) + |A||B| avg(A,B) + C(|B|,2) avg(B)
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto src = random_feature_source(8, 3, seed);
    SplitMix64 rng(seed * 77 + 1);
    auto t = random_disjoint_triple(8, rng);
    IndexSet merged = t.a;
    merged.insert(merged.end(), t.b.begin(), t.b.end());
    std::sort(merged.begin(), merged.end());
    const double na = t.a.size(), nb = t.b.size();
    const double lhs = (na + nb) * (na + nb - 1) / 2.0 * avg_within(src, merged);
    const double rhs = na * (na - 1) / 2.0 * avg_within(src, t.a) +
                       na * nb * avg_between(src, t.a, t.b) +
                       nb * (nb - 1) / 2.0 * avg_within(src, t.b);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("triangle inequality for averages on metric sources") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 6 + static_cast<int>(seed % 15);  // up to 20
    auto src = random_feature_source(n, 2 + seed % 3, seed);
    SplitMix64 rng(seed * 1234 + 5);
    auto t = random_disjoint_triple(n, rng);
    const double ac = avg_between(src, t.a, t.c);
    const double ab = avg_between(src, t.a, t.b);
    const double bc = avg_between(src, t.b, t.c);
    CHECK(ac <= ab + bc + 1e-9);
  }
}

TEST_CASE("avg_within never exceeds diam") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto src = random_matrix_source(10, seed);
    SplitMix64 rng(seed);
    auto t = random_disjoint_triple(10, rng);
    for (const auto& s : {t.a, t.b, t.c})
      CHECK(avg_within(src, s) <= diam(src, s) + 1e-12);
  }
}

TEST_CASE("pair-sum inequality on metric sources") {
  // |B| W(A) <= (|A|-1) W(A,B) with W the distance sums.
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const int n = 8 + static_cast<int>(seed % 9);
    auto src = random_feature_source(n, 2, seed, Norm::L1);
    SplitMix64 rng(seed + 99);
    auto t = random_disjoint_triple(n, rng);
    if (t.a.size() < 2) continue;
    const double wa =
        avg_within(src, t.a) * t.a.size() * (t.a.size() - 1) / 2.0;
    const double wab = avg_between(src, t.a, t.b) * t.a.size() * t.b.size();
    CHECK(t.b.size() * wa <= (t.a.size() - 1) * wab + 1e-9);
  }
}

TEST_CASE("metricity scan") {
  SUBCASE("feature-backed sources are metric") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      CHECK(check_metricity(random_feature_source(12, 3, seed)).empty());
  }
  SUBCASE("all-ones matrix is metric") {
    const int n = 8;
    std::vector<double> ones(n * (n - 1) / 2, 1.0);
    CHECK(check_metricity(DistanceSource::from_condensed(n, ones)).empty());
  }
  SUBCASE("remote witness breaks the triangle inequality") {
    // One point p at distance n/2-2 from a single witness and 2 from the
    // rest of the witness's group.
    const int n = 16;
    std::vector<double> condensed(n * (n - 1) / 2, 1.0);
    auto set = [&](int i, int j, double v) {
      condensed[DistanceSource::condensed_index(n, i, j)] = v;
    };
    for (int i = 0; i < n - 1; ++i) set(i, n - 1, i == 0 ? n / 2.0 - 2.0 : 2.0);
    auto src = DistanceSource::from_condensed(n, condensed);
    const auto violations = check_metricity(src);
    REQUIRE(!violations.empty());
    for (const auto& v : violations)
      CHECK(src.dist(v.i, v.k) >
            src.dist(v.i, v.j) + src.dist(v.j, v.k));
  }
}

TEST_CASE("harmonic numbers") {
  CHECK(harmonic(1) == 1.0);
  CHECK(harmonic(3) == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
  CHECK(harmonic(6) == doctest::Approx(2.45).epsilon(1e-15));
  CHECK_THROWS_AS(harmonic(0), std::invalid_argument);
}

TEST_CASE("feature csv reader") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "linklab_metric_test";
  fs::create_directories(dir);
  const auto path = (dir / "points.csv").string();
  {
    std::ofstream out(path);
    out << "x,y\n0,0\n3,4\n";
  }
  auto src = load_features_csv(path, Norm::L2);
  CHECK(src.size() == 2);
  CHECK(src.dim() == 2);
  CHECK(src.dist(0, 1) == doctest::Approx(5.0));

  // Headerless variant.
  {
    std::ofstream out(path);
    out << "0,0\n3,4\n1,1\n";
  }
  CHECK(load_features_csv(path, Norm::L2).size() == 3);

  {
    std::ofstream out(path);
    out << "x,y\n1,oops\n";
  }
  CHECK_THROWS(load_features_csv(path, Norm::L2));
  {
    std::ofstream out(path);
    out << "x,y\n";
  }
  CHECK_THROWS(load_features_csv(path, Norm::L2));
}

TEST_CASE("condensed matrix file round-trip") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "linklab_metric_test";
  fs::create_directories(dir);
  const auto path = (dir / "matrix.txt").string();
  auto src = random_matrix_source(7, 3);
  write_condensed_matrix(src, path);
  auto back = load_condensed_matrix(path);
  REQUIRE(back.size() == 7);
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j)
      CHECK(back.dist(i, j) == doctest::Approx(src.dist(i, j)).epsilon(1e-15));
}
