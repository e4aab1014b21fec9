#pragma once
// Pairwise dissimilarity access, cluster-level averages and diameters,
// harmonic numbers and triangle-inequality validation.
//
// A DistanceSource is immutable after construction and safe to share across
// threads; every operation in this header is a pure function of its inputs.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace linklab {

enum class Norm { L1, L2, LINF };

std::string norm_name(Norm norm);
Norm parse_norm(const std::string& name);

/// Error-compensated (Kahan) accumulator. All averages and sums in the
/// library go through this so results are stable in accumulation order.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Distinct point indices in [0, n). Operations do not depend on the order
/// of the indices; generators and the oracle always emit them sorted.
using IndexSet = std::vector<int>;

/// Pairwise dissimilarities over n points, backed either by an n x d feature
/// matrix plus a norm, or by an explicit condensed symmetric matrix.
///
/// Feature-backed sources are metrics by construction; matrix-backed sources
/// may violate the triangle inequality (see check_metricity).
class DistanceSource {
 public:
  /// Empty source; replace it via the factories before use.
  DistanceSource() = default;

  /// Row-major feature matrix, n rows of d coordinates.
  static DistanceSource from_features(std::vector<double> data, int n, int d,
                                      Norm norm);
  /// Condensed upper-triangular matrix with n(n-1)/2 nonnegative entries.
  /// Entry (i, j), i < j, lives at index n*i - i*(i+1)/2 + (j - i - 1).
  static DistanceSource from_condensed(int n, std::vector<double> condensed);

  int size() const { return n_; }
  bool feature_backed() const { return feature_backed_; }
  int dim() const { return d_; }
  Norm norm() const { return norm_; }

  /// dist(i, i) = 0; dist(i, j) = dist(j, i) >= 0. Throws on out-of-range.
  double dist(int i, int j) const;

  /// Coordinates of point i (feature-backed sources only).
  const double* row(int i) const;

  /// Materialize the full condensed matrix (used by the fast engine).
  std::vector<double> to_condensed() const;

  static std::size_t condensed_index(int n, int i, int j);

 private:
  int n_ = 0;
  bool feature_backed_ = false;
  int d_ = 0;
  Norm norm_ = Norm::L2;
  std::vector<double> features_;   // n_ * d_, row-major
  std::vector<double> condensed_;  // n_(n_-1)/2
};

/// Mean dissimilarity over the unordered pairs of S; 0 when |S| <= 1.
double avg_within(const DistanceSource& src, const IndexSet& s);

/// Mean dissimilarity over the |S|*|T| cross pairs. S and T must be
/// nonempty and disjoint.
double avg_between(const DistanceSource& src, const IndexSet& s,
                   const IndexSet& t);

/// Maximum pairwise dissimilarity in S; 0 when |S| = 1.
double diam(const DistanceSource& src, const IndexSet& s);

struct MetricityViolation {
  int i = 0;
  int j = 0;  // midpoint
  int k = 0;
  double slack = 0.0;  // dist(i,k) - dist(i,j) - dist(j,k)
};

/// Scans all triples and reports those with dist(i,k) > dist(i,j) +
/// dist(j,k) + tol. Empty result means the source is a metric within tol.
std::vector<MetricityViolation> check_metricity(const DistanceSource& src,
                                                double tol = 1e-9);

/// H_p = sum_{i=1..p} 1/i, compensated summation. Rejects p < 1.
double harmonic(int p);

// --- file formats ------------------------------------------------------
//
// Feature CSV: one row per point, numeric columns only, optional header
// line (skipped when its first field does not parse as a number).
// Condensed matrix file: first line n, then n(n-1)/2 whitespace-separated
// nonnegative reals in condensed order.

DistanceSource load_features_csv(const std::string& path, Norm norm);
DistanceSource load_condensed_matrix(const std::string& path);
void write_features_csv(const DistanceSource& src, const std::string& path);
void write_condensed_matrix(const DistanceSource& src,
                            const std::string& path);

}  // namespace linklab
