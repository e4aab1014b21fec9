#pragma once
// Clustering-quality criteria: separation (sep_av, sep_min), cohesion
// (max_diam, max_avg, avg_diam), the cohesion/separation ratios, and the
// dissimilarity form of the hierarchical tree cost.
//
// Everything here is recomputed from the source so these values act as an
// independent check on the engines. Pure functions over immutable inputs;
// safe to evaluate many (clustering, criterion) pairs in parallel.

#include <string>
#include <vector>

#include "linklab/linkage.hpp"
#include "linklab/metric.hpp"

namespace linklab {

/// Mean over cluster pairs of the between-cluster average distance.
/// Requires k >= 2.
double sep_av(const Clustering& c, const DistanceSource& src);

/// Minimum between-cluster average distance. Requires k >= 2.
double sep_min(const Clustering& c, const DistanceSource& src);

/// Largest block diameter.
double max_diam(const Clustering& c, const DistanceSource& src);

/// Largest within-block average distance.
double max_avg(const Clustering& c, const DistanceSource& src);

/// Mean block diameter.
double avg_diam(const Clustering& c, const DistanceSource& src);

/// max_avg / sep_min. When sep_min = 0: returns 0 if the numerator is 0,
/// +inf otherwise. Requires k >= 2.
double cs_ratio_av(const Clustering& c, const DistanceSource& src);

/// max_diam / sep_min, same zero-denominator convention. Requires k >= 2.
double cs_ratio_dm(const Clustering& c, const DistanceSource& src);

/// Tree cost over dissimilarities: sum over point pairs of diss(a,b) times
/// the leaf count of the subtree rooted at their lowest common ancestor.
/// Computed incrementally as sum over merges of (cross-pair distance sum)
/// times (merged size).
double ckmm_cost(const Dendrogram& d, const DistanceSource& src);

/// Names accepted by evaluate_criterion and the bench pipeline.
const std::vector<std::string>& criterion_names();

/// True for sep_av / sep_min (larger is better); false for the others.
bool criterion_is_maximized(const std::string& name);

double evaluate_criterion(const std::string& name, const Clustering& c,
                          const DistanceSource& src);

/// Criterion values for one (clustering, source) pair.
struct CriteriaReport {
  std::string dataset;
  Norm norm = Norm::L2;
  std::string method;  // linkage rule name or "external"
  int k = 0;
  std::vector<std::pair<std::string, double>> values;
};

CriteriaReport evaluate_criteria(const std::vector<std::string>& names,
                                 const Clustering& c,
                                 const DistanceSource& src);

/// One CSV row per criterion: dataset,norm,method,k,criterion,value.
/// +inf is rendered as the literal "inf".
std::string report_csv_rows(const CriteriaReport& report);
std::string report_csv_header();

}  // namespace linklab
