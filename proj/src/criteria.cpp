#include "linklab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace linklab {

namespace {

void require_k2(const Clustering& c, const char* what) {
  if (c.k < 2)
    throw std::invalid_argument(std::string(what) + " requires k >= 2");
}

}  // namespace

double sep_av(const Clustering& c, const DistanceSource& src) {
  require_k2(c, "sep_av");
  const auto parts = blocks(c);
  KahanSum sum;
  for (int i = 0; i < c.k; ++i)
    for (int j = i + 1; j < c.k; ++j) sum.add(avg_between(src, parts[i], parts[j]));
  return sum.value() / (static_cast<double>(c.k) * (c.k - 1) / 2.0);
}

double sep_min(const Clustering& c, const DistanceSource& src) {
  require_k2(c, "sep_min");
  const auto parts = blocks(c);
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < c.k; ++i)
    for (int j = i + 1; j < c.k; ++j)
      m = std::min(m, avg_between(src, parts[i], parts[j]));
  return m;
}

double max_diam(const Clustering& c, const DistanceSource& src) {
  const auto parts = blocks(c);
  double m = 0.0;
  for (const auto& p : parts) m = std::max(m, diam(src, p));
  return m;
}

double max_avg(const Clustering& c, const DistanceSource& src) {
  const auto parts = blocks(c);
  double m = 0.0;
  for (const auto& p : parts) m = std::max(m, avg_within(src, p));
  return m;
}

double avg_diam(const Clustering& c, const DistanceSource& src) {
  const auto parts = blocks(c);
  KahanSum sum;
  for (const auto& p : parts) sum.add(diam(src, p));
  return sum.value() / c.k;
}

namespace {

double ratio_with_convention(double num, double den) {
  if (den > 0.0) return num / den;
  return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

double cs_ratio_av(const Clustering& c, const DistanceSource& src) {
  require_k2(c, "cs_ratio_av");
  return ratio_with_convention(max_avg(c, src), sep_min(c, src));
}

double cs_ratio_dm(const Clustering& c, const DistanceSource& src) {
  require_k2(c, "cs_ratio_dm");
  return ratio_with_convention(max_diam(c, src), sep_min(c, src));
}

double ckmm_cost(const Dendrogram& d, const DistanceSource& src) {
  if (d.n != src.size())
    throw std::invalid_argument("dendrogram and source disagree on n");
  std::vector<std::vector<int>> members(2 * d.n - 1);
  for (int i = 0; i < d.n; ++i) members[i] = {i};
  KahanSum total;
  for (int t = 0; t < d.n - 1; ++t) {
    const Merge& m = d.merges[t];
    const auto& a = members[m.left_id];
    const auto& b = members[m.right_id];
    KahanSum cross;
    for (int x : a)
      for (int y : b) cross.add(src.dist(x, y));
    total.add(cross.value() * m.size);
    auto& dst = members[d.n + t];
    dst.resize(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), dst.begin());
    members[m.left_id].clear();
    members[m.right_id].clear();
  }
  return total.value();
}

const std::vector<std::string>& criterion_names() {
  static const std::vector<std::string> names = {
      "sep_min",  "sep_av",      "max_diam",   "max_avg",
      "avg_diam", "cs_ratio_dm", "cs_ratio_av"};
  return names;
}

bool criterion_is_maximized(const std::string& name) {
  return name == "sep_av" || name == "sep_min";
}

double evaluate_criterion(const std::string& name, const Clustering& c,
                          const DistanceSource& src) {
  if (name == "sep_av") return sep_av(c, src);
  if (name == "sep_min") return sep_min(c, src);
  if (name == "max_diam") return max_diam(c, src);
  if (name == "max_avg") return max_avg(c, src);
  if (name == "avg_diam") return avg_diam(c, src);
  if (name == "cs_ratio_av") return cs_ratio_av(c, src);
  if (name == "cs_ratio_dm") return cs_ratio_dm(c, src);
  throw std::invalid_argument("unknown criterion: " + name);
}

CriteriaReport evaluate_criteria(const std::vector<std::string>& names,
                                 const Clustering& c,
                                 const DistanceSource& src) {
  CriteriaReport report;
  report.k = c.k;
  report.values.reserve(names.size());
  for (const auto& name : names)
    report.values.emplace_back(name, evaluate_criterion(name, c, src));
  return report;
}

std::string report_csv_header() {
  return "dataset,norm,method,k,criterion,value";
}

std::string report_csv_rows(const CriteriaReport& report) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [name, value] : report.values) {
    out << report.dataset << ',' << norm_name(report.norm) << ','
        << report.method << ',' << report.k << ',' << name << ',';
    if (std::isinf(value))
      out << "inf";
    else
      out << value;
    out << "\n";
  }
  return out.str();
}

}  // namespace linklab
