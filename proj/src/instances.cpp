#include "linklab/instances.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace linklab {

std::string engine_name(Engine e) {
  return e == Engine::NAIVE ? "naive" : "nnchain";
}

Dendrogram build(const DistanceSource& src, LinkageRule rule, Engine engine,
                 TieBreak tb) {
  return engine == Engine::NAIVE ? build_naive(src, rule, tb)
                                 : build_nnchain(src, rule);
}

namespace {

constexpr double kTol = 1e-9;
// Triple-scan budget for the construction-time metricity self-check.
constexpr int kMetricScanLimit = 1000;
// Largest source for which engine-reproduction expectations are attached.
constexpr int kEngineCheckLimit = 5100;

void self_check_metricity(InstanceBundle& bundle) {
  if (bundle.source.size() > kMetricScanLimit) return;
  const bool metric = check_metricity(bundle.source, kTol).empty();
  if (metric != bundle.declared_metric)
    throw std::logic_error(
        bundle.name + ": constructed source contradicts declared metricity");
  bundle.metric_checked = true;
}

Clustering grouped(const std::vector<int>& group_sizes) {
  std::vector<int> labels;
  for (std::size_t g = 0; g < group_sizes.size(); ++g)
    labels.insert(labels.end(), group_sizes[g], static_cast<int>(g));
  return clustering_from_labels(labels);
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

double choose2(double m) { return m * (m - 1) / 2.0; }

}  // namespace

std::vector<BundleCheck> verify_bundle(const InstanceBundle& bundle) {
  std::vector<BundleCheck> out;

  {
    BundleCheck c;
    c.name = "metricity";
    if (bundle.source.size() <= kMetricScanLimit) {
      const bool metric = check_metricity(bundle.source, kTol).empty();
      c.pass = metric == bundle.declared_metric;
      c.lhs = metric ? 1.0 : 0.0;
      c.target = bundle.declared_metric ? 1.0 : 0.0;
      c.detail = "triple scan";
    } else {
      c.pass = true;
      c.detail = "scan skipped (n > " + std::to_string(kMetricScanLimit) + ")";
    }
    out.push_back(c);
  }

  // One build per (rule, engine) serves all partition expectations.
  std::map<std::pair<int, int>, Dendrogram> cache;
  for (const auto& pe : bundle.partitions) {
    const auto key = std::make_pair(static_cast<int>(pe.rule),
                                    static_cast<int>(pe.engine));
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, build(bundle.source, pe.rule, pe.engine)).first;
    const Clustering got = cut(it->second, pe.k);
    BundleCheck c;
    c.name = pe.name;
    c.pass = got == pe.expected;
    c.detail = rule_name(pe.rule) + "/" + engine_name(pe.engine) +
               " k=" + std::to_string(pe.k);
    out.push_back(c);
  }

  for (const auto& se : bundle.scalars) {
    BundleCheck c;
    c.name = se.name;
    c.lhs = se.compute(bundle);
    c.target = se.target;
    switch (se.cmp) {
      case Cmp::EQ:
        c.pass = std::fabs(c.lhs - se.target) <= se.tol;
        break;
      case Cmp::LE:
        c.pass = c.lhs <= se.target + se.tol;
        break;
      case Cmp::GE:
        c.pass = c.lhs >= se.target - se.tol;
        break;
    }
    out.push_back(c);
  }
  return out;
}

bool all_pass(const std::vector<BundleCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BundleCheck& c) { return c.pass; });
}

void write_bundle(const InstanceBundle& bundle, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  if (bundle.source.feature_backed())
    write_features_csv(bundle.source,
                       (dir / (bundle.name + "_features.csv")).string());
  else
    write_condensed_matrix(bundle.source,
                           (dir / (bundle.name + "_matrix.txt")).string());

  std::ofstream out(dir / (bundle.name + "_expectations.txt"));
  if (!out) throw std::runtime_error("cannot write expectations file");
  out << "instance " << bundle.name << "\n";
  out << "params " << bundle.params << "\n";
  out << "point_order " << bundle.point_order << "\n";
  out << "metric declared=" << (bundle.declared_metric ? "true" : "false")
      << " checked=" << (bundle.metric_checked ? "true" : "false") << "\n";
  for (const auto& pe : bundle.partitions) {
    out << "partition " << pe.name << " rule=" << rule_name(pe.rule)
        << " engine=" << engine_name(pe.engine) << " k=" << pe.k << " labels=";
    for (int i = 0; i < pe.expected.n; ++i)
      out << (i ? " " : "") << pe.expected.labels[i];
    out << "\n";
  }
  for (const auto& [name, ref] : bundle.references) {
    out << "reference " << name << " k=" << ref.k << " labels=";
    for (int i = 0; i < ref.n; ++i) out << (i ? " " : "") << ref.labels[i];
    out << "\n";
  }
  for (const auto& se : bundle.scalars) {
    const char* cmp =
        se.cmp == Cmp::EQ ? "eq" : (se.cmp == Cmp::LE ? "le" : "ge");
    const char* basis =
        se.basis == Basis::ANALYTIC
            ? "analytic"
            : (se.basis == Basis::EVALUATED ? "evaluated" : "regression");
    out << "scalar " << se.name << " cmp=" << cmp
        << " target=" << fmt(se.target) << " tol=" << se.tol
        << " basis=" << basis << " value=" << fmt(se.compute(bundle)) << "\n";
  }
}

// --- factorial line instance ----------------------------------------------

namespace {

struct IcsLayout {
  int t = 0;
  long long n = 0;
  std::vector<long long> group_size;  // sizes (i+1)! - i!, group 0 has 1
  std::vector<double> position;       // p_i
  double last_avg = 0.0;  // avg(group_{t-1}, groups_{0..t-2})
};

IcsLayout ics_layout(int t, double eps) {
  if (t < 2) throw std::invalid_argument("line instance requires t >= 2");
  if (t > 8) throw std::invalid_argument("line instance limited to t <= 8");
  if (eps < 0.0) throw std::invalid_argument("eps must be >= 0");
  IcsLayout lay;
  lay.t = t;
  lay.group_size.resize(t);
  lay.position.resize(t);
  long long fact = 1;
  lay.group_size[0] = 1;
  for (int i = 1; i < t; ++i) {
    const long long next = fact * (i + 1);
    lay.group_size[i] = next - fact;
    fact = next;
  }
  lay.n = fact;

  // avg(group_i, prefix_{0..j}) from the current positions.
  auto prefix_avg = [&](int i, int j) {
    KahanSum s;
    long long count = 0;
    for (int g = 0; g <= j; ++g) {
      s.add(static_cast<double>(lay.group_size[g]) *
            (lay.position[i] - lay.position[g]));
      count += lay.group_size[g];
    }
    return s.value() / static_cast<double>(count);
  };

  lay.position[0] = 0.0;
  lay.position[1] = 1.0;
  for (int i = 2; i < t; ++i)
    lay.position[i] = lay.position[i - 1] + prefix_avg(i - 1, i - 2) + eps;
  lay.last_avg = prefix_avg(t - 1, t - 2);
  return lay;
}

Clustering ics_cut(const IcsLayout& lay, int k) {
  // Prefix of t-k+1 groups merged, later groups separate.
  std::vector<int> sizes;
  long long merged = 0;
  for (int g = 0; g <= lay.t - k; ++g) merged += lay.group_size[g];
  sizes.push_back(static_cast<int>(merged));
  for (int g = lay.t - k + 1; g < lay.t; ++g)
    sizes.push_back(static_cast<int>(lay.group_size[g]));
  return grouped(sizes);
}

}  // namespace

InstanceBundle gen_ics(int t, double eps) {
  const IcsLayout lay = ics_layout(t, eps);
  InstanceBundle b;
  b.name = "ics_t" + std::to_string(t);
  b.params = "t=" + std::to_string(t) + " eps=" + fmt(eps);
  b.point_order =
      "groups in position order; group i holds (i+1)!-i! consecutive indices";

  std::vector<double> coords;
  coords.reserve(lay.n);
  for (int g = 0; g < t; ++g)
    coords.insert(coords.end(), lay.group_size[g], lay.position[g]);
  b.source = DistanceSource::from_features(std::move(coords),
                                           static_cast<int>(lay.n), 1, Norm::L2);

  for (int k = 2; k <= t; ++k)
    b.references["al_cut_k" + std::to_string(k)] = ics_cut(lay, k);
  {
    std::vector<int> sizes(2);
    sizes[0] = 1;
    sizes[1] = static_cast<int>(lay.n - 1);
    b.references["isolate_first"] = grouped(sizes);
  }

  // Tie-free executions need eps > 0 once t > 3; at t <= 3 the id-ordered
  // tie policy lands on the same merges.
  if ((eps > 0.0 || t <= 3) && lay.n <= kEngineCheckLimit) {
    const Engine engine = lay.n <= 720 ? Engine::NAIVE : Engine::NNCHAIN;
    for (int k = 2; k <= t; ++k)
      b.partitions.push_back({"al_cut_k" + std::to_string(k),
                              LinkageRule::AVERAGE, engine, k, ics_cut(lay, k)});
  }

  for (int g = 0; g < t; ++g) {
    b.facts["p_" + std::to_string(g)] = lay.position[g];
    b.facts["group_size_" + std::to_string(g)] =
        static_cast<double>(lay.group_size[g]);
  }
  b.facts["last_avg"] = lay.last_avg;

  const double diam_prefix = lay.position[t - 2];  // diam of the k=2 big block
  b.scalars.push_back(
      {"sep_min_al_k2", Cmp::EQ, lay.last_avg, 1e-9, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return sep_min(self.references.at("al_cut_k2"), self.source);
       }});
  b.scalars.push_back(
      {"cs_ratio_dm_al_k2", Cmp::EQ, diam_prefix / lay.last_avg, 1e-9,
       Basis::ANALYTIC, [](const InstanceBundle& self) {
         return cs_ratio_dm(self.references.at("al_cut_k2"), self.source);
       }});
  if (t >= 5) {
    b.scalars.push_back(
        {"cs_dm_gain_vs_isolate_first", Cmp::GE, 1.5, 1e-9, Basis::EVALUATED,
         [](const InstanceBundle& self) {
           const double a =
               cs_ratio_dm(self.references.at("al_cut_k2"), self.source);
           const double r =
               cs_ratio_dm(self.references.at("isolate_first"), self.source);
           return a / r;
         }});
  }

  self_check_metricity(b);
  return b;
}

// --- augmented line instance with satellites --------------------------------

InstanceBundle gen_ics_augmented(int k, double eps) {
  if (k < 2) throw std::invalid_argument("augmented instance requires k >= 2");
  if (k > 7)
    throw std::invalid_argument(
        "augmented instance limited to k <= 7 (matrix grows as (k!+k)^2)");
  if (!(eps > 0.0))
    throw std::invalid_argument("augmented instance requires eps > 0");
  const IcsLayout lay = ics_layout(k, eps);
  const int base = static_cast<int>(lay.n);
  const int n = base + k;
  const double lift = k + 1 + eps;  // satellite-to-own-group distance

  // Position of every base point and of the group each satellite hovers on.
  std::vector<double> pos(n);
  {
    int idx = 0;
    for (int g = 0; g < k; ++g)
      for (long long c = 0; c < lay.group_size[g]; ++c) pos[idx++] = lay.position[g];
    for (int s = 0; s < k; ++s) pos[idx++] = lay.position[s];
  }
  std::vector<double> condensed(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    const bool sat_i = i >= base;
    for (int j = i + 1; j < n; ++j) {
      const bool sat_j = j >= base;
      double v = std::fabs(pos[i] - pos[j]);
      if (sat_i && sat_j)
        v += 2.0 * lift;
      else if (sat_i || sat_j)
        v += lift;
      condensed[DistanceSource::condensed_index(n, i, j)] = v;
    }
  }

  InstanceBundle b;
  b.name = "ics_aug_k" + std::to_string(k);
  b.params = "k=" + std::to_string(k) + " eps=" + fmt(eps);
  b.point_order = "line groups in position order, then one satellite per group";
  b.source = DistanceSource::from_condensed(n, std::move(condensed));

  {
    // (k+1)-cut: merged prefix of all k groups, satellites isolated.
    std::vector<int> sizes;
    sizes.push_back(base);
    sizes.insert(sizes.end(), k, 1);
    b.references["al_cut"] = grouped(sizes);
    if (n <= kEngineCheckLimit) {
      const Engine engine = n <= 720 ? Engine::NAIVE : Engine::NNCHAIN;
      b.partitions.push_back(
          {"al_cut_k" + std::to_string(k + 1), LinkageRule::AVERAGE, engine,
           k + 1, b.references.at("al_cut")});
    }
  }
  {
    // Pair each satellite with its own group: k blocks of diameter lift.
    std::vector<int> labels(n);
    int idx = 0;
    for (int g = 0; g < k; ++g)
      for (long long c = 0; c < lay.group_size[g]; ++c) labels[idx++] = g;
    for (int s = 0; s < k; ++s) labels[idx++] = s;
    b.references["satellite_pairing"] = clustering_from_labels(labels);
  }

  const double big_diam = lay.position[k - 1];
  b.facts["expected_ratio"] = big_diam / lift;
  b.facts["lift"] = lift;
  b.scalars.push_back(
      {"max_diam_al_cut", Cmp::EQ, big_diam, 1e-9, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return max_diam(self.references.at("al_cut"), self.source);
       }});
  b.scalars.push_back(
      {"max_diam_satellite_pairing", Cmp::EQ, lift, 1e-9, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return max_diam(self.references.at("satellite_pairing"), self.source);
       }});
  b.scalars.push_back(
      {"max_diam_ratio", Cmp::EQ, big_diam / lift, 1e-9, Basis::EVALUATED,
       [](const InstanceBundle& self) {
         return max_diam(self.references.at("al_cut"), self.source) /
                max_diam(self.references.at("satellite_pairing"), self.source);
       }});

  self_check_metricity(b);
  return b;
}

// --- separation instance ----------------------------------------------------

InstanceBundle gen_sep(int k, double d_cross, double eps) {
  if (k < 5 || k % 2 == 0)
    throw std::invalid_argument("separation instance requires odd k >= 5");
  if (!(eps >= 0.0 && eps < 1.0 && d_cross > 1.0))
    throw std::invalid_argument("separation instance requires eps < 1 < D");
  const int m = (k - 1) / 2;   // |S1| = |S2|
  const int s3 = k - 2;        // |S3|
  const int n = 2 * m + s3;    // = 2k - 3

  std::vector<double> condensed(static_cast<std::size_t>(n) * (n - 1) / 2);
  auto group_of = [&](int i) { return i < m ? 0 : (i < 2 * m ? 1 : 2); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int gi = group_of(i), gj = group_of(j);
      double v = d_cross;
      if (gi == gj) v = gi == 2 ? 1.0 : eps;
      condensed[DistanceSource::condensed_index(n, i, j)] = v;
    }

  InstanceBundle b;
  b.name = "sep_k" + std::to_string(k);
  b.params = "k=" + std::to_string(k) + " D=" + fmt(d_cross) + " eps=" + fmt(eps);
  b.point_order = "S1 indices 0..m-1, S2 m..2m-1, S3 last";
  b.source = DistanceSource::from_condensed(n, std::move(condensed));

  {
    std::vector<int> sizes = {m, m};
    sizes.insert(sizes.end(), s3, 1);
    const Clustering cutk = grouped(sizes);
    b.references["method_cut"] = cutk;
    b.partitions.push_back(
        {"average_cut_k", LinkageRule::AVERAGE, Engine::NAIVE, k, cutk});
    b.partitions.push_back(
        {"single_cut_k", LinkageRule::SINGLE, Engine::NAIVE, k, cutk});
    b.partitions.push_back(
        {"complete_cut_k", LinkageRule::COMPLETE, Engine::NAIVE, k, cutk});
  }
  {
    // S3 intact, every S1/S2 point its own block.
    std::vector<int> labels(n);
    for (int i = 0; i < 2 * m; ++i) labels[i] = i;
    for (int i = 2 * m; i < n; ++i) labels[i] = 2 * m;
    b.references["rival_sep_av"] = clustering_from_labels(labels);
  }
  {
    // S3 plus one S1 point against the rest of S1 and all of S2.
    std::vector<int> labels(n);
    labels[0] = 0;
    for (int i = 1; i < m; ++i) labels[i] = 1;
    for (int i = m; i < 2 * m; ++i) labels[i] = 2;
    for (int i = 2 * m; i < n; ++i) labels[i] = 0;
    b.references["rival_sep_min"] = clustering_from_labels(labels);
  }

  const double sep_av_cut =
      (d_cross * (2.0 * k - 3.0) + choose2(k - 2)) / choose2(k);
  const double sep_av_rival =
      (d_cross * (k - 1.0) + d_cross * m * m + eps * m * (m - 1.0)) /
      choose2(k);
  const double rival_min = ((k - 2.0) * d_cross + eps) / (k - 1.0);

  b.facts["sep_av_ratio"] = sep_av_cut / sep_av_rival;
  b.facts["rival_sep_min"] = rival_min;

  b.scalars.push_back(
      {"sep_min_method_cut", Cmp::EQ, 1.0, 1e-12, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return sep_min(self.references.at("method_cut"), self.source);
       }});
  b.scalars.push_back(
      {"sep_av_method_cut", Cmp::EQ, sep_av_cut, 1e-9, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return sep_av(self.references.at("method_cut"), self.source);
       }});
  b.scalars.push_back(
      {"sep_av_ratio", Cmp::EQ, sep_av_cut / sep_av_rival, 1e-9,
       Basis::ANALYTIC, [](const InstanceBundle& self) {
         return sep_av(self.references.at("method_cut"), self.source) /
                sep_av(self.references.at("rival_sep_av"), self.source);
       }});
  b.scalars.push_back(
      {"rival_sep_min_value", Cmp::EQ, rival_min, 1e-9, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return sep_min(self.references.at("rival_sep_min"), self.source);
       }});
  b.scalars.push_back(
      {"rival_sep_min_floor", Cmp::GE, 0.7 * d_cross, 0.0, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return sep_min(self.references.at("rival_sep_min"), self.source);
       }});
  b.scalars.push_back(
      {"sep_min_ratio", Cmp::LE, 1.5 / d_cross, 1e-12, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return sep_min(self.references.at("method_cut"), self.source) /
                sep_min(self.references.at("rival_sep_min"), self.source);
       }});

  self_check_metricity(b);
  return b;
}

// --- single-linkage line -----------------------------------------------------

InstanceBundle gen_sl_line(int n, double eps) {
  if (n < 6) throw std::invalid_argument("line instance requires n >= 6");
  if (!(eps > 0.0) || (n + 1) * eps >= 1.0)
    throw std::invalid_argument("requires 0 < eps and (n+1)*eps < 1");
  std::vector<double> coords(n);
  coords[0] = 1.0;
  for (int i = 1; i < n; ++i) coords[i] = coords[i - 1] + 1.0 - (i + 1) * eps;

  InstanceBundle b;
  b.name = "sl_line_n" + std::to_string(n);
  b.params = "n=" + std::to_string(n) + " eps=" + fmt(eps);
  b.point_order = "left to right on the line";
  b.source =
      DistanceSource::from_features(std::move(coords), n, 1, Norm::L2);

  for (int k = 3; k <= n / 2; ++k) {
    std::vector<int> sizes(k - 1, 1);
    sizes.push_back(n - k + 1);
    const Clustering expect = grouped(sizes);
    b.references["sl_cut_k" + std::to_string(k)] = expect;
    b.partitions.push_back({"sl_cut_k" + std::to_string(k),
                            LinkageRule::SINGLE, Engine::NAIVE, k, expect});
  }

  b.scalars.push_back(
      {"cs_av_sl_k3", Cmp::GE, (n - 3.0) / 8.0, 1e-9, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return cs_ratio_av(self.references.at("sl_cut_k3"), self.source);
       }});
  b.scalars.push_back(
      {"sl_over_al_cs_av_k3", Cmp::GE, 2.0, 1e-9, Basis::EVALUATED,
       [](const InstanceBundle& self) {
         const Dendrogram d = build_naive(self.source, LinkageRule::AVERAGE);
         const double al = cs_ratio_av(cut(d, 3), self.source);
         const double sl =
             cs_ratio_av(self.references.at("sl_cut_k3"), self.source);
         return sl / al;
       }});

  self_check_metricity(b);
  return b;
}

// --- complete-linkage ell_1 instance ----------------------------------------

InstanceBundle gen_cl_l1(int m) {
  if (m < 2 || m > 3)
    throw std::invalid_argument("ell_1 instance requires m in {2, 3}");
  const int t = (1 << m) - 1;
  const int p = 2 * (t * t + t);
  const int n = 2 * p;
  const int d = p + 1;

  std::vector<double> rows(static_cast<std::size_t>(n) * d, 0.0);
  auto coord = [&](int i, int c) -> double& {
    return rows[static_cast<std::size_t>(i) * d + c];
  };
  int idx = 0;
  for (int i = 1; i <= t; ++i) coord(idx++, 0) = i + 0.5;        // A
  for (int i = 1; i <= t; ++i) coord(idx++, 0) = -(i + 0.5);     // B
  for (int i = 0; i < t * t; ++i) coord(idx++, 0) = 0.5;         // C
  for (int i = 0; i < t * t; ++i) coord(idx++, 0) = -0.5;        // D
  const int e_start = idx;
  for (int i = 1; i <= p; ++i) {                                 // E
    coord(idx, 0) = static_cast<double>(t) * t;
    coord(idx, i) = 1.5 * t;
    ++idx;
  }

  InstanceBundle b;
  b.name = "cl_l1_m" + std::to_string(m);
  b.params = "m=" + std::to_string(m) + " t=" + std::to_string(t);
  b.point_order = "A then B then C then D then E";
  b.source = DistanceSource::from_features(std::move(rows), n, d, Norm::L1);
  b.facts["t"] = t;
  b.facts["p"] = p;

  std::vector<int> shape_labels(n);
  for (int i = 0; i < n; ++i) {
    if (i < t)
      shape_labels[i] = 0;  // A
    else if (i < 2 * t)
      shape_labels[i] = 1;  // B
    else if (i < 2 * t + t * t)
      shape_labels[i] = 0;  // C with A
    else if (i < e_start)
      shape_labels[i] = 1;  // D with B
  }
  {
    // Block-shaped 4-clustering: (A+C, B+D, {e_1}, E_{2..p}). This is the
    // clustering the inequality bounds below speak about; the greedy
    // engine's own complete-linkage cuts never take this shape under the
    // id-ordered tie policy because same-position leaf pairs always win
    // ties against leaf-cluster pairs.
    std::vector<int> labels = shape_labels;
    labels[e_start] = 2;
    for (int i = e_start + 1; i < n; ++i) labels[i] = 3;
    b.references["block_shape_k4"] = clustering_from_labels(labels);
  }

  b.scalars.push_back(
      {"avg_between_ac_bd", Cmp::LE, 3.0, 1e-9, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         const auto parts = blocks(self.references.at("block_shape_k4"));
         return avg_between(self.source, parts[0], parts[1]);
       }});
  b.scalars.push_back(
      {"avg_within_e_block", Cmp::EQ, 3.0 * t, 1e-9, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         const auto parts = blocks(self.references.at("block_shape_k4"));
         return avg_within(self.source, parts[3]);
       }});
  b.scalars.push_back(
      {"cs_av_block_shape", Cmp::GE, static_cast<double>(t), 1e-9,
       Basis::EVALUATED, [](const InstanceBundle& self) {
         return cs_ratio_av(self.references.at("block_shape_k4"), self.source);
       }});
  // The engine's actual 4-cut keeps at least two far-block clumps, so its
  // ratio is pinned at one or worse; average-link stays at most one here.
  b.scalars.push_back(
      {"cs_av_cl_cut_k4", Cmp::GE, 1.0, 1e-9, Basis::EVALUATED,
       [](const InstanceBundle& self) {
         const Dendrogram d = build_naive(self.source, LinkageRule::COMPLETE);
         return cs_ratio_av(cut(d, 4), self.source);
       }});

  self_check_metricity(b);
  return b;
}

// --- random-hierarchy bad instance -------------------------------------------

InstanceBundle gen_random_bad(int n, double d_far) {
  if (n < 7 || n % 2 == 0)
    throw std::invalid_argument("requires odd n >= 7");
  if (!(d_far > static_cast<double>(n) * n))
    throw std::invalid_argument("requires D > n^2");
  const int h = (n - 1) / 2;

  std::vector<double> condensed(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v;
      if (j == n - 1)
        v = d_far;  // z to anything
      else if ((i < h) == (j < h))
        v = 1.0;
      else
        v = 2.0;
      condensed[DistanceSource::condensed_index(n, i, j)] = v;
    }

  InstanceBundle b;
  b.name = "random_bad_n" + std::to_string(n);
  b.params = "n=" + std::to_string(n) + " D=" + fmt(d_far);
  b.point_order = "X indices 0..(n-3)/2, Y next, z last";
  b.source = DistanceSource::from_condensed(n, std::move(condensed));
  const int k = std::min(5, std::max(2, n / 2));
  b.facts["k"] = k;
  b.facts["seeds"] = 200;

  b.scalars.push_back(
      {"al_isolates_z", Cmp::EQ, 1.0, 0.0, Basis::EVALUATED,
       [n](const InstanceBundle& self) {
         const Dendrogram d = build_naive(self.source, LinkageRule::AVERAGE);
         for (int kk = 2; kk <= n / 2; ++kk) {
           const Clustering c = cut(d, kk);
           const auto parts = blocks(c);
           if (parts[c.labels[n - 1]].size() != 1) return 0.0;
         }
         return 1.0;
       }});
  b.scalars.push_back(
      {"bad_block_frequency", Cmp::GE, 0.6, 0.0, Basis::EVALUATED,
       [n, k, d_far](const InstanceBundle& self) {
         int hits = 0;
         const int seeds = 200;
         const double floor = d_far / (static_cast<double>(n) * n);
         for (int seed = 1; seed <= seeds; ++seed) {
           const Dendrogram d = random_hierarchy(n, seed);
           const Clustering c = cut(d, k);
           const auto parts = blocks(c);
           const auto& zb = parts[c.labels[n - 1]];
           if (zb.size() > 1 && avg_within(self.source, zb) >= floor) ++hits;
         }
         return static_cast<double>(hits) / seeds;
       }});

  self_check_metricity(b);
  return b;
}

// --- unbounded cohesion/separation approximation ------------------------------

InstanceBundle gen_unbounded_av(int n, double t_scale, double eps) {
  if (n < 6 || n % 2 != 0)
    throw std::invalid_argument("requires even n >= 6");
  if (!(t_scale > 0.0) || !(eps > 0.0) || eps > t_scale / 100.0)
    throw std::invalid_argument("requires 0 < eps <= T/100");
  const int q = n / 2 - 1;  // |S3| = |S4|

  // order: s1, s2, S3, S4
  auto group_of = [&](int i) {
    if (i == 0) return 0;
    if (i == 1) return 1;
    return i < 2 + q ? 2 : 3;
  };
  std::vector<double> condensed(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int gi = group_of(i), gj = group_of(j);
      double v;
      if (gi == gj)
        v = eps;
      else if ((gi == 0 && gj == 1) || (gi == 2 && gj == 3))
        v = t_scale;
      else
        v = 2.0 * t_scale;
      condensed[DistanceSource::condensed_index(n, i, j)] = v;
    }

  InstanceBundle b;
  b.name = "unbounded_av_n" + std::to_string(n);
  b.params = "n=" + std::to_string(n) + " T=" + fmt(t_scale) + " eps=" + fmt(eps);
  b.point_order = "s1, s2, then S3, then S4";
  b.source = DistanceSource::from_condensed(n, std::move(condensed));

  {
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i < 2 ? 0 : 1;
    const Clustering al2 = clustering_from_labels(labels);
    b.references["al_cut_k2"] = al2;
    b.partitions.push_back(
        {"al_cut_k2", LinkageRule::AVERAGE, Engine::NAIVE, 2, al2});
  }
  {
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = group_of(i);
    b.partitions.push_back({"al_cut_k4", LinkageRule::AVERAGE, Engine::NAIVE, 4,
                            clustering_from_labels(labels)});
  }
  {
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
      const int g = group_of(i);
      labels[i] = (g == 0 || g == 2) ? 0 : 1;
    }
    b.references["cross_pairing"] = clustering_from_labels(labels);
  }

  b.scalars.push_back(
      {"cs_av_al2", Cmp::EQ, 0.5, 1e-12, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return cs_ratio_av(self.references.at("al_cut_k2"), self.source);
       }});
  b.scalars.push_back(
      {"cs_av_al2_cap", Cmp::LE, 1.0, 1e-9, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return cs_ratio_av(self.references.at("al_cut_k2"), self.source);
       }});
  b.scalars.push_back(
      {"cs_av_improvement", Cmp::GE, n / 20.0, 1e-9, Basis::EVALUATED,
       [](const InstanceBundle& self) {
         return cs_ratio_av(self.references.at("al_cut_k2"), self.source) /
                cs_ratio_av(self.references.at("cross_pairing"), self.source);
       }});

  self_check_metricity(b);
  return b;
}

// --- non-metric counterexample ------------------------------------------------

InstanceBundle gen_nonmetric(int n) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("requires even n >= 8");
  const int a_size = n / 2 - 1;  // witness point is index 0
  const int p = n - 1;
  const double far = n / 2.0 - 2.0;

  std::vector<double> condensed(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v;
      const bool ia = i < a_size, ja = j < a_size;
      const bool ib = !ia && i < p, jb = !ja && j < p;
      if (j == p) {
        if (ia)
          v = i == 0 ? far : 2.0;
        else
          v = 4.0;
      } else if (ia && ja) {
        v = 1.0;
      } else if (ib && jb) {
        v = 1.0;
      } else {
        v = 4.0;
      }
      condensed[DistanceSource::condensed_index(n, i, j)] = v;
    }

  InstanceBundle b;
  b.name = "nonmetric_n" + std::to_string(n);
  b.params = "n=" + std::to_string(n);
  b.point_order = "witness a* first, rest of A, then B, remote point last";
  // The construction only breaks the triangle inequality once n/2-2 > 3.
  b.declared_metric = n <= 10;
  b.source = DistanceSource::from_condensed(n, std::move(condensed));

  {
    std::vector<int> labels(n, 1);
    for (int i = 0; i < a_size; ++i) labels[i] = 0;
    labels[p] = 0;
    const Clustering al2 = clustering_from_labels(labels);
    b.references["al_cut_k2"] = al2;
    b.partitions.push_back(
        {"al_cut_k2", LinkageRule::AVERAGE, Engine::NAIVE, 2, al2});
  }

  b.scalars.push_back(
      {"cs_dm_al2", Cmp::EQ, far / 4.0, 1e-12, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return cs_ratio_dm(self.references.at("al_cut_k2"), self.source);
       }});
  if (far / 4.0 > 2.0 * harmonic(n) * 1.005) {
    b.scalars.push_back(
        {"cs_dm_exceeds_2hn", Cmp::GE, 2.0 * harmonic(n), 1e-9,
         Basis::EVALUATED, [](const InstanceBundle& self) {
           return cs_ratio_dm(self.references.at("al_cut_k2"), self.source);
         }});
  }

  self_check_metricity(b);
  return b;
}

// --- single-linkage separation instance ---------------------------------------

InstanceBundle gen_sl_sep(int n, double eps) {
  const int r = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
  if (r * r != n || n < 9)
    throw std::invalid_argument("requires a perfect square n >= 9");
  if (!(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("requires 0 < eps < 0.5");
  const int a_size = n - 1 - r;
  const int b_start = a_size;
  const int p = n - 1;

  std::vector<double> condensed(static_cast<std::size_t>(n) * (n - 1) / 2);
  auto chain_pos = [&](int i) { return i - b_start + 1; };  // b_i index, 1-based
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v;
      const bool ia = i < a_size;
      const bool ja = j < a_size;
      const bool jb = !ja && j < p;
      if (j == p) {
        v = ia ? 1.0 + eps : 1.0 + eps + chain_pos(i);
      } else if (ia && ja) {
        v = eps;
      } else if (ia && jb) {
        v = chain_pos(j);
      } else {  // both in the chain
        v = std::fabs(chain_pos(j) - chain_pos(i));
      }
      condensed[DistanceSource::condensed_index(n, i, j)] = v;
    }

  InstanceBundle b;
  b.name = "sl_sep_n" + std::to_string(n);
  b.params = "n=" + std::to_string(n) + " eps=" + fmt(eps);
  b.point_order = "tight mass A first, chain b_1..b_r, satellite last";
  b.source = DistanceSource::from_condensed(n, std::move(condensed));

  {
    std::vector<int> labels(n, 0);
    labels[p] = 1;
    const Clustering sl2 = clustering_from_labels(labels);
    b.references["sl_cut_k2"] = sl2;
    b.partitions.push_back(
        {"sl_cut_k2", LinkageRule::SINGLE, Engine::NAIVE, 2, sl2});
  }
  {
    std::vector<int> labels(n, 0);
    for (int i = b_start; i < p; ++i) labels[i] = 1;
    b.references["rival"] = clustering_from_labels(labels);
  }

  const double root = std::sqrt(static_cast<double>(n));
  b.scalars.push_back(
      {"sep_av_sl_cut", Cmp::LE, 2.0, 1e-9, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return sep_av(self.references.at("sl_cut_k2"), self.source);
       }});
  b.scalars.push_back(
      {"sep_av_rival", Cmp::GE, root / 4.0, 1e-9, Basis::ANALYTIC,
       [](const InstanceBundle& self) {
         return sep_av(self.references.at("rival"), self.source);
       }});
  b.scalars.push_back(
      {"rival_over_sl", Cmp::GE, root / 4.0, 1e-9, Basis::EVALUATED,
       [](const InstanceBundle& self) {
         return sep_av(self.references.at("rival"), self.source) /
                sep_av(self.references.at("sl_cut_k2"), self.source);
       }});

  self_check_metricity(b);
  return b;
}

}  // namespace linklab
