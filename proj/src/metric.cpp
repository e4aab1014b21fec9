#include "linklab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace linklab {

std::string norm_name(Norm norm) {
  switch (norm) {
    case Norm::L1:
      return "l1";
    case Norm::L2:
      return "l2";
    case Norm::LINF:
      return "linf";
  }
  return "l2";
}

Norm parse_norm(const std::string& name) {
  if (name == "l1") return Norm::L1;
  if (name == "l2") return Norm::L2;
  if (name == "linf") return Norm::LINF;
  throw std::invalid_argument("unknown norm: " + name);
}

std::size_t DistanceSource::condensed_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return static_cast<std::size_t>(n) * i - static_cast<std::size_t>(i) * (i + 1) / 2 +
         (j - i - 1);
}

DistanceSource DistanceSource::from_features(std::vector<double> data, int n,
                                             int d, Norm norm) {
  if (n < 1 || d < 1) throw std::invalid_argument("n and d must be positive");
  if (data.size() != static_cast<std::size_t>(n) * d)
    throw std::invalid_argument("feature buffer size does not match n*d");
  DistanceSource src;
  src.n_ = n;
  src.feature_backed_ = true;
  src.d_ = d;
  src.norm_ = norm;
  src.features_ = std::move(data);
  return src;
}

DistanceSource DistanceSource::from_condensed(int n,
                                              std::vector<double> condensed) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  const std::size_t expect = static_cast<std::size_t>(n) * (n - 1) / 2;
  if (condensed.size() != expect)
    throw std::invalid_argument("condensed matrix must have n(n-1)/2 entries");
  for (double v : condensed)
    if (!(v >= 0.0))
      throw std::invalid_argument("condensed entries must be nonnegative");
  DistanceSource src;
  src.n_ = n;
  src.feature_backed_ = false;
  src.condensed_ = std::move(condensed);
  return src;
}

double DistanceSource::dist(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::out_of_range("point index out of range");
  if (i == j) return 0.0;
  if (!feature_backed_) return condensed_[condensed_index(n_, i, j)];
  const double* a = features_.data() + static_cast<std::size_t>(i) * d_;
  const double* b = features_.data() + static_cast<std::size_t>(j) * d_;
  switch (norm_) {
    case Norm::L1: {
      KahanSum s;
      for (int c = 0; c < d_; ++c) s.add(std::fabs(a[c] - b[c]));
      return s.value();
    }
    case Norm::L2: {
      KahanSum s;
      for (int c = 0; c < d_; ++c) {
        const double diff = a[c] - b[c];
        s.add(diff * diff);
      }
      return std::sqrt(s.value());
    }
    case Norm::LINF: {
      double m = 0.0;
      for (int c = 0; c < d_; ++c) m = std::max(m, std::fabs(a[c] - b[c]));
      return m;
    }
  }
  return 0.0;
}

const double* DistanceSource::row(int i) const {
  if (!feature_backed_)
    throw std::logic_error("row() requires a feature-backed source");
  if (i < 0 || i >= n_) throw std::out_of_range("point index out of range");
  return features_.data() + static_cast<std::size_t>(i) * d_;
}

std::vector<double> DistanceSource::to_condensed() const {
  if (!feature_backed_) return condensed_;
  std::vector<double> out(static_cast<std::size_t>(n_) * (n_ - 1) / 2);
  std::size_t idx = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) out[idx++] = dist(i, j);
  return out;
}

namespace {

void validate_set(const DistanceSource& src, const IndexSet& s) {
  if (s.empty()) throw std::invalid_argument("index set must be nonempty");
  for (int i : s)
    if (i < 0 || i >= src.size())
      throw std::out_of_range("index set entry out of range");
}

}  // namespace

double avg_within(const DistanceSource& src, const IndexSet& s) {
  validate_set(src, s);
  const std::size_t m = s.size();
  if (m <= 1) return 0.0;
  KahanSum sum;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) sum.add(src.dist(s[a], s[b]));
  return sum.value() / (static_cast<double>(m) * (m - 1) / 2.0);
}

double avg_between(const DistanceSource& src, const IndexSet& s,
                   const IndexSet& t) {
  validate_set(src, s);
  validate_set(src, t);
  std::vector<char> in_s(src.size(), 0);
  for (int i : s) in_s[i] = 1;
  for (int i : t)
    if (in_s[i])
      throw std::invalid_argument("avg_between requires disjoint sets");
  KahanSum sum;
  for (int a : s)
    for (int b : t) sum.add(src.dist(a, b));
  return sum.value() / (static_cast<double>(s.size()) * t.size());
}

double diam(const DistanceSource& src, const IndexSet& s) {
  validate_set(src, s);
  double m = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      m = std::max(m, src.dist(s[a], s[b]));
  return m;
}

std::vector<MetricityViolation> check_metricity(const DistanceSource& src,
                                                double tol) {
  std::vector<MetricityViolation> out;
  const int n = src.size();
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      const double dik = src.dist(i, k);
      for (int j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double slack = dik - src.dist(i, j) - src.dist(j, k);
        if (slack > tol) out.push_back({i, j, k, slack});
      }
    }
  }
  return out;
}

double harmonic(int p) {
  if (p < 1) throw std::invalid_argument("harmonic requires p >= 1");
  KahanSum s;
  for (int i = 1; i <= p; ++i) s.add(1.0 / i);
  return s.value();
}

namespace {

bool parse_double(const std::string& tok, double* out) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') return false;
  *out = v;
  return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == ';' || c == '\t' || c == ' ') {
      if (!cur.empty()) {
        fields.push_back(cur);
        cur.clear();
      } else if (c == ',' || c == ';') {
        fields.emplace_back();
      }
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) fields.push_back(cur);
  return fields;
}

}  // namespace

DistanceSource load_features_csv(const std::string& path, Norm norm) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> data;
  int d = -1;
  int n = 0;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto fields = split_csv_line(line);
    if (fields.empty()) continue;
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (const auto& f : fields) {
      double v;
      if (!parse_double(f, &v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first) {  // optional header line
        first = false;
        continue;
      }
      throw std::runtime_error(path + ": non-numeric cell in row " +
                               std::to_string(n + 1));
    }
    first = false;
    if (d < 0) d = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != d)
      throw std::runtime_error(path + ": ragged row " + std::to_string(n + 1));
    data.insert(data.end(), row.begin(), row.end());
    ++n;
  }
  if (n == 0) throw std::runtime_error(path + ": no data rows");
  return DistanceSource::from_features(std::move(data), n, d, norm);
}

DistanceSource load_condensed_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  int n = 0;
  if (!(in >> n)) throw std::runtime_error(path + ": missing point count");
  const std::size_t expect = static_cast<std::size_t>(n) * (n - 1) / 2;
  std::vector<double> condensed;
  condensed.reserve(expect);
  double v;
  while (in >> v) condensed.push_back(v);
  if (condensed.size() != expect)
    throw std::runtime_error(path + ": expected " + std::to_string(expect) +
                             " entries, found " +
                             std::to_string(condensed.size()));
  return DistanceSource::from_condensed(n, std::move(condensed));
}

void write_features_csv(const DistanceSource& src, const std::string& path) {
  if (!src.feature_backed())
    throw std::invalid_argument("source is not feature-backed");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  // Header names the columns so the file round-trips through the reader.
  for (int c = 0; c < src.dim(); ++c) out << (c ? ",x" : "x") << c;
  out << "\n";
  for (int i = 0; i < src.size(); ++i) {
    const double* r = src.row(i);
    for (int c = 0; c < src.dim(); ++c) {
      if (c) out << ',';
      out << r[c];
    }
    out << "\n";
  }
}

void write_condensed_matrix(const DistanceSource& src,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << src.size() << "\n";
  const auto condensed = src.to_condensed();
  out.precision(17);
  for (std::size_t i = 0; i < condensed.size(); ++i) {
    out << condensed[i];
    out << (((i + 1) % 8 == 0) ? '\n' : ' ');
  }
  out << "\n";
}

}  // namespace linklab
