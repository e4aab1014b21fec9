#include "linklab/bench.hpp"

#include "linklab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace linklab {

std::array<KSet, 3> k_sets(int n) {
  std::array<KSet, 3> out;

  KSet& small = out[0];
  small.name = "small";
  for (int k = 2; k <= 10; ++k) small.ks.push_back(k);
  if (n < 11) {
    small.valid = false;
    small.note = "n too small for k up to 10";
  }

  KSet& medium = out[1];
  medium.name = "medium";
  const int center = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)) + 0.5));
  for (int k = center - 4; k <= center + 4; ++k) medium.ks.push_back(k);
  if (n < 121) {
    medium.valid = false;
    medium.note = "needs n >= 121 so sqrt(n)-4 stays a valid k";
  }

  KSet& large = out[2];
  large.name = "large";
  std::set<int> seen;
  int requested = 0;
  for (int i = 2; i <= 10; ++i) {
    const int k = n / i;
    ++requested;
    if (seen.insert(k).second) large.ks.push_back(k);
  }
  std::sort(large.ks.begin(), large.ks.end());
  if (static_cast<int>(large.ks.size()) < requested)
    large.note = "deduplicated from " + std::to_string(requested) + " to " +
                 std::to_string(large.ks.size()) + " values";
  if (n < 20) {
    large.valid = false;
    large.note = "needs n >= 20 so floor(n/10) >= 2";
  }
  return out;
}

DistanceSource load_dataset(const std::string& path, Norm norm) {
  return load_features_csv(path, norm);
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

BenchConfig parse_bench_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  BenchConfig cfg;
  cfg.criteria = criterion_names();
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string key;
    if (!(row >> key)) continue;
    std::string rest;
    std::getline(row, rest);
    const auto first = rest.find_first_not_of(" \t");
    rest = first == std::string::npos ? "" : rest.substr(first);
    while (!rest.empty() && isspace(static_cast<unsigned char>(rest.back())))
      rest.pop_back();

    if (key == "dataset") {
      if (rest.empty()) throw std::runtime_error("dataset needs a path");
      cfg.datasets.push_back(rest);
    } else if (key == "norms") {
      cfg.norms.clear();
      for (const auto& t : split_list(rest)) cfg.norms.push_back(parse_norm(t));
    } else if (key == "ksets") {
      cfg.ksets = split_list(rest);
      for (const auto& s : cfg.ksets)
        if (s != "small" && s != "medium" && s != "large")
          throw std::runtime_error("unknown k-set " + s);
    } else if (key == "criteria") {
      cfg.criteria = split_list(rest);
    } else if (key == "tiebreak") {
      if (rest == "lex_min_id")
        cfg.tiebreak = TieBreak::LEX_MIN_ID;
      else if (rest == "first_found")
        cfg.tiebreak = TieBreak::FIRST_FOUND;
      else
        throw std::runtime_error("unknown tiebreak " + rest);
    } else if (key == "engine") {
      if (rest == "naive")
        cfg.engine = Engine::NAIVE;
      else if (rest == "nnchain")
        cfg.engine = Engine::NNCHAIN;
      else
        throw std::runtime_error("unknown engine " + rest);
    } else if (key == "subsample") {
      cfg.subsample = std::stoi(rest);
    } else if (key == "seed") {
      cfg.seed = std::stoull(rest);
    } else {
      throw std::runtime_error("unknown config key " + key);
    }
  }
  const auto& known = criterion_names();
  for (const auto& c : cfg.criteria)
    if (std::find(known.begin(), known.end(), c) == known.end())
      throw std::runtime_error("unknown criterion " + c);
  return cfg;
}

namespace {

DistanceSource subsample_source(const DistanceSource& full, int m,
                                std::uint64_t seed) {
  const int n = full.size();
  if (m >= n) return full;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  SplitMix64 rng(seed);
  for (int i = 0; i < m; ++i) {
    const int j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(m) * full.dim());
  for (int i : idx) {
    const double* r = full.row(i);
    rows.insert(rows.end(), r, r + full.dim());
  }
  return DistanceSource::from_features(std::move(rows), m, full.dim(),
                                       full.norm());
}

std::string dataset_label(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

const std::array<LinkageRule, 3> kMethodOrder = {
    LinkageRule::AVERAGE, LinkageRule::COMPLETE, LinkageRule::SINGLE};

}  // namespace

MatrixResult run_matrix(const BenchConfig& config) {
  MatrixResult result;
  for (std::size_t di = 0; di < config.datasets.size(); ++di) {
    const std::string& path = config.datasets[di];
    for (Norm norm : config.norms) {
      DistanceSource src;
      try {
        src = load_dataset(path, norm);
        if (norm == config.norms.front())
          result.loaded.push_back(path + ": n=" + std::to_string(src.size()) +
                                  ", d=" + std::to_string(src.dim()));
        if (config.subsample > 0)
          src = subsample_source(src, config.subsample, config.seed + di);
      } catch (const std::exception& e) {
        result.errors.push_back(path + ": " + e.what());
        break;  // same failure for every norm
      }
      const int n = src.size();

      std::set<int> ks;
      const auto sets = k_sets(n);
      for (const auto& name : config.ksets)
        for (const auto& set : sets)
          if (set.name == name && set.valid)
            for (int k : set.ks)
              if (k >= 2 && k <= n) ks.insert(k);

      for (LinkageRule rule : kMethodOrder) {
        Dendrogram dendro;
        try {
          dendro = build(src, rule, config.engine, config.tiebreak);
        } catch (const std::exception& e) {
          result.errors.push_back(path + " (" + rule_name(rule) + "): " + e.what());
          continue;
        }
        for (int k : ks) {
          RunRecord rec;
          rec.dataset = dataset_label(path);
          rec.dataset_n = n;
          rec.norm = norm;
          rec.method = rule_name(rule);
          rec.k = k;
          rec.report = evaluate_criteria(config.criteria, cut(dendro, k), src);
          rec.report.dataset = rec.dataset;
          rec.report.norm = norm;
          rec.report.method = rec.method;
          result.records.push_back(std::move(rec));
        }
      }
    }
  }
  return result;
}

namespace {

struct CellKey {
  std::string dataset;
  int norm;
  int k;
  auto operator<=>(const CellKey&) const = default;
};

}  // namespace

RatioTable ratio_table(const std::vector<RunRecord>& records) {
  RatioTable table;
  table.methods = {"average", "complete", "single"};
  // Criteria in the order they appear across the records.
  for (const auto& rec : records)
    for (const auto& [name, value] : rec.report.values)
      if (std::find(table.criteria.begin(), table.criteria.end(), name) ==
          table.criteria.end())
        table.criteria.push_back(name);
  table.ksets = {"small", "medium", "large"};
  table.cells.assign(
      table.criteria.size(),
      std::vector<std::vector<RatioCell>>(
          table.ksets.size(), std::vector<RatioCell>(table.methods.size())));

  // Regroup: per (dataset, norm, k) the three method values per criterion.
  std::map<CellKey, std::array<std::map<std::string, double>, 3>> grouped;
  std::map<CellKey, int> cell_n;
  for (const auto& rec : records) {
    const auto mi = std::find(table.methods.begin(), table.methods.end(),
                              rec.method);
    if (mi == table.methods.end()) continue;
    const CellKey key{rec.dataset, static_cast<int>(rec.norm), rec.k};
    auto& slot = grouped[key][mi - table.methods.begin()];
    for (const auto& [name, value] : rec.report.values) slot[name] = value;
    cell_n[key] = rec.dataset_n;
  }

  struct Acc {
    KahanSum sum;
    int included = 0;
    int excluded = 0;
  };
  std::vector<std::vector<std::vector<Acc>>> acc(
      table.criteria.size(),
      std::vector<std::vector<Acc>>(table.ksets.size(),
                                    std::vector<Acc>(table.methods.size())));

  for (const auto& [key, methods] : grouped) {
    const auto sets = k_sets(cell_n.at(key));
    std::vector<int> kset_idx;
    for (std::size_t s = 0; s < table.ksets.size(); ++s)
      for (const auto& set : sets)
        if (set.name == table.ksets[s] && set.valid &&
            std::find(set.ks.begin(), set.ks.end(), key.k) != set.ks.end())
          kset_idx.push_back(static_cast<int>(s));
    if (kset_idx.empty()) continue;

    for (std::size_t ci = 0; ci < table.criteria.size(); ++ci) {
      const std::string& crit = table.criteria[ci];
      std::array<double, 3> v{};
      bool complete = true;
      for (int mi = 0; mi < 3; ++mi) {
        const auto it = methods[mi].find(crit);
        if (it == methods[mi].end()) {
          complete = false;
          break;
        }
        v[mi] = it->second;
      }
      bool usable = complete;
      if (complete)
        for (double x : v)
          if (!std::isfinite(x)) usable = false;
      double best = 0.0;
      if (usable) {
        best = criterion_is_maximized(crit)
                   ? std::max({v[0], v[1], v[2]})
                   : std::min({v[0], v[1], v[2]});
        if (best == 0.0) usable = false;
      }
      for (int s : kset_idx)
        for (int mi = 0; mi < 3; ++mi) {
          Acc& a = acc[ci][s][mi];
          if (!usable) {
            ++a.excluded;
            continue;
          }
          const double ratio = v[mi] == best
                                   ? 1.0
                                   : std::min(v[mi], best) / std::max(v[mi], best);
          a.sum.add(ratio);
          ++a.included;
        }
    }
  }

  for (std::size_t ci = 0; ci < table.criteria.size(); ++ci)
    for (std::size_t s = 0; s < table.ksets.size(); ++s)
      for (std::size_t mi = 0; mi < table.methods.size(); ++mi) {
        const Acc& a = acc[ci][s][mi];
        RatioCell& cell = table.cells[ci][s][mi];
        cell.included = a.included;
        cell.excluded = a.excluded;
        cell.mean = a.included ? a.sum.value() / a.included : 0.0;
      }
  return table;
}

std::string ratio_table_csv(const RatioTable& table) {
  std::ostringstream out;
  out.precision(17);
  out << "criterion,kset,method,mean_ratio,included,excluded\n";
  for (std::size_t ci = 0; ci < table.criteria.size(); ++ci)
    for (std::size_t s = 0; s < table.ksets.size(); ++s)
      for (std::size_t mi = 0; mi < table.methods.size(); ++mi) {
        const RatioCell& cell = table.cells[ci][s][mi];
        out << table.criteria[ci] << ',' << table.ksets[s] << ','
            << table.methods[mi] << ',' << cell.mean << ',' << cell.included
            << ',' << cell.excluded << "\n";
      }
  return out.str();
}

std::string ratio_table_markdown(const RatioTable& table) {
  std::ostringstream out;
  out << "| criterion |";
  for (const auto& kset : table.ksets)
    out << " " << kset << " A | " << kset << " C | " << kset << " S |";
  out << "\n|---|";
  for (std::size_t s = 0; s < table.ksets.size(); ++s) out << "---|---|---|";
  out << "\n";
  out.setf(std::ios::fixed);
  out.precision(2);
  for (std::size_t ci = 0; ci < table.criteria.size(); ++ci) {
    out << "| " << table.criteria[ci] << " |";
    for (std::size_t s = 0; s < table.ksets.size(); ++s)
      for (std::size_t mi = 0; mi < table.methods.size(); ++mi) {
        const RatioCell& cell = table.cells[ci][s][mi];
        if (cell.included)
          out << " " << cell.mean << " |";
        else
          out << " - |";
      }
    out << "\n";
  }
  return out.str();
}

MatrixResult run_bench(const BenchConfig& config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  MatrixResult result = run_matrix(config);

  {
    std::ofstream out(fs::path(out_dir) / "records.csv");
    if (!out) throw std::runtime_error("cannot write records.csv");
    out << report_csv_header() << "\n";
    for (const auto& rec : result.records) out << report_csv_rows(rec.report);
  }
  {
    std::ofstream out(fs::path(out_dir) / "datasets.txt");
    for (const auto& line : result.loaded) out << line << "\n";
  }
  if (!result.errors.empty()) {
    std::ofstream out(fs::path(out_dir) / "errors.txt");
    for (const auto& e : result.errors) out << e << "\n";
  }
  for (Norm norm : config.norms) {
    std::vector<RunRecord> filtered;
    for (const auto& rec : result.records)
      if (rec.norm == norm) filtered.push_back(rec);
    const RatioTable table = ratio_table(filtered);
    const std::string base = "ratio_table_" + norm_name(norm);
    {
      std::ofstream out(fs::path(out_dir) / (base + ".csv"));
      out << ratio_table_csv(table);
    }
    {
      std::ofstream out(fs::path(out_dir) / (base + ".md"));
      out << ratio_table_markdown(table);
    }
  }
  return result;
}

}  // namespace linklab
