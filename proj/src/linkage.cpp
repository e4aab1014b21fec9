#include "linklab/linkage.hpp"

#include "linklab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace linklab {

std::string rule_name(LinkageRule rule) {
  switch (rule) {
    case LinkageRule::AVERAGE:
      return "average";
    case LinkageRule::SINGLE:
      return "single";
    case LinkageRule::COMPLETE:
      return "complete";
  }
  return "average";
}

LinkageRule parse_rule(const std::string& name) {
  if (name == "average") return LinkageRule::AVERAGE;
  if (name == "single") return LinkageRule::SINGLE;
  if (name == "complete") return LinkageRule::COMPLETE;
  throw std::invalid_argument("unknown linkage rule: " + name);
}

void validate(const Dendrogram& d) {
  if (d.n < 1) throw std::invalid_argument("dendrogram must have n >= 1");
  if (static_cast<int>(d.merges.size()) != d.n - 1)
    throw std::invalid_argument("dendrogram must record n-1 merges");
  const int total = 2 * d.n - 1;
  std::vector<char> used(total, 0);
  std::vector<int> size(total, 1);
  for (int t = 0; t < d.n - 1; ++t) {
    const Merge& m = d.merges[t];
    const int created = d.n + t;
    if (m.left_id < 0 || m.right_id < 0 || m.left_id >= created ||
        m.right_id >= created || m.left_id == m.right_id)
      throw std::invalid_argument("merge " + std::to_string(t) + ": bad child ids");
    if (used[m.left_id] || used[m.right_id])
      throw std::invalid_argument("merge " + std::to_string(t) + ": child reused");
    used[m.left_id] = used[m.right_id] = 1;
    size[created] = size[m.left_id] + size[m.right_id];
    if (m.size != size[created])
      throw std::invalid_argument("merge " + std::to_string(t) + ": bad size");
  }
}

Clustering clustering_from_labels(const std::vector<int>& labels) {
  Clustering c;
  c.n = static_cast<int>(labels.size());
  if (c.n == 0) throw std::invalid_argument("empty clustering");
  std::vector<int> remap;
  c.labels.resize(c.n);
  for (int i = 0; i < c.n; ++i) {
    const int raw = labels[i];
    int found = -1;
    for (std::size_t r = 0; r < remap.size(); ++r)
      if (remap[r] == raw) {
        found = static_cast<int>(r);
        break;
      }
    if (found < 0) {
      found = static_cast<int>(remap.size());
      remap.push_back(raw);
    }
    c.labels[i] = found;
  }
  c.k = static_cast<int>(remap.size());
  return c;
}

std::vector<IndexSet> blocks(const Clustering& c) {
  std::vector<IndexSet> out(c.k);
  for (int i = 0; i < c.n; ++i) out[c.labels[i]].push_back(i);
  return out;
}

Clustering clustering_from_blocks(int n, const std::vector<IndexSet>& parts) {
  std::vector<int> labels(n, -1);
  for (std::size_t b = 0; b < parts.size(); ++b) {
    if (parts[b].empty()) throw std::invalid_argument("empty block");
    for (int i : parts[b]) {
      if (i < 0 || i >= n) throw std::out_of_range("block index out of range");
      if (labels[i] != -1) throw std::invalid_argument("blocks overlap");
      labels[i] = static_cast<int>(b);
    }
  }
  for (int i = 0; i < n; ++i)
    if (labels[i] == -1)
      throw std::invalid_argument("blocks do not cover every point");
  return clustering_from_labels(labels);
}

// --- greedy engine ------------------------------------------------------

namespace {

// Rule distance between two member lists, recomputed from the source.
double rule_dist(const DistanceSource& src, LinkageRule rule,
                 const std::vector<int>& a, const std::vector<int>& b) {
  switch (rule) {
    case LinkageRule::AVERAGE: {
      KahanSum s;
      for (int x : a)
        for (int y : b) s.add(src.dist(x, y));
      return s.value() / (static_cast<double>(a.size()) * b.size());
    }
    case LinkageRule::SINGLE: {
      double m = std::numeric_limits<double>::infinity();
      for (int x : a)
        for (int y : b) m = std::min(m, src.dist(x, y));
      return m;
    }
    case LinkageRule::COMPLETE: {
      double m = 0.0;
      for (int x : a)
        for (int y : b) m = std::max(m, src.dist(x, y));
      return m;
    }
  }
  return 0.0;
}

}  // namespace

Dendrogram build_naive(const DistanceSource& src, LinkageRule rule,
                       TieBreak tb) {
  const int n = src.size();
  if (n < 1) throw std::invalid_argument("empty source");
  Dendrogram d;
  d.n = n;
  if (n == 1) return d;

  const int total = 2 * n - 1;
  // Cluster state indexed by dendrogram id; pair distances in a rugged
  // lower triangle so pair (i, j), i < j, lives at pair[j][i].
  std::vector<std::vector<int>> members(total);
  std::vector<std::vector<double>> pair(total);
  std::vector<int> alive;
  alive.reserve(total);
  for (int i = 0; i < n; ++i) {
    members[i] = {i};
    alive.push_back(i);
    pair[i].resize(i);
    for (int j = 0; j < i; ++j) pair[i][j] = src.dist(j, i);
  }

  d.merges.reserve(n - 1);
  for (int t = 0; t < n - 1; ++t) {
    int best_a = -1, best_b = -1;  // best_a < best_b
    double best = std::numeric_limits<double>::infinity();
    if (tb == TieBreak::LEX_MIN_ID) {
      for (std::size_t ai = 0; ai < alive.size(); ++ai)
        for (std::size_t bi = ai + 1; bi < alive.size(); ++bi) {
          const int a = alive[ai], b = alive[bi];
          const double v = pair[b][a];
          if (v < best) {
            best = v;
            best_a = a;
            best_b = b;
          }
        }
    } else {  // FIRST_FOUND: colexicographic scan
      for (std::size_t bi = 1; bi < alive.size(); ++bi)
        for (std::size_t ai = 0; ai < bi; ++ai) {
          const int a = alive[ai], b = alive[bi];
          const double v = pair[b][a];
          if (v < best) {
            best = v;
            best_a = a;
            best_b = b;
          }
        }
    }

    const int created = n + t;
    members[created].resize(members[best_a].size() + members[best_b].size());
    std::merge(members[best_a].begin(), members[best_a].end(),
               members[best_b].begin(), members[best_b].end(),
               members[created].begin());
    std::erase(alive, best_a);
    std::erase(alive, best_b);
    pair[created].resize(created);
    for (int other : alive)
      pair[created][other] =
          rule_dist(src, rule, members[other], members[created]);
    alive.push_back(created);
    d.merges.push_back({best_a, best_b, best,
                        static_cast<int>(members[created].size())});
    members[best_a].clear();
    members[best_a].shrink_to_fit();
    members[best_b].clear();
    members[best_b].shrink_to_fit();
  }
  return d;
}

// --- nearest-neighbor-chain engine --------------------------------------

namespace {

struct RawMerge {
  int a = 0;  // representative point indices at merge time
  int b = 0;
  double height = 0.0;
};

// Successor list over still-active representative indices.
struct ActiveList {
  explicit ActiveList(int n) : succ(n + 1), pred(n + 1), start(0) {
    for (int i = 0; i <= n; ++i) {
      succ[i] = i + 1;
      pred[i] = i - 1;
    }
  }
  void remove(int i) {
    if (i == start)
      start = succ[i];
    else
      succ[pred[i]] = succ[i];
    if (succ[i] < static_cast<int>(pred.size())) pred[succ[i]] = pred[i];
  }
  std::vector<int> succ, pred;
  int start;
};

}  // namespace

Dendrogram build_nnchain(const DistanceSource& src, LinkageRule rule) {
  const int n = src.size();
  if (n < 1) throw std::invalid_argument("empty source");
  Dendrogram d;
  d.n = n;
  if (n == 1) return d;

  std::vector<double> D = src.to_condensed();
  auto dref = [&](int i, int j) -> double& {
    return D[DistanceSource::condensed_index(n, i, j)];
  };
  std::vector<int> sz(n, 1);
  ActiveList act(n);
  std::vector<int> chain;
  chain.reserve(n);
  std::vector<RawMerge> raw;
  raw.reserve(n - 1);

  for (int step = 0; step < n - 1; ++step) {
    if (chain.size() <= 1) {
      chain.clear();
      chain.push_back(act.start);
    }
    int a, b;
    for (;;) {
      a = chain.back();
      // Nearest active neighbor of a; prefer the chain predecessor on ties
      // so mutual pairs terminate the walk.
      b = -1;
      double best = std::numeric_limits<double>::infinity();
      if (chain.size() > 1) {
        b = chain[chain.size() - 2];
        best = dref(a, b);
      }
      for (int c = act.start; c < n; c = act.succ[c]) {
        if (c == a) continue;
        const double v = dref(a, c);
        if (v < best) {
          best = v;
          b = c;
        }
      }
      if (chain.size() > 1 && b == chain[chain.size() - 2]) break;
      chain.push_back(b);
    }
    chain.pop_back();
    chain.pop_back();

    const double h = dref(a, b);
    const int sa = sz[a], sb = sz[b];
    // Fold cluster a into slot b.
    for (int c = act.start; c < n; c = act.succ[c]) {
      if (c == a || c == b) continue;
      double& dcb = dref(c, b);
      const double dca = dref(c, a);
      switch (rule) {
        case LinkageRule::AVERAGE:
          dcb = (static_cast<double>(sa) * dca + static_cast<double>(sb) * dcb) /
                (static_cast<double>(sa) + sb);
          break;
        case LinkageRule::SINGLE:
          dcb = std::min(dca, dcb);
          break;
        case LinkageRule::COMPLETE:
          dcb = std::max(dca, dcb);
          break;
      }
    }
    sz[b] = sa + sb;
    act.remove(a);
    raw.push_back({a, b, h});
  }

  // Order merges by height (stable for ties), then relabel children with
  // union-find so ids follow the sorted order.
  std::vector<int> idx(raw.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) {
    return raw[x].height < raw[y].height;
  });
  std::vector<int> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<int> node_size(2 * n - 1, 1);
  d.merges.reserve(n - 1);
  for (int t = 0; t < n - 1; ++t) {
    const RawMerge& m = raw[idx[t]];
    int ra = find(m.a), rb = find(m.b);
    if (ra > rb) std::swap(ra, rb);
    const int created = n + t;
    parent[ra] = parent[rb] = created;
    node_size[created] = node_size[ra] + node_size[rb];
    d.merges.push_back({ra, rb, m.height, node_size[created]});
  }
  return d;
}

Clustering cut(const Dendrogram& d, int k) {
  if (k < 1 || k > d.n)
    throw std::out_of_range("cut requires 1 <= k <= n");
  std::vector<int> parent(2 * d.n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  for (int t = 0; t < d.n - k; ++t) {
    parent[d.merges[t].left_id] = d.n + t;
    parent[d.merges[t].right_id] = d.n + t;
  }
  std::vector<int> labels(d.n);
  for (int i = 0; i < d.n; ++i) {
    int r = i;
    while (parent[r] != r) r = parent[r];
    int x = i;  // path compression
    while (parent[x] != r) {
      const int next = parent[x];
      parent[x] = r;
      x = next;
    }
    labels[i] = r;
  }
  return clustering_from_labels(labels);
}

// --- random hierarchy ----------------------------------------------------

TracedHierarchy random_hierarchy_traced(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  TracedHierarchy out;
  out.dendrogram.n = n;
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), 0);
  SplitMix64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(i) + 1));
    std::swap(out.order[i], out.order[j]);
  }
  if (n == 1) return out;

  // Clusters are always contiguous permutation slots, so one bit per inner
  // position records whether a split already happened there. split_at[s] is
  // the position of the s-th successful split (positions are 1..n-1, a
  // boundary between slots j-1 and j).
  std::vector<char> boundary(n, 0);
  std::vector<int> split_at;
  split_at.reserve(n - 1);
  while (static_cast<int>(split_at.size()) < n - 1) {
    const int j = 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n) - 1));
    if (!boundary[j]) {
      boundary[j] = 1;
      split_at.push_back(j);
    }
  }

  // Undo the splits in reverse order; undoing split s is merge t = n-1-s.
  std::vector<int> parent(n), node_id(n), node_size(n, 1);
  std::iota(parent.begin(), parent.end(), 0);
  for (int p = 0; p < n; ++p) node_id[p] = out.order[p];
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  out.dendrogram.merges.reserve(n - 1);
  for (int t = 0; t < n - 1; ++t) {
    const int j = split_at[n - 2 - t];
    const int ra = find(j - 1);
    const int rb = find(j);
    int left = node_id[ra], right = node_id[rb];
    if (left > right) std::swap(left, right);
    const int created = n + t;
    parent[rb] = ra;
    node_id[ra] = created;
    node_size[ra] += node_size[rb];
    out.dendrogram.merges.push_back(
        {left, right, static_cast<double>(t), node_size[ra]});
  }
  return out;
}

Dendrogram random_hierarchy(int n, std::uint64_t seed) {
  return random_hierarchy_traced(n, seed).dendrogram;
}

// --- serialization -------------------------------------------------------

std::string dendrogram_to_csv(const Dendrogram& d) {
  std::ostringstream out;
  out.precision(17);
  out << "step,left_id,right_id,new_id,height,size\n";
  for (int t = 0; t < static_cast<int>(d.merges.size()); ++t) {
    const Merge& m = d.merges[t];
    out << t << ',' << m.left_id << ',' << m.right_id << ',' << d.n + t << ','
        << m.height << ',' << m.size << "\n";
  }
  return out.str();
}

Dendrogram dendrogram_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty dendrogram csv");
  Dendrogram d;
  std::vector<Merge> merges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Merge m;
    int step = 0, new_id = 0;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    if (!(row >> step >> m.left_id >> m.right_id >> new_id >> m.height >> m.size))
      throw std::runtime_error("bad dendrogram row: " + line);
    merges.push_back(m);
    d.n = new_id - step;  // new_id = n + step
  }
  if (merges.empty())
    throw std::runtime_error("dendrogram csv has no merges");
  d.merges = std::move(merges);
  validate(d);
  return d;
}

void write_dendrogram_csv(const Dendrogram& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dendrogram_to_csv(d);
}

Dendrogram load_dendrogram_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return dendrogram_from_csv(buf.str());
}

}  // namespace linklab
