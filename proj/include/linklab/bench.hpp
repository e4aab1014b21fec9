#pragma once
// The experiment pipeline: dataset ingestion, k-set selection, the
// methods-by-norms run matrix, and ratio-vs-best aggregation.
//
// The matrix is deterministic given the config and tie policy; records are
// emitted in a fixed order so re-runs produce byte-identical output.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "linklab/criteria.hpp"
#include "linklab/instances.hpp"

namespace linklab {

struct KSet {
  std::string name;      // small | medium | large
  std::vector<int> ks;
  bool valid = true;
  std::string note;
};

/// small = {2..10}; medium = nine consecutive values centered on
/// round-half-up(sqrt(n)); large = {floor(n/i) : i = 2..10} deduplicated.
/// Sets that do not fit the dataset are flagged invalid but still returned.
std::array<KSet, 3> k_sets(int n);

/// Feature CSV reader for the pipeline (same format as the metric module).
DistanceSource load_dataset(const std::string& path, Norm norm);

struct RunRecord {
  std::string dataset;
  int dataset_n = 0;  // points after any subsampling
  Norm norm = Norm::L2;
  std::string method;
  int k = 0;
  CriteriaReport report;
};

struct BenchConfig {
  std::vector<std::string> datasets;
  std::vector<Norm> norms = {Norm::L2};
  std::vector<std::string> ksets = {"small"};
  std::vector<std::string> criteria = criterion_names();
  TieBreak tiebreak = TieBreak::LEX_MIN_ID;
  Engine engine = Engine::NNCHAIN;
  int subsample = 0;  // 0 disables subsampling
  std::uint64_t seed = 1;
};

/// Line-oriented config: "key value" with comma lists, '#' comments.
/// Keys: dataset (repeatable), norms, ksets, criteria, tiebreak, engine,
/// subsample, seed.
BenchConfig parse_bench_config(const std::string& path);

/// One dendrogram per (dataset, norm, method), cut at every requested k.
/// A dataset that fails to load is skipped (reported in `errors`) without
/// aborting the rest of the matrix.
struct MatrixResult {
  std::vector<RunRecord> records;
  std::vector<std::string> loaded;  // "path: n=..., d=..." per dataset
  std::vector<std::string> errors;
};

MatrixResult run_matrix(const BenchConfig& config);

struct RatioCell {
  double mean = 0.0;
  int included = 0;
  int excluded = 0;
};

/// Per (criterion, k-set, method): the average over (dataset, k) cells of
/// ratio(M) = min(v_M, best) / max(v_M, best), best being the max over
/// methods for sep criteria and the min otherwise. Cells with missing
/// methods, non-finite values, or a zero best are excluded and counted.
struct RatioTable {
  std::vector<std::string> criteria;
  std::vector<std::string> ksets;
  std::vector<std::string> methods;  // average, complete, single
  // cells[criterion][kset][method]
  std::vector<std::vector<std::vector<RatioCell>>> cells;

  const RatioCell& at(int criterion, int kset, int method) const {
    return cells[criterion][kset][method];
  }
};

/// Aggregates records of a single norm.
RatioTable ratio_table(const std::vector<RunRecord>& records);

std::string ratio_table_csv(const RatioTable& table);
std::string ratio_table_markdown(const RatioTable& table);

/// Full pipeline: run the matrix and write records.csv, datasets.txt, and
/// one ratio table (CSV and Markdown) per norm into out_dir.
MatrixResult run_bench(const BenchConfig& config, const std::string& out_dir);

}  // namespace linklab
