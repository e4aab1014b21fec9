// Command-line front end: instance generation, hierarchy building,
// criteria evaluation, brute-force bound verification, and the benchmark
// pipeline.

#include <CLI11.hpp>

#include <iostream>

#include "linklab/bench.hpp"
#include "linklab/criteria.hpp"
#include "linklab/instances.hpp"
#include "linklab/linkage.hpp"
#include "linklab/oracle.hpp"

namespace {

linklab::DistanceSource load_source(const std::string& path, bool matrix,
                                    const std::string& norm) {
  if (matrix) return linklab::load_condensed_matrix(path);
  return linklab::load_features_csv(path, linklab::parse_norm(norm));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical linkage laboratory"};
  app.require_subcommand(1);

  // --- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate an instance bundle");
  std::string gen_name;
  std::string gen_out = ".";
  int opt_t = 3, opt_k = 5, opt_n = 16, opt_m = 2;
  double opt_eps = 1e-6, opt_d = 100.0, opt_T = 10.0;
  bool gen_check = false;
  gen->add_option("name", gen_name,
                  "ics | ics-aug | sep | sl-line | cl-l1 | random-bad | "
                  "unbounded-av | nonmetric | sl-sep")
      ->required();
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--t", opt_t, "group count for ics");
  gen->add_option("--k", opt_k, "k for ics-aug / sep");
  gen->add_option("--n", opt_n, "point count");
  gen->add_option("--m", opt_m, "size exponent for cl-l1");
  gen->add_option("--eps", opt_eps, "perturbation");
  gen->add_option("--d", opt_d, "cross / far distance");
  gen->add_option("--T", opt_T, "scale for unbounded-av");
  gen->add_flag("--check", gen_check, "verify the bundle after writing");

  // --- link --------------------------------------------------------------
  auto* link = app.add_subcommand("link", "build a hierarchy and write it");
  std::string link_input, link_out = "dendrogram.csv", link_norm = "l2";
  std::string link_rule = "average", link_engine = "nnchain";
  std::string link_tb = "lex_min_id";
  bool link_matrix = false;
  link->add_option("--input", link_input, "feature csv or condensed matrix")
      ->required();
  link->add_flag("--matrix", link_matrix, "input is a condensed matrix file");
  link->add_option("--norm", link_norm, "l1 | l2 | linf");
  link->add_option("--rule", link_rule, "average | single | complete");
  link->add_option("--engine", link_engine, "naive | nnchain");
  link->add_option("--tiebreak", link_tb, "lex_min_id | first_found");
  link->add_option("--out", link_out, "output csv");

  // --- eval --------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "evaluate criteria for a cut");
  std::string eval_input, eval_dendro, eval_norm = "l2", eval_dataset = "data";
  std::vector<std::string> eval_criteria;
  int eval_k = 2;
  bool eval_matrix = false;
  eval->add_option("--input", eval_input, "feature csv or condensed matrix")
      ->required();
  eval->add_flag("--matrix", eval_matrix, "input is a condensed matrix file");
  eval->add_option("--norm", eval_norm, "l1 | l2 | linf");
  eval->add_option("--dendrogram", eval_dendro, "dendrogram csv")->required();
  eval->add_option("--k", eval_k, "number of clusters")->required();
  eval->add_option("--criteria", eval_criteria, "criteria (default: all)");
  eval->add_option("--dataset", eval_dataset, "dataset label for the rows");

  // --- oracle ------------------------------------------------------------
  auto* oracle = app.add_subcommand("oracle", "brute-force ground truth");
  auto* verify = oracle->add_subcommand("verify", "check bounds at one k");
  std::string or_input, or_norm = "l2";
  int or_k = 2;
  bool or_matrix = false;
  verify->add_option("--input", or_input, "feature csv or condensed matrix")
      ->required();
  verify->add_flag("--matrix", or_matrix, "input is a condensed matrix file");
  verify->add_option("--norm", or_norm, "l1 | l2 | linf");
  verify->add_option("--k", or_k, "number of clusters")->required();

  // --- bench -------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "run the experiment pipeline");
  std::string bench_config, bench_out = "bench_out";
  bench->add_option("--config", bench_config, "config file")->required();
  bench->add_option("--out", bench_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      linklab::InstanceBundle bundle;
      if (gen_name == "ics")
        bundle = linklab::gen_ics(opt_t, opt_eps);
      else if (gen_name == "ics-aug")
        bundle = linklab::gen_ics_augmented(opt_k, opt_eps);
      else if (gen_name == "sep")
        bundle = linklab::gen_sep(opt_k, opt_d, opt_eps);
      else if (gen_name == "sl-line")
        bundle = linklab::gen_sl_line(opt_n, opt_eps);
      else if (gen_name == "cl-l1")
        bundle = linklab::gen_cl_l1(opt_m);
      else if (gen_name == "random-bad")
        bundle = linklab::gen_random_bad(opt_n, opt_d);
      else if (gen_name == "unbounded-av")
        bundle = linklab::gen_unbounded_av(opt_n, opt_T, opt_eps);
      else if (gen_name == "nonmetric")
        bundle = linklab::gen_nonmetric(opt_n);
      else if (gen_name == "sl-sep")
        bundle = linklab::gen_sl_sep(opt_n, opt_eps);
      else
        throw std::runtime_error("unknown generator " + gen_name);
      linklab::write_bundle(bundle, gen_out);
      std::cout << "wrote " << bundle.name << " (n=" << bundle.source.size()
                << ") to " << gen_out << "\n";
      if (gen_check) {
        const auto checks = linklab::verify_bundle(bundle);
        for (const auto& c : checks)
          std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
                    << (c.detail.empty() ? "" : " [" + c.detail + "]") << "\n";
        if (!linklab::all_pass(checks)) return 1;
      }
    } else if (*link) {
      const auto src = load_source(link_input, link_matrix, link_norm);
      linklab::TieBreak tb = link_tb == "first_found"
                                 ? linklab::TieBreak::FIRST_FOUND
                                 : linklab::TieBreak::LEX_MIN_ID;
      const auto engine = link_engine == "naive" ? linklab::Engine::NAIVE
                                                 : linklab::Engine::NNCHAIN;
      const auto d =
          linklab::build(src, linklab::parse_rule(link_rule), engine, tb);
      linklab::write_dendrogram_csv(d, link_out);
      std::cout << "wrote " << link_out << " (n=" << d.n << ")\n";
    } else if (*eval) {
      const auto src = load_source(eval_input, eval_matrix, eval_norm);
      const auto d = linklab::load_dendrogram_csv(eval_dendro);
      const auto c = linklab::cut(d, eval_k);
      auto names = eval_criteria.empty() ? linklab::criterion_names()
                                         : eval_criteria;
      auto report = linklab::evaluate_criteria(names, c, src);
      report.dataset = eval_dataset;
      report.norm = src.feature_backed() ? src.norm() : linklab::Norm::L2;
      report.method = "external";
      std::cout << linklab::report_csv_header() << "\n"
                << linklab::report_csv_rows(report);
    } else if (*verify) {
      const auto src = load_source(or_input, or_matrix, or_norm);
      const auto report = linklab::verify_bounds(src, or_k);
      std::cout << format_bound_report(report);
      if (!report.all_pass()) return 1;
    } else if (*bench) {
      const auto cfg = linklab::parse_bench_config(bench_config);
      const auto result = linklab::run_bench(cfg, bench_out);
      for (const auto& line : result.loaded) std::cout << line << "\n";
      for (const auto& line : result.errors)
        std::cerr << "skipped " << line << "\n";
      std::cout << "wrote results to " << bench_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
