// Python bindings for the core operations: distance sources, the two
// engines, cutting, criteria, the brute-force oracle, and the instance
// generators.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "linklab/bench.hpp"
#include "linklab/criteria.hpp"
#include "linklab/instances.hpp"
#include "linklab/linkage.hpp"
#include "linklab/oracle.hpp"

namespace py = pybind11;
using namespace linklab;

namespace {

DistanceSource source_from_features(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
    const std::string& norm) {
  if (arr.ndim() != 2) throw std::invalid_argument("features must be 2-D");
  const int n = static_cast<int>(arr.shape(0));
  const int d = static_cast<int>(arr.shape(1));
  std::vector<double> data(arr.data(), arr.data() + arr.size());
  return DistanceSource::from_features(std::move(data), n, d, parse_norm(norm));
}

DistanceSource source_from_condensed(
    int n,
    const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  std::vector<double> data(arr.data(), arr.data() + arr.size());
  return DistanceSource::from_condensed(n, std::move(data));
}

Clustering clustering_from_py(const std::vector<int>& labels) {
  return clustering_from_labels(labels);
}

Engine parse_engine(const std::string& name) {
  if (name == "naive") return Engine::NAIVE;
  if (name == "nnchain") return Engine::NNCHAIN;
  throw std::invalid_argument("unknown engine: " + name);
}

}  // namespace

PYBIND11_MODULE(_linklab, m) {
  m.doc() = "hierarchical linkage laboratory";

  py::class_<DistanceSource>(m, "DistanceSource")
      .def_static("from_features", &source_from_features, py::arg("features"),
                  py::arg("norm") = "l2")
      .def_static("from_condensed", &source_from_condensed, py::arg("n"),
                  py::arg("condensed"))
      .def_property_readonly("n", &DistanceSource::size)
      .def_property_readonly("feature_backed", &DistanceSource::feature_backed)
      .def("dist", &DistanceSource::dist)
      .def("condensed", &DistanceSource::to_condensed);

  py::class_<Merge>(m, "Merge")
      .def_readonly("left_id", &Merge::left_id)
      .def_readonly("right_id", &Merge::right_id)
      .def_readonly("height", &Merge::height)
      .def_readonly("size", &Merge::size);

  py::class_<Dendrogram>(m, "Dendrogram")
      .def_readonly("n", &Dendrogram::n)
      .def_readonly("merges", &Dendrogram::merges)
      .def("to_csv", &dendrogram_to_csv);

  py::class_<Clustering>(m, "Clustering")
      .def_readonly("n", &Clustering::n)
      .def_readonly("k", &Clustering::k)
      .def_readonly("labels", &Clustering::labels)
      .def("__eq__",
           [](const Clustering& a, const Clustering& b) { return a == b; });

  m.def("clustering", &clustering_from_py, py::arg("labels"),
        "canonicalize a label vector into a Clustering");

  m.def(
      "build",
      [](const DistanceSource& src, const std::string& rule,
         const std::string& engine, const std::string& tiebreak) {
        const TieBreak tb = tiebreak == "first_found" ? TieBreak::FIRST_FOUND
                                                      : TieBreak::LEX_MIN_ID;
        return build(src, parse_rule(rule), parse_engine(engine), tb);
      },
      py::arg("source"), py::arg("rule") = "average",
      py::arg("engine") = "nnchain", py::arg("tiebreak") = "lex_min_id");

  m.def("cut", &cut, py::arg("dendrogram"), py::arg("k"));
  m.def("random_hierarchy", &random_hierarchy, py::arg("n"), py::arg("seed"));

  m.def("harmonic", &harmonic);
  m.def("avg_within", &avg_within);
  m.def("avg_between", &avg_between);
  m.def("diam", &diam);
  m.def(
      "check_metricity",
      [](const DistanceSource& src, double tol) {
        std::vector<std::tuple<int, int, int, double>> out;
        for (const auto& v : check_metricity(src, tol))
          out.emplace_back(v.i, v.j, v.k, v.slack);
        return out;
      },
      py::arg("source"), py::arg("tol") = 1e-9);

  m.def("sep_av", &sep_av);
  m.def("sep_min", &sep_min);
  m.def("max_diam", &max_diam);
  m.def("max_avg", &max_avg);
  m.def("avg_diam", &avg_diam);
  m.def("cs_ratio_av", &cs_ratio_av);
  m.def("cs_ratio_dm", &cs_ratio_dm);
  m.def("ckmm_cost", &ckmm_cost);

  py::class_<OptReport>(m, "OptReport")
      .def_readonly("k", &OptReport::k)
      .def_readonly("opt_sep", &OptReport::opt_sep)
      .def_readonly("opt_dm", &OptReport::opt_dm)
      .def_readonly("opt_av", &OptReport::opt_av)
      .def_readonly("opt_cs_dm", &OptReport::opt_cs_dm)
      .def_readonly("witness_sep", &OptReport::witness_sep)
      .def_readonly("witness_dm", &OptReport::witness_dm)
      .def_readonly("witness_av", &OptReport::witness_av)
      .def_readonly("witness_cs_dm", &OptReport::witness_cs_dm);

  m.def("compute_opts", &compute_opts, py::arg("source"), py::arg("k"));
  m.def("max_avg_subset", &max_avg_subset, py::arg("source"), py::arg("k"));
  m.def(
      "verify_bounds",
      [](const DistanceSource& src, int k) {
        const auto report = verify_bounds(src, k);
        py::list checks;
        for (const auto& c : report.checks) {
          py::dict item;
          item["name"] = c.name;
          item["lhs"] = c.lhs;
          item["rhs"] = c.rhs;
          item["margin"] = c.margin;
          item["pass"] = c.pass;
          item["skipped"] = c.skipped;
          checks.append(item);
        }
        py::dict out;
        out["k"] = report.k;
        out["metric"] = report.metric;
        out["all_pass"] = report.all_pass();
        out["checks"] = checks;
        return out;
      },
      py::arg("source"), py::arg("k"));

  py::class_<InstanceBundle>(m, "InstanceBundle")
      .def_readonly("name", &InstanceBundle::name)
      .def_readonly("params", &InstanceBundle::params)
      .def_readonly("source", &InstanceBundle::source)
      .def_readonly("declared_metric", &InstanceBundle::declared_metric)
      .def_readonly("references", &InstanceBundle::references)
      .def_readonly("facts", &InstanceBundle::facts)
      .def("verify",
           [](const InstanceBundle& b) {
             py::list out;
             for (const auto& c : verify_bundle(b)) {
               py::dict item;
               item["name"] = c.name;
               item["pass"] = c.pass;
               item["lhs"] = c.lhs;
               item["target"] = c.target;
               out.append(item);
             }
             return out;
           })
      .def("write", &write_bundle);

  m.def("gen_ics", &gen_ics, py::arg("t"), py::arg("eps"));
  m.def("gen_ics_augmented", &gen_ics_augmented, py::arg("k"), py::arg("eps"));
  m.def("gen_sep", &gen_sep, py::arg("k"), py::arg("d_cross"), py::arg("eps"));
  m.def("gen_sl_line", &gen_sl_line, py::arg("n"), py::arg("eps"));
  m.def("gen_cl_l1", &gen_cl_l1, py::arg("m"));
  m.def("gen_random_bad", &gen_random_bad, py::arg("n"), py::arg("d_far"));
  m.def("gen_unbounded_av", &gen_unbounded_av, py::arg("n"), py::arg("t_scale"),
        py::arg("eps"));
  m.def("gen_nonmetric", &gen_nonmetric, py::arg("n"));
  m.def("gen_sl_sep", &gen_sl_sep, py::arg("n"), py::arg("eps"));
}
