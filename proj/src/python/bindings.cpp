// Copyright (C) 2026 picnet contributors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "picnet/harness.hpp"
#include "picnet/partition.hpp"
#include "picnet/transformer.hpp"
#include "picnet/w1net.hpp"

namespace py = pybind11;
using namespace picnet;
using measures::ContextQuery;
using measures::ContextWeights;
using measures::PICMeasure;
using measures::SignedDiscreteMeasure;
using netbuilder::CompiledNet;
using transformer::TransformerNet;

namespace {

PICMeasure make_measure(int C, const std::vector<Vec>& atoms, const std::vector<int>& weights_num) {
  return PICMeasure(atoms, ContextWeights(C, weights_num));
}

}  // namespace

PYBIND11_MODULE(_picnet, m) {
  m.doc() = "exact Wasserstein-1 networks over permutation-invariant contexts";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<CapacityError>(m, "CapacityError");

  py::class_<PICMeasure>(m, "PICMeasure")
      .def(py::init(&make_measure), py::arg("C"), py::arg("atoms"), py::arg("weights_num"))
      .def_property_readonly("C", &PICMeasure::C)
      .def_property_readonly("N", &PICMeasure::tokens)
      .def_property_readonly("d", [](const PICMeasure& x) { return x.d; })
      .def_property_readonly("atoms", [](const PICMeasure& x) { return x.atoms; })
      .def_property_readonly("weights_num",
                             [](const PICMeasure& x) { return x.weights.num; })
      .def("to_json", &PICMeasure::to_json)
      .def_static("from_json", &PICMeasure::from_json);

  py::class_<ContextQuery>(m, "ContextQuery")
      .def(py::init<PICMeasure, Vec>(), py::arg("context"), py::arg("query"))
      .def_property_readonly("context", [](const ContextQuery& p) { return p.context; })
      .def_property_readonly("query", [](const ContextQuery& p) { return p.query; });

  py::class_<CompiledNet>(m, "CompiledNet")
      .def("eval", &CompiledNet::eval)
      .def_property_readonly("input_dim", [](const CompiledNet& n) { return n.input_dim; })
      .def_property_readonly("output_dim", &CompiledNet::output_dim)
      .def_property_readonly("depth", &CompiledNet::depth)
      .def_property_readonly("width", &CompiledNet::width)
      .def_property_readonly("nnz", &CompiledNet::nonzero_params)
      .def_property_readonly("role", [](const CompiledNet& n) { return n.role; })
      .def("to_json", [](const CompiledNet& n) { return netbuilder::to_json(n); })
      .def_static("from_json", [](const std::string& s) { return netbuilder::from_json(s); });

  py::class_<TransformerNet>(m, "TransformerNet")
      .def("eval", [](const TransformerNet& n, const Vec& x) {
        return transformer::transformer_eval(n, x);
      })
      .def_property_readonly("tokens", [](const TransformerNet& n) { return n.tokens; })
      .def_property_readonly("depth", &TransformerNet::depth)
      .def_property_readonly("width", &TransformerNet::width)
      .def_property_readonly("max_heads", &TransformerNet::max_heads)
      .def_property_readonly("nnz", &TransformerNet::nonzero_params)
      .def("to_json", [](const TransformerNet& n) { return transformer::to_json(n); })
      .def_static("from_json",
                  [](const std::string& s) { return transformer::transformer_from_json(s); });

  // measures and oracles
  m.def("enumerate_weights", [](int C, int N) {
    std::vector<std::vector<int>> out;
    for (const auto& w : measures::enumerate_weights(C, N)) out.push_back(w.num);
    return out;
  });
  m.def("w1_oracle", &measures::w1_oracle);
  m.def("quotient_dist", &measures::quotient_dist);
  m.def("pair_metric", &measures::pair_metric);
  m.def("kr_norm", [](const std::vector<Vec>& atoms, const Vec& masses) {
    return measures::kr_norm(SignedDiscreteMeasure(atoms, masses));
  });

  // gadget compilers
  m.def("build_abs", &netbuilder::build_abs);
  m.def("build_l1_norm", &netbuilder::build_l1_norm);
  m.def("build_sq_l2_norm", &netbuilder::build_sq_l2_norm);
  m.def("build_mult", &netbuilder::build_mult);
  m.def("build_min", &netbuilder::build_min);
  m.def("build_inner_product", &netbuilder::build_inner_product);
  m.def("build_bump", &netbuilder::build_bump);
  m.def("build_threshold", &netbuilder::build_threshold);

  // W1 networks
  m.def("build_w1_uniform", &w1net::build_w1_uniform);
  m.def("build_w1_fixed_weights", [](int C, const std::vector<int>& w, const std::vector<int>& v,
                                     int d) {
    return w1net::build_w1_fixed_weights(ContextWeights(C, w), ContextWeights(C, v), d);
  });
  m.def("build_w1_contextual", &w1net::build_w1_contextual);
  m.def("enumerate_transport_vertices",
        [](int C, const std::vector<int>& w, const std::vector<int>& v) {
          std::vector<Vec> plans;
          for (const auto& tv :
               w1net::enumerate_transport_vertices(ContextWeights(C, w), ContextWeights(C, v)))
            plans.push_back(tv.plan());
          return plans;
        });
  m.def("pack_atoms", &w1net::pack_atoms);
  m.def("pack_contextual", &w1net::pack_contextual);

  // transformer conversion
  m.def("transformerify", &transformer::transformerify, py::arg("net"), py::arg("tokens"));

  // experiment pipeline
  m.def("generate_samples", [](const std::string& config_json) {
    return harness::generate_samples(harness::ExperimentConfig::from_json(config_json));
  });
  m.def("run_experiment", [](const std::string& config_json) {
    harness::Report rep;
    rep.rows.push_back(
        harness::run_experiment(harness::ExperimentConfig::from_json(config_json)));
    return harness::report_csv(rep);
  });
  m.def("cli", &harness::cli);
}
