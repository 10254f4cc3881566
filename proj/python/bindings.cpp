// Copyright 2026 The ulearn Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ulearn/errors.hpp"
#include "ulearn/harness.hpp"
#include "ulearn/online.hpp"
#include "ulearn/patterns.hpp"

namespace py = pybind11;
using namespace ulearn;

namespace {

ConceptClass FromRows(const std::vector<std::string>& rows) {
  if (rows.empty()) throw ConfigError("a class needs at least one row");
  return ConceptClass::FromStrings(rows);
}

std::shared_ptr<const GameSolver> SolverOf(const std::vector<std::string>& rows) {
  return std::make_shared<const GameSolver>(std::make_shared<const ConceptClass>(FromRows(rows)));
}

py::tuple CappedTuple(const Capped& c) { return py::make_tuple(c.value, c.at_least); }

std::vector<std::string> PatternStrings(const PatternSet& ps) {
  std::vector<std::string> out;
  for (const BitVector& b : ps) out.push_back(b.ToString());
  return out;
}

}  // namespace

PYBIND11_MODULE(_ulearn, m) {
  m.doc() = "Exact universal-learning computations on finite concept classes.";

  // Translators run newest first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
  py::register_exception<RealizabilityError>(m, "RealizabilityError", PyExc_ValueError);
  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_ValueError);

  m.def("littlestone_dimension",
        [](const std::vector<std::string>& rows, int cap) { return CappedTuple(littlestone_dimension(FromRows(rows), cap)); },
        py::arg("rows"), py::arg("cap") = 64, "(value, at_least) for a class given as bit-string rows.");
  m.def("vc_dimension",
        [](const std::vector<std::string>& rows, int cap) { return CappedTuple(vc_dimension(FromRows(rows), cap)); },
        py::arg("rows"), py::arg("cap") = 64);
  m.def("vcl_dimension",
        [](const std::vector<std::string>& rows, int cap) { return CappedTuple(vcl_dimension(FromRows(rows), cap)); },
        py::arg("rows"), py::arg("cap") = 8);
  m.def("project",
        [](const std::vector<std::string>& rows, const std::vector<Point>& points) {
          return PatternStrings(project(FromRows(rows), points));
        },
        py::arg("rows"), py::arg("points"), "Distinct patterns on an ordered tuple, sorted.");
  m.def("littlestone_tree",
        [](const std::vector<std::string>& rows, int depth) -> std::optional<std::vector<Point>> {
          auto t = find_littlestone_tree(FromRows(rows), depth);
          if (!t) return std::nullopt;
          return t->nodes;
        },
        py::arg("rows"), py::arg("depth"), "Node points in heap order, or None.");

  py::class_<OnlineLearner>(m, "OnlineLearner")
      .def(py::init([](const std::vector<std::string>& rows) { return OnlineLearner(SolverOf(rows)); }), py::arg("rows"))
      .def("predict", &OnlineLearner::predict, py::arg("x"))
      .def("observe", &OnlineLearner::observe, py::arg("x"), py::arg("y"), "Returns True on a mistake.")
      .def_property_readonly("mistakes", &OnlineLearner::mistakes)
      .def("labels", &OnlineLearner::labels);

  m.def("orient_max_out_degree",
        [](const std::vector<std::string>& patterns) {
          std::vector<BitVector> v;
          for (const auto& s : patterns) v.push_back(BitVector::FromString(s));
          if (v.empty()) throw ConfigError("no patterns");
          const std::size_t arity = v.front().size();
          return orient(OneInclusionGraph(PatternSet(arity, std::move(v)))).max_out_degree();
        },
        py::arg("patterns"));

  // JSON in, JSON out: the harness operations take the same specs as the CLI.
  m.def("analyze_json",
        [](const std::string& spec) { return to_json(trichotomy_report(Json::parse(spec))).dump(); },
        py::arg("spec"));
  m.def("curve_csv",
        [](const std::string& spec, std::size_t jobs) {
          const ExperimentSpec e = parse_experiment(Json::parse(spec));
          LearningCurve c;
          {
            py::gil_scoped_release release;
            c = run_experiment(e, jobs);
          }
          std::ostringstream os;
          write_curve_csv(os, c);
          return os.str();
        },
        py::arg("spec"), py::arg("jobs") = 1);
  m.def("fit_csv",
        [](const std::string& csv, const std::string& metric) {
          std::istringstream is(csv);
          if (metric != "mean" && metric != "nonzero") throw ConfigError("metric is mean or nonzero");
          return to_json(fit_rate(read_curve_csv(is), metric == "mean" ? Metric::kMean : Metric::kNonzero)).dump();
        },
        py::arg("csv"), py::arg("metric") = "mean");
}
