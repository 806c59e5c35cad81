#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "skytrav/engine.hpp"
#include "skytrav/io.hpp"
#include "skytrav/oracle.hpp"
#include "skytrav/quantization.hpp"

namespace py = pybind11;
using namespace skytrav;

namespace {

py::dict solution_dict(const Instance& inst, const SolutionRecord& s) {
  py::dict d;
  d["node"] = inst.node_names[s.sig.node];
  d["context"] = inst.contexts.names[s.sig.context];
  py::list cost;
  for (const Rational& v : inst.cost_values(s.cost)) cost.append(v.str());
  d["cost"] = cost;
  d["step"] = s.discovered_at_step;
  py::list edges;
  for (EdgeId e : s.path.edges) edges.append(e);
  d["path"] = edges;
  return d;
}

py::dict run_dict(const Instance& inst, const SearchResult& result) {
  py::dict d;
  d["termination"] = termination_str(result.termination);
  py::list solutions;
  for (const SolutionRecord& s : result.solutions) solutions.append(solution_dict(inst, s));
  d["solutions"] = solutions;
  d["steps"] = result.trace.size();
  d["trace_csv"] = trace_to_string(result, inst, TraceFormat::Csv);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-criteria graph traversal driven by Pareto skyline geometry";

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("name", [](const Instance& i) { return i.name; })
      .def_property_readonly("node_count", [](const Instance& i) { return i.node_count(); })
      .def_property_readonly("edge_count", [](const Instance& i) { return i.edges.size(); })
      .def_property_readonly("dim_count", [](const Instance& i) { return i.dim_count(); })
      .def("validate",
           [](const Instance& i) {
             py::list out;
             for (const ValidationIssue& issue : validate_instance(i).issues)
               out.append(py::make_tuple(
                   issue.severity == ValidationIssue::Severity::Error ? "error" : "warning",
                   issue.message));
             return out;
           })
      .def("delta_min",
           [](const Instance& i) {
             py::list out;
             for (const Rational& v : delta_min_vector(i)) out.append(v.str());
             return out;
           })
      .def("max_step_count", [](const Instance& i) { return max_step_count(i); })
      .def("bin_count", [](const Instance& i) { return Quantization::rank(i).bin_count(); })
      .def("to_json", [](const Instance& i) { return emit_instance(i); });

  m.def("parse_instance", [](const std::string& text) { return parse_instance(text); },
        py::arg("text"), "Parse and validate an instance document");

  m.def("load_instance", [](const std::string& path) { return load_instance_file(path); },
        py::arg("path"), "Load and validate an instance file");

  m.def(
      "generate_instance",
      [](std::uint64_t seed, std::uint32_t nodes, std::uint32_t dims, std::uint32_t grid_levels,
         std::uint32_t attributes) {
        GenParams params;
        params.nodes = nodes;
        params.dims = dims;
        params.grid_levels = grid_levels;
        params.attributes = attributes;
        return generate_random_instance(seed, params);
      },
      py::arg("seed"), py::arg("nodes") = 7, py::arg("dims") = 3, py::arg("grid_levels") = 5,
      py::arg("attributes") = 2, "Deterministic random instance with a feasible path");

  m.def(
      "run",
      [](const Instance& inst, std::uint64_t cert_period, std::int64_t step_limit,
         bool annotate_floor) {
        RunConfig config;
        config.certificate_period = cert_period;
        if (step_limit >= 0) config.step_limit = static_cast<std::uint64_t>(step_limit);
        SearchResult result = run(inst, config);
        if (annotate_floor) {
          const DescentReport descent = verify_descent(inst, result, config);
          annotate_trace_with_floor(result, descent);
        }
        return run_dict(inst, result);
      },
      py::arg("instance"), py::arg("cert_period") = 1, py::arg("step_limit") = -1,
      py::arg("annotate_floor") = false, "Run the search and return the result");

  m.def(
      "enumerate_paths",
      [](const Instance& inst) {
        py::list out;
        for (const FeasiblePath& fp : enumerate_feasible(inst).feasible_paths) {
          py::dict d;
          d["node"] = inst.node_names[fp.sig.node];
          d["context"] = inst.contexts.names[fp.sig.context];
          py::list cost;
          for (const Rational& v : inst.cost_values(fp.cost)) cost.append(v.str());
          d["cost"] = cost;
          py::list edges;
          for (EdgeId e : fp.path.edges) edges.append(e);
          d["path"] = edges;
          out.append(d);
        }
        return out;
      },
      py::arg("instance"), "Exhaustively enumerate feasible paths (desk scale)");

  m.def(
      "verify",
      [](const Instance& inst) {
        const SearchResult result = run(inst, {});
        const OracleEnumeration oracle = enumerate_feasible(inst);
        const CoverageVerifyReport coverage = verify_dominance_coverage(result, oracle, inst);
        const DescentReport descent = verify_descent(inst, result);
        const GeometryReport geometry = verify_layer_geometry(inst);
        const ResidualBudgetReport residual = verify_residual_budget(inst);
        const BoundReport bound = runtime_bound_check(result, inst, Quantization::rank(inst));
        const SearchResult rerun = run(inst, {});
        const bool deterministic =
            trace_to_string(result, inst) == trace_to_string(rerun, inst);

        py::dict d;
        d["termination"] = termination_str(result.termination);
        d["solutions"] = result.solutions.size();
        d["coverage_ok"] = coverage.ok();
        d["coverage_applicable"] = coverage.applicable;
        d["descent_ok"] = descent.ok;
        d["geometry_ok"] = geometry.ok;
        d["residual_ok"] = residual.ok;
        d["bound_ok"] = bound.within;
        d["determinism_ok"] = deterministic;
        d["all_ok"] = coverage.ok() && descent.ok && geometry.ok && residual.ok &&
                      bound.within && deterministic;
        return d;
      },
      py::arg("instance"), "Run the engine plus every oracle check");
}
