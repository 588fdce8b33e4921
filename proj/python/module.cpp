#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fmf/pipeline.hpp"

namespace py = pybind11;

namespace {

fmf::PipelineConfig make_config(const std::string& mode, bool constraints,
                                bool collapse, bool expand, bool bounds,
                                bool symmetry, bool definitions, bool splitting,
                                bool verify, bool keep_conjecture,
                                int split_max_vars, double time_limit,
                                std::uint64_t clause_cap, bool trace) {
  fmf::PipelineConfig c;
  c.mode = mode == "contour" ? fmf::EncodingMode::Contour
                             : fmf::EncodingMode::Pointwise;
  c.constraints = constraints;
  c.collapse_monotonic_sorts = collapse;
  c.expand_subsort_sorts = expand;
  c.bounds_detection = bounds;
  c.symmetry = symmetry;
  c.definitions = definitions;
  c.splitting = splitting;
  c.verify_models = verify;
  c.negate_conjectures = !keep_conjecture;
  c.split_max_vars = split_max_vars;
  c.time_limit_seconds = time_limit;
  c.clause_cap = clause_cap;
  c.trace = trace;
  return c;
}

py::dict result_to_dict(const fmf::PipelineResult& r) {
  py::dict d;
  switch (r.status) {
    case fmf::PipelineResult::Status::Satisfiable:
      d["status"] = "Satisfiable";
      break;
    case fmf::PipelineResult::Status::Unsatisfiable:
      d["status"] = "Unsatisfiable";
      break;
    case fmf::PipelineResult::Status::ResourceOut:
      d["status"] = "ResourceOut";
      break;
  }
  d["model"] = r.model_text;
  d["verified"] = r.verified;
  d["nodes_checked"] = r.search_stats.nodes_checked;
  d["nodes_ignored"] = r.search_stats.nodes_ignored;
  d["nodes_pruned"] = r.search_stats.nodes_pruned;
  d["trace"] = r.trace;
  return d;
}

py::dict solve_common(const std::string& input, bool is_path,
                      const std::string& mode, bool constraints, bool collapse,
                      bool expand, bool bounds, bool symmetry, bool definitions,
                      bool splitting, bool verify, bool keep_conjecture,
                      int split_max_vars, double time_limit,
                      std::uint64_t clause_cap, bool trace) {
  fmf::PipelineConfig c = make_config(
      mode, constraints, collapse, expand, bounds, symmetry, definitions,
      splitting, verify, keep_conjecture, split_max_vars, time_limit,
      clause_cap, trace);
  fmf::PipelineResult r =
      is_path ? fmf::run_file(input, c) : fmf::run_text(input, c);
  return result_to_dict(r);
}

}  // namespace

PYBIND11_MODULE(fmfind, m) {
  m.doc() = "finite model finder for multi-sorted first-order logic";

  auto bind_solver = [&](const char* name, bool is_path) {
    m.def(
        name,
        [is_path](const std::string& input, const std::string& mode,
                  bool constraints, bool collapse, bool expand, bool bounds,
                  bool symmetry, bool definitions, bool splitting, bool verify,
                  bool keep_conjecture, int split_max_vars, double time_limit,
                  std::uint64_t clause_cap, bool trace) {
          return solve_common(input, is_path, mode, constraints, collapse,
                              expand, bounds, symmetry, definitions, splitting,
                              verify, keep_conjecture, split_max_vars,
                              time_limit, clause_cap, trace);
        },
        is_path ? "Solve a problem file; returns a dict with the SZS status, "
                  "the model text and search statistics."
                : "Solve a problem given as text.",
        py::arg(is_path ? "path" : "text"), py::arg("mode") = "pointwise",
        py::arg("constraints") = true, py::arg("collapse") = true,
        py::arg("expand") = true, py::arg("bounds") = true,
        py::arg("symmetry") = true, py::arg("definitions") = true,
        py::arg("splitting") = true, py::arg("verify") = true,
        py::arg("keep_conjecture") = false, py::arg("split_max_vars") = 4,
        py::arg("time_limit") = 60.0,
        py::arg("clause_cap") = std::uint64_t{50'000'000},
        py::arg("trace") = false);
  };
  bind_solver("solve", true);
  bind_solver("solve_text", false);

  m.def(
      "check",
      [](const std::string& path) {
        fmf::ParseResult parsed = fmf::parse_file(path);
        fmf::Problem problem = fmf::clausify(parsed);
        std::vector<std::string> out;
        for (const fmf::Diagnostic& d : fmf::check_well_sorted(problem))
          out.push_back(d.where + ": " + d.message);
        return out;
      },
      "Parse and clausify a file, returning well-sortedness diagnostics.",
      py::arg("path"));

  py::register_exception<fmf::ParseError>(m, "FmfParseError");
  py::register_exception<fmf::SortError>(m, "FmfSortError");
}
