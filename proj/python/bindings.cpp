#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "twist/compiler.hpp"
#include "twist/driver.hpp"
#include "twist/engine.hpp"
#include "twist/inspect.hpp"

namespace py = pybind11;
using namespace twist;

namespace {

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Value:
      return "value";
    case RunStatus::Uncaught:
      return "uncaught";
    case RunStatus::StepLimit:
      return "step-limit";
  }
  return "value";
}

DotStyle parse_style(const std::string& name) {
  for (DotStyle s : {DotStyle::Standard, DotStyle::Thunked, DotStyle::Twisted}) {
    if (name == to_string(s)) return s;
  }
  throw py::value_error("unknown style: " + name);
}

py::dict evaluate(const std::string& source, bool checked,
                  std::optional<std::uint64_t> step_limit,
                  const std::vector<fs::path>& includes) {
  std::ostringstream out;
  RunOptions options;
  options.checked = checked;
  options.step_limit = step_limit;
  options.out = &out;
  Evaluation e;
  {
    py::gil_scoped_release release;
    e = evaluate_text(source, options, includes);
  }
  py::dict d;
  d["status"] = status_name(e.status);
  d["value"] = e.value;
  d["output"] = out.str();
  d["steps"] = e.steps;
  return d;
}

py::tuple run_script(const fs::path& script, bool checked,
                     std::optional<std::uint64_t> step_limit,
                     const std::vector<fs::path>& includes,
                     std::optional<fs::path> trace_dot, bool bytecode) {
  RunConfig config;
  config.script = script;
  config.include_dirs = includes;
  config.checked = checked;
  config.step_limit = step_limit;
  config.trace_dir = std::move(trace_dot);
  config.dump_bytecode = bytecode;
  std::ostringstream out;
  std::ostringstream err;
  int code;
  {
    py::gil_scoped_release release;
    code = run_file(config, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

// Runs `main` step by step, handing each boundary state to `visit`.
void walk(const std::string& source, std::optional<std::uint64_t> step_limit,
          const std::function<void(const RewriteState&)>& visit) {
  Program p = compile_text(source);
  const ResolvedDef* main = p.lifted.find_def("main");
  if (!main) throw CompileError("no definition of main");
  std::ostringstream out;
  RunOptions options;
  options.out = &out;
  options.step_limit = step_limit;
  options.observer = visit;
  Engine engine(p, options);
  RewriteState s = wire_root(main->body, p);
  engine.run(s);
}

std::vector<std::string> trace(const std::string& source, const std::string& style,
                               std::optional<std::uint64_t> step_limit) {
  const DotStyle s = parse_style(style);
  std::vector<std::string> snapshots;
  walk(source, step_limit,
       [&](const RewriteState& state) { snapshots.push_back(emit_dot(state, s).text); });
  return snapshots;
}

py::list check_trace(const std::string& source, std::optional<std::uint64_t> step_limit) {
  py::list reports;
  walk(source, step_limit, [&](const RewriteState& state) {
    GraphReport r = check(state);
    py::dict d;
    d["step"] = state.steps;
    d["acyclic"] = r.acyclic;
    d["chain_linear"] = r.chain_linear;
    d["reduced_pure"] = r.reduced_pure;
    d["tree"] = r.tree;
    d["thunks"] = r.thunk_count;
    d["nodes"] = r.node_count;
    reports.append(d);
  });
  return reports;
}

}  // namespace

PYBIND11_MODULE(_twist, m) {
  m.doc() = "Twisted-thunk combinator interpreter";

  py::register_exception<CompileError>(m, "CompileError", PyExc_ValueError);
  py::register_exception<InternalFault>(m, "InternalFault", PyExc_RuntimeError);

  m.def("evaluate", &evaluate, py::arg("source"), py::arg("checked") = false,
        py::arg("step_limit") = std::nullopt,
        py::arg("includes") = std::vector<fs::path>{},
        "Compile source text and run main. Returns status, value, output and steps.");
  m.def("run_file", &run_script, py::arg("script"), py::arg("checked") = false,
        py::arg("step_limit") = std::nullopt,
        py::arg("includes") = std::vector<fs::path>{},
        py::arg("trace_dot") = std::nullopt, py::arg("bytecode") = false,
        "Run a script as the command line does. Returns (exit code, stdout, stderr).");
  m.def("disassemble",
        [](const std::string& source) { return disassemble(compile_text(source)); },
        py::arg("source"));
  m.def("trace", &trace, py::arg("source"), py::arg("style") = "twisted",
        py::arg("step_limit") = std::nullopt,
        "DOT text of every step boundary of main.");
  m.def("check_trace", &check_trace, py::arg("source"),
        py::arg("step_limit") = std::nullopt,
        "Invariant report of every step boundary of main.");
  m.def("live_nodes", &live_nodes);

  py::class_<Session>(m, "Session")
      .def(py::init<std::vector<fs::path>>(),
           py::arg("includes") = std::vector<fs::path>{})
      .def("eval",
           [](Session& s, const std::string& line) {
             std::ostringstream out;
             Session::Reply r = s.eval(line, out);
             return py::make_tuple(r.ok, r.text, out.str());
           },
           py::arg("line"))
      .def_property_readonly("source", &Session::source);
}
