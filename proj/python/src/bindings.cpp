#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "hk/analysis.hpp"
#include "hk/composition.hpp"
#include "hk/error.hpp"
#include "hk/instantiation.hpp"
#include "hk/io/document.hpp"
#include "hk/io/dot.hpp"
#include "hk/run.hpp"

namespace py = pybind11;
using namespace hk;

namespace {

using Tokens = std::map<std::string, std::map<std::string, std::size_t>>;

Tokens marking_dict(const SchematicNet& net, const Marking& m) {
  Tokens out;
  for (std::size_t p = 0; p < net.places.size(); ++p) {
    auto& place = out[net.places[p].name];
    for (const auto& [v, n] : m[p]) place[io::print_value(v)] = n;
  }
  return out;
}

py::list interface_list(const Module& m, Side side) {
  py::list out;
  for (const auto& [kind, label] : interface_of(m, side)) out.append(py::make_tuple(to_string(kind), label));
  return out;
}

std::vector<Step> steps_from(const std::vector<std::pair<std::string, std::string>>& script) {
  std::vector<Step> out;
  for (const auto& [t, b] : script) out.push_back({t, io::parse_binding(b)});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Schematic high-level Petri net modules: composition, instantiation, runs and analysis.";

  py::register_exception<Error>(m, "HkError");
  py::register_exception<io::ParseError>(m, "ParseError", m.attr("HkError"));

  py::class_<Module, std::shared_ptr<Module>>(m, "Module")
      .def_readonly("name", &Module::name)
      .def_property_readonly("places", [](const Module& mod) {
        std::vector<std::string> out;
        for (const auto& p : mod.net.places) out.push_back(p.name);
        return out;
      })
      .def_property_readonly("transitions", [](const Module& mod) {
        std::vector<std::string> out;
        for (const auto& t : mod.net.transitions) out.push_back(t.name);
        return out;
      })
      .def_property_readonly("left", [](const Module& mod) { return interface_list(mod, Side::left); })
      .def_property_readonly("right", [](const Module& mod) { return interface_list(mod, Side::right); })
      .def("canonical", [](const Module& mod) { return canonicalize(mod); })
      .def("to_dot", [](const Module& mod) { return io::to_dot(mod); })
      .def("text", [](const Module& mod) { return io::print(io::make_document(mod)); })
      .def("__matmul__", [](const Module& a, const Module& b) { return std::make_shared<Module>(compose(a, b)); });

  py::class_<Structure, std::shared_ptr<Structure>>(m, "Structure")
      .def_property_readonly("name", &Structure::name)
      .def("carrier", [](const Structure& s, const std::string& symbol) {
        const Value* c = s.carrier(symbol);
        if (!c) throw Error("no carrier for '" + symbol + "'");
        std::vector<std::string> out;
        for (const auto& v : c->elements()) out.push_back(io::print_value(v));
        return out;
      })
      .def("violations", [](const Structure& s) {
        std::vector<std::string> out;
        for (const auto& v : validate_structure(*s.signature(), s)) out.push_back(v.message);
        return out;
      });

  py::class_<System, std::shared_ptr<System>>(m, "System")
      .def_readonly("name", &System::name)
      .def_property_readonly("module", [](const System& s) { return std::make_shared<Module>(*s.module); })
      .def_property_readonly("initial", [](const System& s) { return marking_dict(s.net(), s.initial); })
      .def("successor_count", [](const System& s) { return s.successors(s.initial).size(); })
      .def("to_dot", [](const System& s) { return io::to_dot(s); });

  py::class_<Run, std::shared_ptr<Run>>(m, "Run")
      .def_readonly("name", &Run::name)
      .def_property_readonly("condition_count", [](const Run& r) { return r.conditions.size(); })
      .def_property_readonly("event_count", [](const Run& r) { return r.events.size(); })
      .def("canonical", [](const Run& r) { return canonicalize(r); })
      .def("linearize", [](const Run& r, std::uint64_t seed) {
        std::vector<std::string> out;
        for (const auto& s : linearize(r, seed)) out.push_back(step_str(s));
        return out;
      }, py::arg("seed") = 0)
      .def("text", [](const Run& r) { return io::print(io::make_document(r)); })
      .def("to_dot", [](const Run& r) { return io::to_dot(r); })
      .def("__matmul__", [](const Run& a, const Run& b) { return std::make_shared<Run>(compose_runs(a, b)); });

  m.def("load", [](const std::string& path) -> py::object {
    io::Loader loader;
    auto doc = loader.load(path);
    switch (doc.kind) {
      case io::DocumentKind::module: return py::cast(std::make_shared<Module>(io::as_module(doc)));
      case io::DocumentKind::structure: return py::cast(std::make_shared<Structure>(io::as_structure(doc)));
      case io::DocumentKind::system: return py::cast(std::make_shared<System>(io::as_system(doc).system()));
      case io::DocumentKind::run: return py::cast(std::make_shared<Run>(io::as_run(doc)));
      case io::DocumentKind::signature: return py::cast(io::print(doc));
    }
    return py::none();
  }, py::arg("path"), "Loads a model file. Signatures come back as their canonical text.");

  m.def("check", [](const std::string& text) { return io::print(io::parse(text)); }, py::arg("text"),
        "Parses a self-contained document and returns its canonical text.");

  m.def("compose", [](const Module& a, const Module& b) { return std::make_shared<Module>(compose(a, b)); });

  m.def("instantiate", [](const Module& mod, const Structure& s, const std::string& name) {
    return std::make_shared<System>(
        instantiate(std::make_shared<const Module>(mod), std::make_shared<const Structure>(s), name));
  }, py::arg("module"), py::arg("structure"), py::arg("name") = "");

  m.def("simulate", [](const System& sys, std::uint64_t seed, std::size_t steps,
                       const std::optional<std::vector<std::pair<std::string, std::string>>>& script) {
    SchedulingPolicy p;
    p.seed = seed;
    p.step_limit = steps;
    if (script) {
      p.mode = SchedulingPolicy::Mode::script;
      p.script = steps_from(*script);
      p.step_limit = p.script.size();
    }
    return std::make_shared<Run>(simulate(sys, p));
  }, py::arg("system"), py::arg("seed") = 0, py::arg("steps") = 100, py::arg("script") = py::none(),
        "Random run, or a scripted one from (transition, binding text) pairs.");

  m.def("validate_run", [](const Run& r, const System& sys) { return validate_run(r, sys); });

  m.def("final_marking", [](const Run& r, const System& sys) { return marking_dict(sys.net(), final_marking(r, sys)); });

  m.def("place_invariants", [](const System& sys) {
    auto g = ground(sys);
    py::list out;
    for (const auto& v : place_invariants(g)) {
      py::dict inv;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) inv[py::str(g.place_label(sys.net(), i))] = v[i];
      out.append(inv);
    }
    return out;
  }, "Basis of place invariants, each as {grounded place: weight}.");

  m.def("explore", [](const System& sys, std::size_t max_nodes, std::size_t max_edges) {
    auto g = explore(sys, {max_nodes, max_edges});
    py::dict out;
    out["nodes"] = g.nodes.size();
    out["edges"] = g.edges.size();
    out["truncated"] = g.truncated;
    out["deadlocks"] = g.deadlocks.size();
    return out;
  }, py::arg("system"), py::arg("max_nodes") = 100000, py::arg("max_edges") = 1000000);
}
