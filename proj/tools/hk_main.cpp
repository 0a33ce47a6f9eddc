// Command-line front end: hk <subcommand> ...
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hk/analysis.hpp"
#include "hk/io/document.hpp"
#include "hk/io/dot.hpp"
#include "hk/run.hpp"

namespace fs = std::filesystem;
using namespace hk;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_usage = 2;

/// Failures that map to exit code 1.
struct Invalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::ParseError({path, 0, 0, 0, 0}, "cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw io::ParseError({out_path, 0, 0, 0, 0}, "cannot write file");
  out << text;
}

io::ModelDocument load(const std::string& path) {
  io::Loader loader;
  return loader.load(path);
}

std::shared_ptr<const Module> load_module(const std::string& path, std::vector<std::string>* includes = nullptr) {
  auto doc = load(path);
  if (doc.kind == io::DocumentKind::system) return io::as_system(doc).module;
  if (includes) {
    auto dir = fs::absolute(path).parent_path();
    for (const auto& inc : doc.includes) includes->push_back((dir / inc).lexically_normal().generic_string());
  }
  return std::make_shared<Module>(io::as_module(doc));
}

System load_system(const std::string& path) {
  auto doc = load(path);
  return io::as_system(doc).system();
}

Run load_run(const std::string& path) { return io::as_run(load(path)); }

std::string report_lines(const std::vector<std::string>& problems) {
  std::string out;
  for (const auto& p : problems) out += "  " + p + "\n";
  return out;
}

int cmd_check(const std::vector<std::string>& files) {
  bool ok = true;
  for (const auto& f : files) {
    auto doc = load(f);
    std::vector<std::string> problems;
    std::string name;
    switch (doc.kind) {
      case io::DocumentKind::signature:
        name = io::as_signature(doc).name();
        problems = io::as_signature(doc).problems();
        break;
      case io::DocumentKind::structure: {
        const auto& s = io::as_structure(doc);
        name = s.name();
        for (const auto& v : validate_structure(*s.signature(), s)) problems.push_back(to_string(v.kind) + ": " + v.message);
        break;
      }
      case io::DocumentKind::module:
        name = io::as_module(doc).name;
        problems = module_problems(io::as_module(doc));
        break;
      case io::DocumentKind::system: name = io::as_system(doc).name; break;
      case io::DocumentKind::run:
        name = io::as_run(doc).name;
        problems = run_structure_problems(io::as_run(doc));
        break;
    }
    if (problems.empty()) {
      std::cout << f << ": ok (" << io::to_string(doc.kind) << " " << name << ")\n";
    } else {
      ok = false;
      std::cout << f << ": " << problems.size() << " problem(s) in " << io::to_string(doc.kind) << " " << name << "\n"
                << report_lines(problems);
    }
  }
  return ok ? exit_ok : exit_invalid;
}

int cmd_compose(const std::vector<std::string>& files, const std::string& name, const std::string& out) {
  std::vector<std::string> includes;
  Module acc = *load_module(files.front(), &includes);
  for (std::size_t i = 1; i < files.size(); ++i) acc = compose(acc, *load_module(files[i], &includes));
  if (!name.empty()) acc.name = name;
  // include paths are written relative to the output file
  auto base = out.empty() ? fs::current_path() : fs::absolute(out).parent_path();
  for (auto& inc : includes) inc = fs::path(inc).lexically_relative(base).generic_string();
  std::sort(includes.begin(), includes.end());
  includes.erase(std::unique(includes.begin(), includes.end()), includes.end());
  emit(io::print(io::make_document(std::move(acc), std::move(includes))), out);
  return exit_ok;
}

int cmd_instantiate(const std::string& module_path, const std::string& structure_path, const std::string& name,
                    const std::string& out) {
  auto module = load_module(module_path);
  auto sdoc = load(structure_path);
  auto structure = std::make_shared<Structure>(io::as_structure(sdoc));
  System sys;
  try {
    sys = instantiate(module, structure, name.empty() ? module->name + "_" + structure->name() : name);
  } catch (const Error& e) {
    throw Invalid(e.what());
  }
  emit(io::print(io::make_document(sys)), out);
  return exit_ok;
}

int cmd_simulate(const std::string& system_path, std::uint64_t seed, std::optional<std::size_t> steps,
                 const std::string& script, const std::string& name, const std::string& out) {
  System sys = load_system(system_path);
  SchedulingPolicy policy;
  policy.seed = seed;
  if (!script.empty()) {
    policy.mode = SchedulingPolicy::Mode::script;
    policy.script = io::parse_steps(read_text(script), script);
    policy.step_limit = steps.value_or(policy.script.size());
  } else {
    policy.step_limit = steps.value_or(policy.step_limit);
  }
  Run r;
  try {
    r = simulate(sys, policy);
  } catch (const RunError& e) {
    throw Invalid(e.what());
  }
  if (!name.empty()) r.name = name;
  emit(io::print(io::make_document(std::move(r))), out);
  return exit_ok;
}

int cmd_validate_run(const std::string& run_path, const std::string& system_path) {
  Run r = load_run(run_path);
  System sys = load_system(system_path);
  auto problems = validate_run(r, sys);
  if (!problems.empty()) {
    std::cout << "run " << r.name << " is not a run of " << sys.name << ":\n" << report_lines(problems);
    return exit_invalid;
  }
  std::cout << "run " << r.name << " is a valid run of " << sys.name << " (" << r.events.size() << " events, "
            << r.conditions.size() << " conditions)\n";
  return exit_ok;
}

int cmd_compose_runs(const std::vector<std::string>& files, const std::string& name, const std::string& out) {
  Run acc = load_run(files.front());
  try {
    for (std::size_t i = 1; i < files.size(); ++i) acc = compose_runs(acc, load_run(files[i]));
  } catch (const Error& e) {
    throw Invalid(e.what());
  }
  if (!name.empty()) acc.name = name;
  emit(io::print(io::make_document(std::move(acc))), out);
  return exit_ok;
}

std::string vector_str(const SchematicNet& net, const GroundedNet& g, const IntVector& v, bool places) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    if (!s.empty()) s += " + ";
    if (v[i] != 1) s += std::to_string(v[i]) + "*";
    s += places ? g.place_label(net, i) : g.transition_label(net, i);
  }
  return s.empty() ? "0" : s;
}

int cmd_invariants(const std::string& system_path, bool transitions) {
  System sys = load_system(system_path);
  GroundedNet g = ground(sys);
  const auto& net = sys.net();
  std::cout << "grounded net: " << g.places.size() << " places, " << g.transitions.size() << " transitions\n";
  auto pinv = place_invariants(g);
  std::cout << "place invariants: " << pinv.size() << "\n";
  for (std::size_t k = 0; k < pinv.size(); ++k)
    std::cout << "  i" << k + 1 << " = " << vector_str(net, g, pinv[k], true) << "  [i.m0 = " << dot(pinv[k], g.initial)
              << "]\n";
  if (transitions) {
    auto tinv = transition_invariants(g);
    std::cout << "transition invariants: " << tinv.size() << "\n";
    for (std::size_t k = 0; k < tinv.size(); ++k)
      std::cout << "  j" << k + 1 << " = " << vector_str(net, g, tinv[k], false) << "\n";
  }
  return exit_ok;
}

int cmd_reach(const std::string& system_path, std::size_t max_nodes, std::size_t max_edges, const std::string& pred,
              bool show_markings) {
  System sys = load_system(system_path);
  std::optional<Predicate> predicate;
  if (!pred.empty()) predicate = io::parse_predicate(pred);
  auto graph = explore(sys, {max_nodes, max_edges}, predicate ? &*predicate : nullptr);
  const auto& net = sys.net();
  std::cout << "nodes: " << graph.nodes.size() << "\n";
  std::cout << "edges: " << graph.edges.size() << "\n";
  std::cout << "truncated: " << (graph.truncated ? "yes" : "no") << "\n";
  std::cout << "deadlocks: " << graph.deadlocks.size() << "\n";
  for (auto n : graph.deadlocks)
    if (show_markings) std::cout << "  m" << n << " = " << marking_str(net, graph.nodes[n]) << "\n";
  if (predicate) {
    std::cout << "predicate: " << predicate->str() << "\n";
    std::cout << "hits: " << graph.hits.size() << "\n";
    for (auto n : graph.hits)
      if (show_markings) std::cout << "  m" << n << " = " << marking_str(net, graph.nodes[n]) << "\n";
  }
  return exit_ok;
}

int cmd_export(const std::string& path, const std::string& out) {
  auto doc = load(path);
  std::string dot;
  switch (doc.kind) {
    case io::DocumentKind::module: dot = io::to_dot(io::as_module(doc)); break;
    case io::DocumentKind::system: dot = io::to_dot(io::as_system(doc).system()); break;
    case io::DocumentKind::run: dot = io::to_dot(io::as_run(doc)); break;
    default: throw Invalid("only modules, systems and runs can be exported");
  }
  emit(dot, out);
  return exit_ok;
}

int cmd_equal(const std::string& a, const std::string& b) {
  auto da = load(a), db = load(b);
  std::string ca, cb;
  if (da.kind == io::DocumentKind::run && db.kind == io::DocumentKind::run) {
    ca = canonicalize(io::as_run(da));
    cb = canonicalize(io::as_run(db));
  } else {
    auto ma = da.kind == io::DocumentKind::system ? *io::as_system(da).module : io::as_module(da);
    auto mb = db.kind == io::DocumentKind::system ? *io::as_system(db).module : io::as_module(db);
    ca = canonicalize(ma);
    cb = canonicalize(mb);
  }
  bool same = ca == cb;
  std::cout << (same ? "canonically equal" : "canonically different") << "\n";
  return same ? exit_ok : exit_invalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hk: schematic high-level Petri net modules"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hk 0.1.0");

  std::vector<std::string> files;
  std::string out, name, script, pred, file_a, file_b;
  std::uint64_t seed = 0;
  std::optional<std::size_t> steps;
  std::size_t max_nodes = 100000, max_edges = 1000000;
  bool dot = false, with_transitions = false, show_markings = false;

  auto* check = app.add_subcommand("check", "Parse files and report well-formedness problems");
  check->add_option("files", files, "Model files")->required()->check(CLI::ExistingFile);

  auto* comp = app.add_subcommand("compose", "Compose modules left to right");
  comp->add_option("modules", files, "Module files (.hk)")->required()->check(CLI::ExistingFile);
  comp->add_option("-o,--output", out, "Output file");
  comp->add_option("--name", name, "Name of the composed module");

  auto* inst = app.add_subcommand("instantiate", "Instantiate a module with a structure");
  inst->add_option("module", file_a, "Module file (.hk)")->required()->check(CLI::ExistingFile);
  inst->add_option("structure", file_b, "Structure file (.hks)")->required()->check(CLI::ExistingFile);
  inst->add_option("-o,--output", out, "Output system file");
  inst->add_option("--name", name, "System name");

  auto* sim = app.add_subcommand("simulate", "Record a distributed run");
  sim->add_option("system", file_a, "System file (.hksys)")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", seed, "Seed of the random policy");
  sim->add_option("--steps", steps, "Maximal number of steps");
  sim->add_option("--script", script, "Steps file replayed in order")->check(CLI::ExistingFile);
  sim->add_option("--name", name, "Run name");
  sim->add_option("-o,--output", out, "Output run file");

  auto* val = app.add_subcommand("validate-run", "Check that a run belongs to a system");
  val->add_option("run", file_a, "Run file (.hkrun)")->required()->check(CLI::ExistingFile);
  val->add_option("system", file_b, "System file (.hksys)")->required()->check(CLI::ExistingFile);

  auto* cruns = app.add_subcommand("compose-runs", "Compose runs left to right");
  cruns->add_option("runs", files, "Run files")->required()->check(CLI::ExistingFile);
  cruns->add_option("-o,--output", out, "Output file");
  cruns->add_option("--name", name, "Name of the composed run");

  auto* inv = app.add_subcommand("invariants", "Place (and transition) invariants of the grounded net");
  inv->add_option("system", file_a, "System file")->required()->check(CLI::ExistingFile);
  inv->add_flag("--transitions", with_transitions, "Also list transition invariants");

  auto* reach = app.add_subcommand("reach", "Bounded reachability exploration");
  reach->add_option("system", file_a, "System file")->required()->check(CLI::ExistingFile);
  reach->add_option("--max-nodes", max_nodes, "Node cap");
  reach->add_option("--max-edges", max_edges, "Edge cap");
  reach->add_option("--pred", pred, "Marking predicate");
  reach->add_flag("--show", show_markings, "Print deadlock and hit markings");

  auto* exp = app.add_subcommand("export", "Export a module, system or run");
  exp->add_option("file", file_a, "Model file")->required()->check(CLI::ExistingFile);
  exp->add_flag("--dot", dot, "GraphViz output")->required();
  exp->add_option("-o,--output", out, "Output file");

  auto* eq = app.add_subcommand("equal", "Compare two modules or two runs up to isomorphism");
  eq->add_option("a", file_a, "First file")->required()->check(CLI::ExistingFile);
  eq->add_option("b", file_b, "Second file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*check) return cmd_check(files);
    if (*comp) return cmd_compose(files, name, out);
    if (*inst) return cmd_instantiate(file_a, file_b, name, out);
    if (*sim) return cmd_simulate(file_a, seed, steps, script, name, out);
    if (*val) return cmd_validate_run(file_a, file_b);
    if (*cruns) return cmd_compose_runs(files, name, out);
    if (*inv) return cmd_invariants(file_a, with_transitions);
    if (*reach) return cmd_reach(file_a, max_nodes, max_edges, pred, show_markings);
    if (*exp) return cmd_export(file_a, out);
    if (*eq) return cmd_equal(file_a, file_b);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const Invalid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  }
  return exit_usage;
}
