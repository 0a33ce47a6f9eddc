#include "hk/composition.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hk/error.hpp"

namespace hk {

std::string to_string(ElementKind k) { return k == ElementKind::place ? "place" : "transition"; }

std::string display_label(const std::string& label) {
  std::string out = label;
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

void Module::normalize() {
  Renumbering r = net.normalize();
  for (auto* side : {&left, &right})
    for (auto& e : *side) e.element = e.kind == ElementKind::place ? r.places.at(e.element) : r.transitions.at(e.element);
}

bool operator==(const Module& a, const Module& b) {
  bool same_sig = a.signature == b.signature || (a.signature && b.signature && *a.signature == *b.signature);
  return same_sig && a.name == b.name && a.net == b.net && a.left == b.left && a.right == b.right;
}

Module empty_module(std::shared_ptr<const Signature> signature) {
  Module m;
  m.name = "empty";
  m.signature = std::move(signature);
  return m;
}

std::vector<std::string> module_problems(const Module& m) {
  std::vector<std::string> out;
  for (Side side : {Side::left, Side::right}) {
    const char* side_name = side == Side::left ? "left" : "right";
    std::set<std::pair<ElementKind, std::string>> labels;
    std::set<std::pair<ElementKind, std::size_t>> elements;
    for (const auto& e : m.interface(side)) {
      std::size_t limit = e.kind == ElementKind::place ? m.net.places.size() : m.net.transitions.size();
      if (e.label.empty()) out.push_back(std::string(side_name) + " interface has an empty label");
      if (e.element >= limit)
        out.push_back(std::string(side_name) + " interface element '" + e.label + "' refers to a missing " +
                      to_string(e.kind));
      if (!labels.insert({e.kind, e.label}).second)
        out.push_back(std::string(side_name) + " interface has duplicate " + to_string(e.kind) + " label '" + e.label + "'");
      if (!elements.insert({e.kind, e.element}).second)
        out.push_back(std::string(side_name) + " interface exposes the same " + to_string(e.kind) + " twice");
    }
  }
  if (m.signature) {
    for (auto& p : net_problems(m.net, *m.signature)) out.push_back(std::move(p));
  } else if (m.element_count() > 0) {
    out.push_back("module '" + m.name + "' has elements but no signature");
  }
  return out;
}

std::vector<std::pair<ElementKind, std::string>> interface_of(const Module& m, Side side) {
  std::vector<std::pair<ElementKind, std::string>> out;
  for (const auto& e : m.interface(side)) out.emplace_back(e.kind, e.label);
  return out;
}

FusionPlan plan_fusion(const std::vector<InterfaceElement>& a_left, const std::vector<InterfaceElement>& a_right,
                       std::size_t a_places, std::size_t a_transitions, const std::vector<InterfaceElement>& b_left,
                       const std::vector<InterfaceElement>& b_right, std::size_t b_places,
                       std::size_t b_transitions) {
  FusionPlan plan;
  std::map<std::pair<ElementKind, std::string>, const InterfaceElement*> offered;
  for (const auto& e : a_right) offered.emplace(std::make_pair(e.kind, e.label), &e);

  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  plan.place_map.assign(b_places, unset);
  plan.transition_map.assign(b_transitions, unset);
  std::set<std::pair<ElementKind, std::string>> matched;
  for (const auto& e : b_left) {
    auto it = offered.find({e.kind, e.label});
    if (it == offered.end()) continue;
    auto& map = e.kind == ElementKind::place ? plan.place_map : plan.transition_map;
    auto& fused = e.kind == ElementKind::place ? plan.fused_places : plan.fused_transitions;
    if (map.at(e.element) != unset && map[e.element] != it->second->element)
      throw CompositionError("element behind label '" + e.label + "' would fuse with two different elements");
    map[e.element] = it->second->element;
    fused.emplace_back(it->second->element, e.element);
    matched.insert({e.kind, e.label});
  }
  // Distinct right-operand elements must not collapse onto one left-operand element.
  for (const auto* fused : {&plan.fused_places, &plan.fused_transitions}) {
    std::map<std::size_t, std::size_t> seen;
    for (const auto& [a, b] : *fused) {
      auto [it, inserted] = seen.emplace(a, b);
      if (!inserted && it->second != b)
        throw CompositionError("two right-operand elements fuse with the same left-operand element");
    }
  }

  std::size_t next_place = a_places, next_transition = a_transitions;
  for (auto& idx : plan.place_map)
    if (idx == unset) idx = next_place++;
  for (auto& idx : plan.transition_map)
    if (idx == unset) idx = next_transition++;

  auto add = [](std::vector<InterfaceElement>& side, InterfaceElement e, const char* which) {
    for (const auto& existing : side)
      if (existing.kind == e.kind && existing.label == e.label)
        throw CompositionError(std::string("duplicate ") + to_string(e.kind) + " label '" + e.label + "' in the " +
                               which + " interface of the composition");
    side.push_back(std::move(e));
  };
  auto remap = [&](InterfaceElement e) {
    e.element = e.kind == ElementKind::place ? plan.place_map.at(e.element) : plan.transition_map.at(e.element);
    return e;
  };

  for (const auto& e : a_left) add(plan.left, e, "left");
  for (const auto& e : b_left)
    if (!matched.count({e.kind, e.label})) add(plan.left, remap(e), "left");
  for (const auto& e : b_right) add(plan.right, remap(e), "right");
  for (const auto& e : a_right)
    if (!matched.count({e.kind, e.label})) add(plan.right, e, "right");
  return plan;
}

namespace {

std::string fresh_name(const std::string& base, std::set<std::string>& used) {
  if (used.insert(base).second) return base;
  for (int k = 2;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (used.insert(candidate).second) return candidate;
  }
}

}  // namespace

Module compose(const Module& a, const Module& b) {
  if (a.signature && b.signature && !(a.signature == b.signature || *a.signature == *b.signature))
    throw CompositionError("modules '" + a.name + "' and '" + b.name + "' use different signatures");

  FusionPlan plan = plan_fusion(a.left, a.right, a.net.places.size(), a.net.transitions.size(), b.left, b.right,
                                b.net.places.size(), b.net.transitions.size());

  Module out;
  if (a.name.empty() || a.name == "empty")
    out.name = b.name;
  else if (b.name.empty() || b.name == "empty")
    out.name = a.name;
  else
    out.name = a.name + "_" + b.name;
  out.signature = a.signature ? a.signature : b.signature;
  out.net = a.net;

  const Signature* sig = out.signature.get();
  for (const auto& [name, sort] : b.net.variables) {
    auto [it, inserted] = out.net.variables.emplace(name, sort);
    if (!inserted && it->second != sort)
      throw CompositionError("variable '" + name + "' is declared as " + it->second.str() + " and as " + sort.str());
  }

  std::set<std::string> place_names, transition_names;
  for (const auto& p : out.net.places) place_names.insert(p.name);
  for (const auto& t : out.net.transitions) transition_names.insert(t.name);

  out.net.places.resize(out.net.places.size() + b.net.places.size() - plan.fused_places.size());
  out.net.transitions.resize(out.net.transitions.size() + b.net.transitions.size() - plan.fused_transitions.size());

  for (std::size_t i = 0; i < b.net.places.size(); ++i) {
    const auto& src = b.net.places[i];
    std::size_t target = plan.place_map[i];
    if (target >= a.net.places.size()) {
      Place p = src;
      p.name = fresh_name(src.name, place_names);
      out.net.places[target] = std::move(p);
      continue;
    }
    Place& dst = out.net.places[target];
    if (dst.sort && src.sort) {
      bool same = sig ? sig->normalize(*dst.sort) == sig->normalize(*src.sort) : *dst.sort == *src.sort;
      if (!same)
        throw CompositionError("fused place '" + dst.name + "' has sort " + dst.sort->str() + " on the left and " +
                               src.sort->str() + " on the right");
    } else if (!dst.sort) {
      dst.sort = src.sort;
    }
    dst.init.insert(dst.init.end(), src.init.begin(), src.init.end());
  }

  for (std::size_t i = 0; i < b.net.transitions.size(); ++i) {
    const auto& src = b.net.transitions[i];
    std::size_t target = plan.transition_map[i];
    if (target >= a.net.transitions.size()) {
      Transition t = src;
      t.name = fresh_name(src.name, transition_names);
      out.net.transitions[target] = std::move(t);
      continue;
    }
    Transition& dst = out.net.transitions[target];
    dst.guard = Guard::conjoin(dst.guard, src.guard);
    dst.free_vars.insert(dst.free_vars.end(), src.free_vars.begin(), src.free_vars.end());
  }

  for (const auto& arc : b.net.arcs) {
    Arc copy = arc;
    copy.place = plan.place_map.at(arc.place);
    copy.transition = plan.transition_map.at(arc.transition);
    out.net.arcs.push_back(std::move(copy));
  }

  out.left = std::move(plan.left);
  out.right = std::move(plan.right);
  out.normalize();
  return out;
}

LabeledGraph module_graph(const Module& m) {
  LabeledGraph g;
  const std::size_t np = m.net.places.size();
  std::vector<std::vector<std::string>> iface(np + m.net.transitions.size());
  for (Side side : {Side::left, Side::right})
    for (const auto& e : m.interface(side)) {
      std::size_t node = e.kind == ElementKind::place ? e.element : np + e.element;
      if (node < iface.size()) iface[node].push_back((side == Side::left ? "L:" : "R:") + e.label);
    }
  auto attrs = [&](std::size_t node) {
    auto v = iface[node];
    std::sort(v.begin(), v.end());
    std::string out;
    for (const auto& s : v) out += "|" + s;
    return out;
  };
  for (std::size_t i = 0; i < np; ++i) {
    const auto& p = m.net.places[i];
    std::vector<std::string> init;
    for (const auto& t : p.init) init.push_back(t.str());
    std::sort(init.begin(), init.end());
    std::string label = "P|" + (p.sort ? p.sort->str() : std::string("-")) + "|init";
    for (const auto& s : init) label += " " + s;
    g.nodes.push_back(label + attrs(i));
  }
  for (std::size_t i = 0; i < m.net.transitions.size(); ++i) {
    const auto& t = m.net.transitions[i];
    std::vector<std::string> atoms;
    for (const auto& a : t.guard.atoms)
      if (a.op != GuardAtom::Op::truth) atoms.push_back(a.str());
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    std::set<std::string> free(t.free_vars.begin(), t.free_vars.end());
    std::string label = "T|guard";
    for (const auto& s : atoms) label += " " + s;
    label += "|free";
    for (const auto& s : free) label += " " + s;
    g.nodes.push_back(label + attrs(np + i));
  }
  // Parallel arcs count as one arc with the united inscription.
  std::map<std::tuple<std::size_t, std::size_t, ArcDirection>, std::vector<std::string>> arcs;
  for (const auto& a : m.net.arcs) {
    auto& ins = arcs[{a.place, a.transition, a.direction}];
    for (const auto& t : a.inscription) ins.push_back(t.str());
  }
  for (auto& [key, ins] : arcs) {
    auto [p, t, dir] = key;
    std::sort(ins.begin(), ins.end());
    std::string label;
    for (const auto& s : ins) label += (label.empty() ? "" : ", ") + s;
    if (dir == ArcDirection::input)
      g.edges.push_back({p, np + t, label});
    else
      g.edges.push_back({np + t, p, label});
  }
  return g;
}

std::string canonicalize(const Module& m) {
  std::string vars = "vars";
  for (const auto& [name, sort] : m.net.variables) vars += " " + name + ":" + sort.str();
  return vars + "\n" + canonical_form(module_graph(m));
}

Module canonical_copy(const Module& m) {
  LabeledGraph g = module_graph(m);
  auto order = canonical_order(g);
  const std::size_t np = m.net.places.size();
  Module out = m;
  std::size_t place_rank = 0, transition_rank = 0;
  for (std::size_t node : order) {
    if (node < np)
      out.net.places[node].name = "p" + std::to_string(++place_rank);
    else
      out.net.transitions[node - np].name = "t" + std::to_string(++transition_rank);
  }
  // Zero-padding keeps name order equal to canonical order.
  auto pad = [](std::string& name, std::size_t total) {
    std::string digits = name.substr(1);
    std::size_t width = std::to_string(total).size();
    name = name.substr(0, 1) + std::string(width - digits.size(), '0') + digits;
  };
  for (auto& p : out.net.places) pad(p.name, np);
  for (auto& t : out.net.transitions) pad(t.name, m.net.transitions.size());
  out.normalize();
  return out;
}

}  // namespace hk
