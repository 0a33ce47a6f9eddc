#include "hk/net.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "hk/error.hpp"

namespace hk {

std::optional<std::size_t> SchematicNet::find_place(const std::string& name) const {
  for (std::size_t i = 0; i < places.size(); ++i)
    if (places[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> SchematicNet::find_transition(const std::string& name) const {
  for (std::size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].name == name) return i;
  return std::nullopt;
}

std::vector<const Arc*> SchematicNet::arcs_of(std::size_t transition, ArcDirection dir) const {
  std::vector<const Arc*> out;
  for (const auto& a : arcs)
    if (a.transition == transition && a.direction == dir) out.push_back(&a);
  return out;
}

std::vector<std::pair<std::string, Sort>> SchematicNet::variables_of(std::size_t transition) const {
  std::set<std::string> names;
  for (const auto& a : arcs)
    if (a.transition == transition)
      for (const auto& t : a.inscription) t.collect_variables(names);
  const auto& tr = transitions.at(transition);
  tr.guard.collect_variables(names);
  names.insert(tr.free_vars.begin(), tr.free_vars.end());
  std::vector<std::pair<std::string, Sort>> out;
  for (const auto& n : names) {
    auto it = variables.find(n);
    if (it == variables.end()) throw SortError("undeclared variable '" + n + "' at transition '" + tr.name + "'");
    out.emplace_back(n, it->second);
  }
  return out;
}

Renumbering SchematicNet::normalize() {
  Renumbering r;
  auto order = [](const auto& items) {
    std::vector<std::size_t> idx(items.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return items[a].name < items[b].name; });
    return idx;
  };
  auto place_order = order(places);
  auto trans_order = order(transitions);
  r.places.resize(places.size());
  r.transitions.resize(transitions.size());
  std::vector<Place> new_places;
  std::vector<Transition> new_transitions;
  for (std::size_t i = 0; i < place_order.size(); ++i) {
    r.places[place_order[i]] = i;
    new_places.push_back(std::move(places[place_order[i]]));
  }
  for (std::size_t i = 0; i < trans_order.size(); ++i) {
    r.transitions[trans_order[i]] = i;
    new_transitions.push_back(std::move(transitions[trans_order[i]]));
  }
  places = std::move(new_places);
  transitions = std::move(new_transitions);
  for (auto& p : places) std::sort(p.init.begin(), p.init.end());
  for (auto& t : transitions) {
    std::sort(t.free_vars.begin(), t.free_vars.end());
    t.free_vars.erase(std::unique(t.free_vars.begin(), t.free_vars.end()), t.free_vars.end());
  }

  std::map<std::tuple<std::size_t, std::size_t, ArcDirection>, std::vector<Term>> merged;
  for (auto& a : arcs) {
    auto& ins = merged[{r.places.at(a.place), r.transitions.at(a.transition), a.direction}];
    ins.insert(ins.end(), a.inscription.begin(), a.inscription.end());
  }
  arcs.clear();
  for (auto& [key, ins] : merged) {
    std::sort(ins.begin(), ins.end());
    arcs.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::move(ins)});
  }
  return r;
}

namespace {

bool contains_nested_elm(const Term& t) {
  for (const auto& a : t.args())
    if (a.is_elm() || contains_nested_elm(a)) return true;
  return false;
}

void check_inscription_term(const Term& t, const std::optional<Sort>& place_sort, const Signature& sig,
                            const VariableSorts& vars, const std::string& where, std::vector<std::string>& out) {
  if (contains_nested_elm(t)) {
    out.push_back(where + ": elm is only allowed at the top of an inscription: " + t.str());
    return;
  }
  try {
    Sort s = sort_of(t, sig, vars);
    if (place_sort && sig.normalize(s) != sig.normalize(*place_sort))
      out.push_back(where + ": term " + t.str() + " has sort " + s.str() + ", place expects " + place_sort->str());
  } catch (const SortError& e) {
    out.push_back(where + ": " + e.what());
  }
}

}  // namespace

std::vector<std::string> net_problems(const SchematicNet& net, const Signature& sig) {
  std::vector<std::string> out;
  for (const auto& [name, sort] : net.variables)
    if (!sig.well_formed(sort)) out.push_back("variable '" + name + "' has undeclared sort " + sort.str());

  for (const auto& p : net.places) {
    if (p.sort && !sig.well_formed(*p.sort))
      out.push_back("place '" + p.name + "' has undeclared sort " + p.sort->str());
    for (const auto& t : p.init) {
      std::set<std::string> vars;
      t.collect_variables(vars);
      if (!vars.empty()) out.push_back("place '" + p.name + "': initial inscription " + t.str() + " is not closed");
      check_inscription_term(t, p.sort, sig, net.variables, "place '" + p.name + "'", out);
    }
  }

  for (const auto& a : net.arcs) {
    if (a.place >= net.places.size() || a.transition >= net.transitions.size()) {
      out.push_back("arc refers to a missing element");
      continue;
    }
    const auto& p = net.places[a.place];
    const auto& t = net.transitions[a.transition];
    std::string where = a.direction == ArcDirection::input ? "arc " + p.name + " -> " + t.name
                                                            : "arc " + t.name + " -> " + p.name;
    if (a.inscription.empty()) out.push_back(where + ": empty inscription");
    for (const auto& term : a.inscription) check_inscription_term(term, p.sort, sig, net.variables, where, out);
  }

  for (std::size_t ti = 0; ti < net.transitions.size(); ++ti) {
    const auto& t = net.transitions[ti];
    try {
      check_guard(t.guard, sig, net.variables);
    } catch (const SortError& e) {
      out.push_back("transition '" + t.name + "': " + e.what());
    }
    std::set<std::string> bound(t.free_vars.begin(), t.free_vars.end());
    for (const auto& v : t.free_vars)
      if (!net.variables.count(v)) out.push_back("transition '" + t.name + "': free variable '" + v + "' is undeclared");
    std::set<std::string> needed;
    for (const auto& a : net.arcs) {
      if (a.transition != ti) continue;
      for (const auto& term : a.inscription) term.collect_variables(a.direction == ArcDirection::input ? bound : needed);
    }
    t.guard.collect_variables(needed);
    for (const auto& v : needed)
      if (!bound.count(v))
        out.push_back("transition '" + t.name + "': variable '" + v +
                      "' occurs in an output or guard but neither in an input nor as free");
    std::set<std::string> all = bound;
    all.insert(needed.begin(), needed.end());
    for (const auto& v : all)
      if (!net.variables.count(v)) out.push_back("transition '" + t.name + "': undeclared variable '" + v + "'");
  }
  return out;
}

std::string marking_str(const SchematicNet& net, const Marking& m) {
  std::string out;
  for (std::size_t i = 0; i < net.places.size() && i < m.size(); ++i) {
    if (m[i].empty()) continue;
    if (!out.empty()) out += "; ";
    out += net.places[i].name + ": " + multiset_str(m[i]);
  }
  return out.empty() ? "<empty>" : out;
}

std::vector<std::pair<std::size_t, Multiset>> arc_tokens(const SchematicNet& net, std::size_t transition,
                                                         ArcDirection dir, const Binding& b, const Structure& s) {
  std::map<std::size_t, Multiset> per_place;
  for (const auto* a : net.arcs_of(transition, dir)) multiset_add(per_place[a->place], evaluate_inscription(a->inscription, s, b));
  return {per_place.begin(), per_place.end()};
}

namespace {

bool match_pattern(const Term& pattern, const Value& v, Binding& b) {
  if (pattern.kind() == Term::Kind::variable) {
    auto [it, inserted] = b.emplace(pattern.name(), v);
    return inserted || it->second == v;
  }
  if (!v.is_tuple() || v.size() != pattern.args().size()) return false;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!match_pattern(pattern.args()[i], v.elements()[i], b)) return false;
  return true;
}

bool binding_fits(const std::vector<std::pair<std::string, Sort>>& vars, const Binding& b, const Structure& s) {
  if (b.size() != vars.size()) return false;
  for (const auto& [name, sort] : vars) {
    auto it = b.find(name);
    if (it == b.end() || !in_sort(it->second, sort, s)) return false;
  }
  return true;
}

bool inputs_and_guard_hold(const SchematicNet& net, const Marking& m, std::size_t transition, const Binding& b,
                           const Structure& s) {
  try {
    if (!eval_guard(net.transitions[transition].guard, s, b)) return false;
    for (const auto& [place, tokens] : arc_tokens(net, transition, ArcDirection::input, b, s))
      if (!multiset_includes(m.at(place), tokens)) return false;
  } catch (const EvalError&) {
    return false;
  }
  return true;
}

}  // namespace

bool is_enabled(const SchematicNet& net, const Marking& m, std::size_t transition, const Binding& b,
                const Structure& s) {
  if (transition >= net.transitions.size()) return false;
  if (!binding_fits(net.variables_of(transition), b, s)) return false;
  return inputs_and_guard_hold(net, m, transition, b, s);
}

std::vector<Binding> enabled_bindings(const SchematicNet& net, const Marking& m, std::size_t transition,
                                      const Structure& s, const FiringOptions& opt) {
  const auto vars = net.variables_of(transition);

  // Token matching narrows the candidates for variables that occur in plain
  // input patterns; the remaining variables range over their carriers.
  std::vector<std::pair<std::size_t, const Term*>> patterns;
  for (const auto* a : net.arcs_of(transition, ArcDirection::input))
    for (const auto& t : a->inscription)
      if (!t.is_elm() && t.is_pattern()) patterns.emplace_back(a->place, &t);

  std::set<Binding> found;
  auto complete = [&](const Binding& partial) {
    std::vector<std::pair<std::string, Sort>> rest;
    for (const auto& v : vars)
      if (!partial.count(v.first)) rest.push_back(v);
    for (const auto& [name, value] : partial) {
      auto it = std::find_if(vars.begin(), vars.end(), [&](const auto& v) { return v.first == name; });
      if (it == vars.end() || !in_sort(value, it->second, s)) return;
    }
    for_each_binding(
        rest, s,
        [&](const Binding& extra) {
          Binding b = partial;
          b.insert(extra.begin(), extra.end());
          if (inputs_and_guard_hold(net, m, transition, b, s)) found.insert(b);
          return true;
        },
        opt.powerset_cap);
  };

  std::function<void(std::size_t, const Binding&)> search = [&](std::size_t i, const Binding& partial) {
    if (i == patterns.size()) {
      complete(partial);
      return;
    }
    const auto& [place, term] = patterns[i];
    for (const auto& [value, count] : m.at(place)) {
      Binding next = partial;
      if (match_pattern(*term, value, next)) search(i + 1, next);
    }
  };
  search(0, {});
  return {found.begin(), found.end()};
}

Marking fire(const SchematicNet& net, const Marking& m, std::size_t transition, const Binding& b,
             const Structure& s) {
  if (!is_enabled(net, m, transition, b, s)) {
    std::string name = transition < net.transitions.size() ? net.transitions[transition].name : "?";
    throw FiringError("transition '" + name + "' is not enabled under " + binding_str(b));
  }
  Marking next = m;
  for (const auto& [place, tokens] : arc_tokens(net, transition, ArcDirection::input, b, s))
    multiset_subtract(next[place], tokens);
  try {
    for (const auto& [place, tokens] : arc_tokens(net, transition, ArcDirection::output, b, s))
      multiset_add(next[place], tokens);
  } catch (const EvalError& e) {
    throw FiringError("output of '" + net.transitions[transition].name + "' cannot be evaluated: " + e.what());
  }
  return next;
}

std::vector<Successor> successors(const SchematicNet& net, const Marking& m, const Structure& s,
                                  const FiringOptions& opt) {
  std::vector<Successor> out;
  for (std::size_t t = 0; t < net.transitions.size(); ++t)
    for (auto& b : enabled_bindings(net, m, t, s, opt)) {
      Marking next = fire(net, m, t, b, s);
      out.push_back({t, std::move(b), std::move(next)});
    }
  return out;
}

}  // namespace hk
