#include "hk/run.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "hk/error.hpp"

namespace hk {

std::vector<std::size_t> Run::preset(std::size_t event) const {
  std::vector<std::size_t> out;
  for (const auto& [c, e] : consumes)
    if (e == event) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> Run::postset(std::size_t event) const {
  std::vector<std::size_t> out;
  for (const auto& [e, c] : produces)
    if (e == event) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> Run::initial_conditions() const {
  std::vector<bool> produced(conditions.size(), false);
  for (const auto& [e, c] : produces)
    if (c < produced.size()) produced[c] = true;
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < conditions.size(); ++c)
    if (!produced[c]) out.push_back(c);
  return out;
}

std::vector<std::size_t> Run::final_conditions() const {
  std::vector<bool> consumed(conditions.size(), false);
  for (const auto& [c, e] : consumes)
    if (c < consumed.size()) consumed[c] = true;
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < conditions.size(); ++c)
    if (!consumed[c]) out.push_back(c);
  return out;
}

std::size_t Run::event_index(const std::string& id) const {
  for (std::size_t i = 0; i < events.size(); ++i)
    if (events[i].id == id) return i;
  throw RunError("unknown event '" + id + "'");
}

std::string condition_label(const std::string& place, const Value& value) { return place + "=" + value.str(); }

void expose_cuts(Run& r) {
  auto expose = [&](const std::vector<std::size_t>& conds) {
    std::vector<InterfaceElement> side;
    std::map<std::string, int> seen;
    for (auto c : conds) {
      std::string label = condition_label(r.conditions[c].place, r.conditions[c].value);
      int k = ++seen[label];
      if (k > 1) label += "#" + std::to_string(k);
      side.push_back({ElementKind::place, label, c});
    }
    return side;
  };
  r.left = expose(r.initial_conditions());
  r.right = expose(r.final_conditions());
}

std::vector<std::string> run_structure_problems(const Run& r) {
  std::vector<std::string> out;
  const std::size_t nc = r.conditions.size(), ne = r.events.size();
  std::vector<int> producers(nc, 0), consumers(nc, 0);
  for (const auto& [c, e] : r.consumes) {
    if (c >= nc || e >= ne) {
      out.push_back("flow arc refers to a missing node");
      continue;
    }
    ++consumers[c];
  }
  for (const auto& [e, c] : r.produces) {
    if (c >= nc || e >= ne) {
      out.push_back("flow arc refers to a missing node");
      continue;
    }
    ++producers[c];
  }
  for (std::size_t c = 0; c < nc; ++c) {
    if (consumers[c] > 1) out.push_back("condition " + r.conditions[c].id + " is consumed by " + std::to_string(consumers[c]) + " events (branching)");
    if (producers[c] > 1) out.push_back("condition " + r.conditions[c].id + " is produced by " + std::to_string(producers[c]) + " events (branching)");
  }
  std::set<std::string> ids;
  for (const auto& c : r.conditions)
    if (!ids.insert(c.id).second) out.push_back("duplicate node id '" + c.id + "'");
  for (const auto& e : r.events)
    if (!ids.insert(e.id).second) out.push_back("duplicate node id '" + e.id + "'");
  if (!out.empty()) return out;

  // Kahn on events; conditions are unbranched so event order decides acyclicity.
  std::vector<std::vector<std::size_t>> succ(ne);
  std::vector<int> indeg(ne, 0);
  std::vector<long> producer_of(nc, -1);
  for (const auto& [e, c] : r.produces) producer_of[c] = static_cast<long>(e);
  for (const auto& [c, e] : r.consumes) {
    if (producer_of[c] < 0) continue;
    succ[producer_of[c]].push_back(e);
    ++indeg[e];
  }
  std::vector<std::size_t> ready;
  for (std::size_t e = 0; e < ne; ++e)
    if (indeg[e] == 0) ready.push_back(e);
  std::size_t visited = 0;
  while (!ready.empty()) {
    auto e = ready.back();
    ready.pop_back();
    ++visited;
    for (auto f : succ[e])
      if (--indeg[f] == 0) ready.push_back(f);
  }
  if (visited != ne) out.push_back("flow relation is cyclic");

  for (Side side : {Side::left, Side::right}) {
    const auto& iface = side == Side::left ? r.left : r.right;
    const char* name = side == Side::left ? "left" : "right";
    std::set<std::pair<ElementKind, std::string>> labels;
    for (const auto& el : iface) {
      std::size_t limit = el.kind == ElementKind::place ? nc : ne;
      if (el.element >= limit) out.push_back(std::string(name) + " interface label '" + el.label + "' refers to a missing node");
      if (!labels.insert({el.kind, el.label}).second)
        out.push_back(std::string(name) + " interface has duplicate label '" + el.label + "'");
    }
  }
  return out;
}

std::string step_str(const Step& s) { return s.transition + " " + binding_str(s.binding); }

namespace {

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  // rejection sampling keeps the choice exactly uniform and platform independent
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % n;
}

}  // namespace

Run simulate(const System& sys, const SchedulingPolicy& policy) {
  const auto& net = sys.net();
  Run run;
  run.name = sys.name + "_run";
  // per place: value -> ascending condition ids currently holding that token
  std::vector<std::map<Value, std::vector<std::size_t>>> cut(net.places.size());
  // initial tokens get a condition only once an event consumes them
  Marking untouched = sys.initial;
  auto add_condition = [&](std::size_t place, const Value& v) {
    std::size_t id = run.conditions.size();
    run.conditions.push_back({"c" + std::to_string(id + 1), net.places[place].name, v});
    cut[place][v].push_back(id);
    return id;
  };

  std::mt19937_64 rng(policy.seed);
  Marking m = sys.initial;
  for (std::size_t step = 0; step < policy.step_limit; ++step) {
    std::size_t t;
    Binding b;
    if (policy.mode == SchedulingPolicy::Mode::script) {
      if (step >= policy.script.size()) break;
      const auto& s = policy.script[step];
      auto idx = net.find_transition(s.transition);
      if (!idx) throw RunError("script step " + std::to_string(step + 1) + ": unknown transition '" + s.transition + "'");
      if (!is_enabled(net, m, *idx, s.binding, *sys.structure))
        throw RunError("script step " + std::to_string(step + 1) + ": " + step_str(s) + " is not enabled");
      t = *idx;
      b = s.binding;
    } else {
      auto succ = sys.successors(m);
      if (succ.empty()) break;
      auto& chosen = succ[uniform_index(rng, succ.size())];
      t = chosen.transition;
      b = std::move(chosen.binding);
    }

    std::size_t event = run.events.size();
    run.events.push_back({"e" + std::to_string(event + 1), net.transitions[t].name, b});
    for (const auto& [place, tokens] : arc_tokens(net, t, ArcDirection::input, b, *sys.structure))
      for (const auto& [v, n] : tokens)
        for (std::size_t k = 0; k < n; ++k) {
          if (auto it = untouched[place].find(v); it != untouched[place].end()) {
            // untouched initial tokens are older than every recorded condition
            add_condition(place, v);
            if (--it->second == 0) untouched[place].erase(it);
            auto& holders = cut[place][v];
            std::rotate(holders.begin(), holders.end() - 1, holders.end());
          }
          auto& holders = cut[place][v];
          run.consumes.emplace_back(holders.front(), event);
          holders.erase(holders.begin());
          if (holders.empty()) cut[place].erase(v);
        }
    for (const auto& [place, tokens] : arc_tokens(net, t, ArcDirection::output, b, *sys.structure))
      for (const auto& [v, n] : tokens)
        for (std::size_t k = 0; k < n; ++k) run.produces.emplace_back(event, add_condition(place, v));
    m = sys.fire(m, t, b);
  }
  expose_cuts(run);
  return run;
}

std::vector<std::string> validate_run(const Run& r, const System& sys) {
  auto out = run_structure_problems(r);
  if (!out.empty()) return out;
  const auto& net = sys.net();
  const auto& s = *sys.structure;

  for (const auto& c : r.conditions) {
    auto p = net.find_place(c.place);
    if (!p)
      out.push_back("condition " + c.id + ": unknown place '" + c.place + "'");
    else if (net.places[*p].sort && !in_sort(c.value, *net.places[*p].sort, s))
      out.push_back("condition " + c.id + ": value " + c.value.str() + " is not in " + net.places[*p].sort->str());
  }
  if (!out.empty()) return out;

  auto conditions_as_tokens = [&](const std::vector<std::size_t>& conds) {
    std::map<std::size_t, Multiset> tokens;
    for (auto c : conds) multiset_add(tokens[*net.find_place(r.conditions[c].place)], r.conditions[c].value);
    return tokens;
  };
  auto expected_tokens = [&](std::size_t t, ArcDirection dir, const Binding& b) {
    std::map<std::size_t, Multiset> tokens;
    for (auto& [p, ms] : arc_tokens(net, t, dir, b, s))
      if (!ms.empty()) tokens[p] = std::move(ms);
    return tokens;
  };

  for (std::size_t e = 0; e < r.events.size(); ++e) {
    const auto& ev = r.events[e];
    auto t = net.find_transition(ev.transition);
    if (!t) {
      out.push_back("event " + ev.id + ": unknown transition '" + ev.transition + "'");
      continue;
    }
    auto vars = net.variables_of(*t);
    bool binding_ok = ev.binding.size() == vars.size();
    for (const auto& [name, sort] : vars) {
      auto it = ev.binding.find(name);
      if (it == ev.binding.end()) {
        out.push_back("event " + ev.id + ": variable '" + name + "' is unbound");
        binding_ok = false;
      } else if (!in_sort(it->second, sort, s)) {
        out.push_back("event " + ev.id + ": " + name + " = " + it->second.str() + " is not in " + sort.str());
        binding_ok = false;
      }
    }
    if (ev.binding.size() != vars.size()) out.push_back("event " + ev.id + ": binding has extra variables");
    if (!binding_ok) continue;
    try {
      if (!eval_guard(net.transitions[*t].guard, s, ev.binding))
        out.push_back("event " + ev.id + ": guard " + net.transitions[*t].guard.str() + " is false under " +
                      binding_str(ev.binding));
      if (conditions_as_tokens(r.preset(e)) != expected_tokens(*t, ArcDirection::input, ev.binding))
        out.push_back("event " + ev.id + ": preset does not match the input inscriptions of '" + ev.transition + "'");
      if (conditions_as_tokens(r.postset(e)) != expected_tokens(*t, ArcDirection::output, ev.binding))
        out.push_back("event " + ev.id + ": postset does not match the output inscriptions of '" + ev.transition + "'");
    } catch (const EvalError& err) {
      out.push_back("event " + ev.id + ": " + err.what());
    }
  }

  auto initial = conditions_as_tokens(r.initial_conditions());
  for (const auto& [p, tokens] : initial)
    if (!multiset_includes(sys.initial[p], tokens))
      out.push_back("initial cut on place '" + net.places[p].name + "' is not part of the initial marking");
  return out;
}

Run compose_runs(const Run& a, const Run& b) {
  FusionPlan plan = plan_fusion(a.left, a.right, a.conditions.size(), a.events.size(), b.left, b.right,
                                b.conditions.size(), b.events.size());
  for (const auto& [ai, bi] : plan.fused_places) {
    const auto& x = a.conditions[ai];
    const auto& y = b.conditions[bi];
    if (x.place != y.place || x.value != y.value)
      throw RunError("fused conditions carry different tokens: " + condition_label(x.place, x.value) + " vs " +
                     condition_label(y.place, y.value));
  }
  for (const auto& [ai, bi] : plan.fused_transitions) {
    const auto& x = a.events[ai];
    const auto& y = b.events[bi];
    if (x.transition != y.transition || x.binding != y.binding)
      throw RunError("fused events differ: " + x.transition + " vs " + y.transition);
  }

  Run out;
  out.name = a.name.empty() ? b.name : (b.name.empty() ? a.name : a.name + "_" + b.name);
  out.conditions = a.conditions;
  out.events = a.events;
  out.conditions.resize(a.conditions.size() + b.conditions.size() - plan.fused_places.size());
  out.events.resize(a.events.size() + b.events.size() - plan.fused_transitions.size());
  for (std::size_t i = 0; i < b.conditions.size(); ++i)
    if (plan.place_map[i] >= a.conditions.size()) out.conditions[plan.place_map[i]] = b.conditions[i];
  for (std::size_t i = 0; i < b.events.size(); ++i)
    if (plan.transition_map[i] >= a.events.size()) out.events[plan.transition_map[i]] = b.events[i];

  std::set<std::pair<std::size_t, std::size_t>> consumes(a.consumes.begin(), a.consumes.end());
  std::set<std::pair<std::size_t, std::size_t>> produces(a.produces.begin(), a.produces.end());
  for (const auto& [c, e] : b.consumes) consumes.emplace(plan.place_map[c], plan.transition_map[e]);
  for (const auto& [e, c] : b.produces) produces.emplace(plan.transition_map[e], plan.place_map[c]);
  out.consumes.assign(consumes.begin(), consumes.end());
  out.produces.assign(produces.begin(), produces.end());
  out.left = std::move(plan.left);
  out.right = std::move(plan.right);
  for (std::size_t i = 0; i < out.conditions.size(); ++i) out.conditions[i].id = "c" + std::to_string(i + 1);
  for (std::size_t i = 0; i < out.events.size(); ++i) out.events[i].id = "e" + std::to_string(i + 1);

  auto problems = run_structure_problems(out);
  if (!problems.empty()) throw RunError("composition is not a run: " + problems.front());
  return out;
}

std::vector<Step> linearize(const Run& r, std::uint64_t seed) {
  const std::size_t ne = r.events.size();
  std::vector<long> producer_of(r.conditions.size(), -1);
  for (const auto& [e, c] : r.produces) producer_of.at(c) = static_cast<long>(e);
  std::vector<std::vector<std::size_t>> succ(ne);
  std::vector<int> indeg(ne, 0);
  for (const auto& [c, e] : r.consumes)
    if (producer_of.at(c) >= 0) {
      succ[producer_of[c]].push_back(e);
      ++indeg[e];
    }
  std::vector<std::size_t> ready;
  for (std::size_t e = 0; e < ne; ++e)
    if (indeg[e] == 0) ready.push_back(e);
  std::mt19937_64 rng(seed);
  std::vector<Step> out;
  while (!ready.empty()) {
    std::size_t k = uniform_index(rng, ready.size());
    std::size_t e = ready[k];
    ready.erase(ready.begin() + static_cast<long>(k));
    out.push_back({r.events[e].transition, r.events[e].binding});
    for (auto f : succ[e])
      if (--indeg[f] == 0) ready.insert(std::lower_bound(ready.begin(), ready.end(), f), f);
  }
  if (out.size() != ne) throw RunError("run '" + r.name + "' is cyclic");
  return out;
}

std::string to_string(Order o) {
  switch (o) {
    case Order::before: return "before";
    case Order::after: return "after";
    case Order::independent: return "independent";
  }
  return "?";
}

Order ordered(const Run& r, std::size_t e1, std::size_t e2) {
  if (e1 >= r.events.size() || e2 >= r.events.size()) throw RunError("unknown event");
  if (e1 == e2) return Order::before;
  std::vector<std::vector<std::size_t>> succ(r.events.size());
  std::vector<long> producer_of(r.conditions.size(), -1);
  for (const auto& [e, c] : r.produces) producer_of.at(c) = static_cast<long>(e);
  for (const auto& [c, e] : r.consumes)
    if (producer_of.at(c) >= 0) succ[producer_of[c]].push_back(e);
  auto reaches = [&](std::size_t from, std::size_t to) {
    std::vector<bool> seen(r.events.size(), false);
    std::vector<std::size_t> stack{from};
    while (!stack.empty()) {
      auto e = stack.back();
      stack.pop_back();
      if (e == to) return true;
      if (seen[e]) continue;
      seen[e] = true;
      for (auto f : succ[e]) stack.push_back(f);
    }
    return false;
  };
  if (reaches(e1, e2)) return Order::before;
  if (reaches(e2, e1)) return Order::after;
  return Order::independent;
}

Marking replay(const System& sys, const std::vector<Step>& steps) {
  Marking m = sys.initial;
  for (const auto& s : steps) m = sys.fire(m, sys.transition_index(s.transition), s.binding);
  return m;
}

Marking final_marking(const Run& r, const System& sys) {
  Marking m = sys.initial;
  for (auto c : r.initial_conditions()) {
    Multiset one;
    one.emplace(r.conditions[c].value, 1);
    multiset_subtract(m.at(sys.place_index(r.conditions[c].place)), one);
  }
  for (auto c : r.final_conditions()) multiset_add(m.at(sys.place_index(r.conditions[c].place)), r.conditions[c].value);
  return m;
}

LabeledGraph run_graph(const Run& r) {
  LabeledGraph g;
  const std::size_t nc = r.conditions.size();
  std::vector<std::vector<std::string>> iface(nc + r.events.size());
  for (Side side : {Side::left, Side::right})
    for (const auto& el : side == Side::left ? r.left : r.right) {
      std::size_t node = el.kind == ElementKind::place ? el.element : nc + el.element;
      if (node < iface.size()) iface[node].push_back((side == Side::left ? "L:" : "R:") + el.label);
    }
  auto attrs = [&](std::size_t node) {
    auto v = iface[node];
    std::sort(v.begin(), v.end());
    std::string s;
    for (const auto& x : v) s += "|" + x;
    return s;
  };
  for (std::size_t c = 0; c < nc; ++c)
    g.nodes.push_back("C|" + condition_label(r.conditions[c].place, r.conditions[c].value) + attrs(c));
  for (std::size_t e = 0; e < r.events.size(); ++e)
    g.nodes.push_back("E|" + r.events[e].transition + " " + binding_str(r.events[e].binding) + attrs(nc + e));
  for (const auto& [c, e] : r.consumes) g.edges.push_back({c, nc + e, ""});
  for (const auto& [e, c] : r.produces) g.edges.push_back({nc + e, c, ""});
  return g;
}

std::string canonicalize(const Run& r) { return canonical_form(run_graph(r)); }

}  // namespace hk
