#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "hk/error.hpp"

namespace hk::test {

std::filesystem::path corpus_dir() { return HK_CORPUS_DIR; }
std::filesystem::path corpus(const std::string& file) { return corpus_dir() / file; }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::shared_ptr<const Module> branch_module() {
  io::Loader loader;
  Module m = io::as_module(loader.load(corpus("entry.hk")));
  m = compose(m, io::as_module(loader.load(corpus("guest_area.hk"))));
  m = compose(m, io::as_module(loader.load(corpus("kitchen.hk"))));
  m.name = "branch";
  return std::make_shared<const Module>(std::move(m));
}

std::shared_ptr<const Structure> s0() {
  io::Loader loader;
  return std::make_shared<const Structure>(io::as_structure(loader.load(corpus("s0.hks"))));
}

System branch_system(std::shared_ptr<const Structure> s) { return instantiate(branch_module(), std::move(s), "branch"); }
System branch_system() { return branch_system(s0()); }

std::shared_ptr<const Structure> restricted_s0(std::size_t tables, std::size_t clients, std::size_t items) {
  static const std::vector<std::string> all_tables{"t1", "t2", "t3", "t4"};
  static const std::vector<std::string> all_clients{"Alice", "Bob", "Carol"};
  static const std::vector<std::string> all_items{"rice", "meat", "salad"};
  auto atoms = [](const std::vector<std::string>& names, std::size_t n, const std::string& suffix = "") {
    std::vector<Value> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(Value::atom(names.at(i) + suffix));
    return out;
  };
  std::map<std::string, std::vector<Value>> keep{
      {"Tables", atoms(all_tables, tables)},
      {"Clients", atoms(all_clients, clients)},
      {"Menu", atoms(all_items, items)},
      {"Meal_items", atoms(all_items, items, "_portion")},
  };
  return std::make_shared<const Structure>(restrict_structure(*s0(), keep, "S0_restricted"));
}

std::vector<Step> a0_script() { return io::parse_steps(read_file(corpus("a0.steps"))); }

std::vector<Binding> brute_force_bindings(const SchematicNet& net, const Marking& m, std::size_t t,
                                          const Structure& s) {
  auto vars = net.variables_of(t);
  std::vector<std::vector<Value>> domains;
  for (const auto& [name, sort] : vars) domains.push_back(sort_carrier(sort, s).elements());
  std::vector<Binding> out;
  for (const auto& d : domains)
    if (d.empty()) return out;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Binding b;
    for (std::size_t i = 0; i < vars.size(); ++i) b[vars[i].first] = domains[i][idx[i]];
    bool ok = true;
    try {
      ok = eval_guard(net.transitions[t].guard, s, b);
      std::map<std::size_t, Multiset> need;
      for (const auto& arc : net.arcs)
        if (ok && arc.transition == t && arc.direction == ArcDirection::input)
          for (const auto& term : arc.inscription) {
            if (term.is_elm()) {
              for (const auto& e : evaluate(term.inner(), s, b).elements()) ++need[arc.place][e];
            } else {
              ++need[arc.place][evaluate(term, s, b)];
            }
          }
      for (const auto& [p, ms] : need)
        for (const auto& [v, n] : ms) {
          auto it = m[p].find(v);
          if (it == m[p].end() || it->second < n) ok = false;
        }
    } catch (const EvalError&) {
      ok = false;
    }
    if (ok) out.push_back(b);
    std::size_t k = vars.size();
    while (k > 0) {
      --k;
      if (++idx[k] < domains[k].size()) break;
      idx[k] = 0;
      if (k == 0) {
        std::sort(out.begin(), out.end());
        return out;
      }
    }
    if (vars.empty()) return out;
  }
}

bool brute_force_isomorphic(const LabeledGraph& a, const LabeledGraph& b) {
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
  using E = std::tuple<std::size_t, std::size_t, std::string>;
  std::multiset<E> eb;
  for (const auto& e : b.edges) eb.emplace(e.from, e.to, e.label);
  std::vector<std::size_t> perm(a.nodes.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < perm.size() && ok; ++i) ok = a.nodes[i] == b.nodes[perm[i]];
    if (!ok) continue;
    std::multiset<E> ea;
    for (const auto& e : a.edges) ea.emplace(perm[e.from], perm[e.to], e.label);
    if (ea == eb) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::shared_ptr<const Signature> toy_signature() {
  static const auto sig = [] {
    auto s = std::make_shared<Signature>("Toy");
    s->add_set("A");
    s->add_set("B");
    s->add_subset({"C", "A"});
    s->add_constant({"a0", Sort::named("A")});
    s->add_function({"h", {Sort::named("A")}, Sort::named("B")});
    return std::shared_ptr<const Signature>(s);
  }();
  return sig;
}

std::shared_ptr<const Structure> toy_structure(std::size_t a_size, std::size_t b_size) {
  auto s = std::make_shared<Structure>("T" + std::to_string(a_size) + "x" + std::to_string(b_size), toy_signature());
  std::vector<Value> as, bs;
  for (std::size_t i = 1; i <= a_size; ++i) as.push_back(Value::atom("a" + std::to_string(i)));
  for (std::size_t i = 1; i <= b_size; ++i) bs.push_back(Value::atom("b" + std::to_string(i)));
  s->set_carrier("A", Value::set(as));
  s->set_carrier("B", Value::set(bs));
  s->set_carrier("C", Value::set(powerset(Value::set(as))));
  s->set_constant("a0", as.front());
  Structure::FunctionTable h;
  for (std::size_t i = 0; i < as.size(); ++i) h[as[i]] = bs[i % bs.size()];
  s->set_function("h", h);
  return s;
}

namespace {

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::size_t between(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

const std::vector<Sort>& toy_sorts() {
  static const std::vector<Sort> sorts{Sort::named("A"), Sort::named("B"),
                                       Sort::tuple({Sort::named("A"), Sort::named("B")})};
  return sorts;
}

Term var(const std::string& n) { return Term::variable(n); }

Term random_inscription(std::mt19937_64& rng, const Sort& sort) {
  if (sort == toy_sorts()[0]) {
    switch (between(rng, 0, 3)) {
      case 0: return var("x");
      case 1: return var("z");
      case 2: return Term::constant("a0");
      default: return Term::elm(var("X"));
    }
  }
  if (sort == toy_sorts()[1]) return coin(rng, 0.5) ? var("y") : Term::apply("h", {var("x")});
  return coin(rng, 0.5) ? Term::tuple({var("x"), var("y")}) : Term::tuple({var("z"), Term::apply("h", {var("z")})});
}

Term random_init(std::mt19937_64& rng, const Sort& sort) {
  if (sort == toy_sorts()[0]) return coin(rng, 0.5) ? Term::constant("a0") : Term::elm(Term::set_symbol("A"));
  if (sort == toy_sorts()[1]) return Term::apply("h", {Term::constant("a0")});
  return Term::tuple({Term::constant("a0"), Term::apply("h", {Term::constant("a0")})});
}

Guard random_guard(std::mt19937_64& rng) {
  switch (between(rng, 0, 4)) {
    case 0: return {{{GuardAtom::Op::equal, var("x"), Term::constant("a0")}}};
    case 1: return {{{GuardAtom::Op::equal, Term::apply("h", {var("x")}), var("y")}}};
    case 2: return {{{GuardAtom::Op::member, var("z"), var("X")}}};
    default: return {};
  }
}

// Label i: even -> place with sort i/2 % 3, odd -> transition.
const std::vector<std::string>& label_pool() {
  static const std::vector<std::string> labels{"in", "go", "mid", "step", "out", "done", "aux", "sync"};
  return labels;
}

}  // namespace

Module random_module(std::mt19937_64& rng, const std::string& name, LabelPool& pool) {
  Module m;
  m.name = name;
  m.signature = toy_signature();
  auto& net = m.net;
  net.variables = {{"x", Sort::named("A")}, {"y", Sort::named("B")}, {"z", Sort::named("A")}, {"X", Sort::named("C")}};

  std::vector<std::string> place_names{"p", "q", "r", "s", "buffer"};
  std::shuffle(place_names.begin(), place_names.end(), rng);
  std::size_t np = between(rng, 0, 4);
  for (std::size_t i = 0; i < np; ++i) {
    Place p{place_names[i], pick(rng, toy_sorts()), {}};
    if (coin(rng, 0.25)) p.init.push_back(random_init(rng, *p.sort));
    net.places.push_back(std::move(p));
  }
  std::vector<std::string> trans_names{"t", "u", "v", "fire"};
  std::shuffle(trans_names.begin(), trans_names.end(), rng);
  std::size_t nt = between(rng, 0, 3);
  for (std::size_t i = 0; i < nt; ++i) net.transitions.push_back({trans_names[i], random_guard(rng), {}});
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t t = 0; t < nt; ++t) {
      if (!coin(rng, 0.45)) continue;
      auto dir = coin(rng, 0.5) ? ArcDirection::input : ArcDirection::output;
      std::vector<Term> ins{random_inscription(rng, *net.places[p].sort)};
      if (coin(rng, 0.2)) ins.push_back(random_inscription(rng, *net.places[p].sort));
      net.arcs.push_back({p, t, dir, std::move(ins)});
    }
  // every variable that no input arc binds is chosen freely
  for (std::size_t t = 0; t < nt; ++t) {
    std::set<std::string> used, bound;
    net.transitions[t].guard.collect_variables(used);
    for (const auto& a : net.arcs)
      if (a.transition == t)
        for (const auto& term : a.inscription) {
          term.collect_variables(used);
          if (a.direction == ArcDirection::input) term.collect_variables(bound);
        }
    for (const auto& v : used)
      if (!bound.count(v)) net.transitions[t].free_vars.push_back(v);
  }

  for (Side side : {Side::left, Side::right}) {
    auto& used = side == Side::left ? pool.used_left : pool.used_right;
    auto& iface = side == Side::left ? m.left : m.right;
    std::set<std::pair<ElementKind, std::size_t>> exposed;
    std::size_t want = between(rng, 0, 3);
    for (std::size_t k = 0; k < want; ++k) {
      std::size_t li = between(rng, 0, label_pool().size() - 1);
      const auto& label = label_pool()[li];
      if (used.count(label)) continue;
      std::vector<std::size_t> candidates;
      ElementKind kind = li % 2 == 0 ? ElementKind::place : ElementKind::transition;
      if (kind == ElementKind::place) {
        for (std::size_t p = 0; p < np; ++p)
          if (*net.places[p].sort == toy_sorts()[(li / 2) % 3] && !exposed.count({kind, p})) candidates.push_back(p);
      } else {
        for (std::size_t t = 0; t < nt; ++t)
          if (!exposed.count({kind, t})) candidates.push_back(t);
      }
      if (candidates.empty()) continue;
      std::size_t el = pick(rng, candidates);
      exposed.insert({kind, el});
      used.insert(label);
      iface.push_back({kind, label, el});
    }
  }
  m.normalize();
  return m;
}

namespace {

Value random_value(std::mt19937_64& rng, int depth = 0) {
  static const std::vector<std::string> atoms{"a", "b", "c", "t1", "Alice", "x_2"};
  switch (depth > 1 ? 0 : between(rng, 0, 3)) {
    case 0:
    case 1: return Value::atom(pick(rng, atoms));
    case 2: {
      std::vector<Value> elems;
      for (std::size_t i = between(rng, 0, 3); i > 0; --i) elems.push_back(random_value(rng, depth + 1));
      return Value::set(std::move(elems));
    }
    default: {
      std::vector<Value> elems;
      for (std::size_t i = between(rng, 2, 3); i > 0; --i) elems.push_back(random_value(rng, depth + 1));
      return Value::tuple(std::move(elems));
    }
  }
}

Signature random_signature(std::mt19937_64& rng) {
  static const std::vector<std::string> names{"Alpha", "Beta", "Gamma", "Delta", "Eps", "Zeta", "Eta", "Theta"};
  std::vector<std::string> pool = names;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::size_t next = 0;
  Signature sig("Sig" + std::to_string(between(rng, 0, 99)));
  std::vector<std::string> sets;
  for (std::size_t i = between(rng, 1, 3); i > 0; --i) {
    sets.push_back(pool[next++]);
    sig.add_set(sets.back());
  }
  std::vector<Sort> sorts;
  for (const auto& s : sets) {
    sorts.push_back(Sort::named(s));
    sorts.push_back(Sort::power(s));
  }
  for (std::size_t i = between(rng, 0, 2); i > 0; --i) {
    std::string name = pool[next++];
    sig.add_subset({name, pick(rng, sets)});
    sorts.push_back(Sort::named(name));
  }
  if (coin(rng, 0.3)) sorts.push_back(Sort::tuple({pick(rng, sorts), pick(rng, sorts)}));
  for (std::size_t i = between(rng, 0, 2); i > 0; --i) sig.add_constant({"c" + std::to_string(i), pick(rng, sorts)});
  for (std::size_t i = between(rng, 0, 2); i > 0; --i) {
    std::vector<Sort> args{pick(rng, sorts)};
    if (coin(rng, 0.3)) args.push_back(pick(rng, sorts));
    sig.add_function({"f" + std::to_string(i), std::move(args), pick(rng, sorts)});
  }
  return sig;
}

}  // namespace

Run random_run(std::mt19937_64& rng) {
  static const std::vector<std::string> places{"p", "q", "waiting"};
  static const std::vector<std::string> transitions{"t", "u", "hand_over"};
  Run r;
  r.name = "R" + std::to_string(between(rng, 0, 99));
  std::vector<std::size_t> available;
  auto add_condition = [&]() {
    std::size_t id = r.conditions.size();
    r.conditions.push_back({"c" + std::to_string(id + 1), pick(rng, places), random_value(rng)});
    available.push_back(id);
    return id;
  };
  for (std::size_t i = between(rng, 1, 4); i > 0; --i) add_condition();
  for (std::size_t e = 0, ne = between(rng, 0, 4); e < ne; ++e) {
    Binding b;
    for (std::size_t k = between(rng, 0, 2); k > 0; --k) b["v" + std::to_string(k)] = random_value(rng);
    r.events.push_back({"e" + std::to_string(e + 1), pick(rng, transitions), std::move(b)});
    std::shuffle(available.begin(), available.end(), rng);
    for (std::size_t k = std::min<std::size_t>(available.size(), between(rng, 0, 2)); k > 0; --k) {
      r.consumes.emplace_back(available.back(), e);
      available.pop_back();
    }
    for (std::size_t k = between(rng, 0, 2); k > 0; --k) r.produces.emplace_back(e, add_condition());
  }
  expose_cuts(r);
  return r;
}

io::ModelDocument random_document(std::mt19937_64& rng, io::Scope& scope) {
  io::ModelDocument d;
  scope.signatures[toy_signature()->name()] = toy_signature();
  switch (between(rng, 0, 4)) {
    case 0:
      d.kind = io::DocumentKind::signature;
      d.body = random_signature(rng);
      break;
    case 1: {
      d.kind = io::DocumentKind::structure;
      auto s = *toy_structure(between(rng, 1, 3), between(rng, 1, 3));
      if (coin(rng, 0.5)) {
        // a subset carrier that is not the full powerset
        auto a = *s.carrier("A");
        s.set_carrier("C", Value::set({Value::set({}), Value::set({a.elements().front()})}));
      }
      d.body = std::move(s);
      break;
    }
    case 2: {
      LabelPool pool;
      d.kind = io::DocumentKind::module;
      d.body = random_module(rng, "M" + std::to_string(between(rng, 0, 99)), pool);
      if (coin(rng, 0.5)) d.includes.push_back("toy.hksig");
      break;
    }
    case 3: {
      LabelPool pool;
      auto m = std::make_shared<const Module>(random_module(rng, "M", pool));
      d = io::make_document(instantiate(m, toy_structure(between(rng, 1, 3), between(rng, 1, 2)), "sys"));
      break;
    }
    default:
      d.kind = io::DocumentKind::run;
      d.body = random_run(rng);
      break;
  }
  return d;
}

}  // namespace hk::test
