#include "hk/term.hpp"

#include <algorithm>

#include "hk/error.hpp"

namespace hk {

namespace {

std::string join(const std::vector<Term>& ts) {
  std::string out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ", ";
    out += ts[i].str();
  }
  return out;
}

}  // namespace

std::string Term::str() const {
  switch (kind_) {
    case Kind::variable:
    case Kind::constant:
    case Kind::set_symbol:
      return name_;
    case Kind::apply:
      return name_ + "(" + join(args_) + ")";
    case Kind::tuple:
      return "(" + join(args_) + ")";
    case Kind::set_literal:
      return "{" + join(args_) + "}";
    case Kind::elm:
      return "elm(" + args_.front().str() + ")";
  }
  return {};
}

void Term::collect_variables(std::set<std::string>& out) const {
  if (kind_ == Kind::variable) out.insert(name_);
  for (const auto& a : args_) a.collect_variables(out);
}

bool Term::is_pattern() const {
  if (kind_ == Kind::variable) return true;
  if (kind_ != Kind::tuple) return false;
  return std::all_of(args_.begin(), args_.end(), [](const Term& t) { return t.is_pattern(); });
}

std::string GuardAtom::str() const {
  switch (op) {
    case Op::truth: return "true";
    case Op::equal: return lhs.str() + " = " + rhs.str();
    case Op::member: return lhs.str() + " in " + rhs.str();
    case Op::subset: return lhs.str() + " <= " + rhs.str();
  }
  return {};
}

bool Guard::trivial() const {
  return std::all_of(atoms.begin(), atoms.end(), [](const GuardAtom& a) { return a.op == GuardAtom::Op::truth; });
}

std::string Guard::str() const {
  std::vector<std::string> parts;
  for (const auto& a : atoms)
    if (a.op != GuardAtom::Op::truth) parts.push_back(a.str());
  if (parts.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " and ";
    out += parts[i];
  }
  return out;
}

void Guard::collect_variables(std::set<std::string>& out) const {
  for (const auto& a : atoms) {
    a.lhs.collect_variables(out);
    a.rhs.collect_variables(out);
  }
}

Guard Guard::conjoin(const Guard& a, const Guard& b) {
  Guard out;
  for (const auto* g : {&a, &b})
    for (const auto& atom : g->atoms)
      if (atom.op != GuardAtom::Op::truth &&
          std::find(out.atoms.begin(), out.atoms.end(), atom) == out.atoms.end())
        out.atoms.push_back(atom);
  return out;
}

std::string binding_str(const Binding& b) {
  std::string out = "(";
  bool first = true;
  for (const auto& [k, v] : b) {
    if (!first) out += ", ";
    first = false;
    out += k + " = " + v.str();
  }
  return out + ")";
}

Sort sort_of(const Term& t, const Signature& sig, const VariableSorts& vars) {
  switch (t.kind()) {
    case Term::Kind::variable: {
      auto it = vars.find(t.name());
      if (it == vars.end()) throw SortError("undeclared variable '" + t.name() + "'");
      return it->second;
    }
    case Term::Kind::constant: {
      const auto* c = sig.find_constant(t.name());
      if (!c) throw SortError("unknown constant '" + t.name() + "'");
      return c->sort;
    }
    case Term::Kind::set_symbol:
      if (!sig.is_set(t.name())) throw SortError("'" + t.name() + "' is not a set symbol");
      return Sort::power(t.name());
    case Term::Kind::apply: {
      const auto* f = sig.find_function(t.name());
      if (!f) throw SortError("unknown function '" + t.name() + "'");
      if (f->arguments.size() != t.args().size())
        throw SortError("function '" + t.name() + "' expects " + std::to_string(f->arguments.size()) +
                        " argument(s), got " + std::to_string(t.args().size()));
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        Sort actual = sig.normalize(sort_of(t.args()[i], sig, vars));
        if (actual != sig.normalize(f->arguments[i]))
          throw SortError("argument " + std::to_string(i + 1) + " of '" + t.name() + "' has sort " + actual.str() +
                          ", expected " + f->arguments[i].str());
      }
      return f->result;
    }
    case Term::Kind::tuple: {
      if (t.args().size() < 2) throw SortError("tuples need at least two components");
      std::vector<Sort> parts;
      for (const auto& a : t.args()) parts.push_back(sort_of(a, sig, vars));
      return Sort::tuple(std::move(parts));
    }
    case Term::Kind::set_literal: {
      if (t.args().empty()) throw SortError("empty set literal has no sort");
      Sort first = sig.normalize(sort_of(t.args().front(), sig, vars));
      for (const auto& a : t.args())
        if (sig.normalize(sort_of(a, sig, vars)) != first)
          throw SortError("set literal " + t.str() + " mixes sorts");
      if (first.kind() != Sort::Kind::named || !sig.is_set(first.symbol()))
        throw SortError("set literal " + t.str() + " must contain elements of a set symbol");
      return Sort::power(first.symbol());
    }
    case Term::Kind::elm: {
      if (t.inner().is_elm()) throw SortError("elm may not be nested");
      Sort inner = sort_of(t.inner(), sig, vars);
      auto elem = sig.element_sort(inner);
      if (!elem) throw SortError("elm needs a set-sorted term, " + t.inner().str() + " has sort " + inner.str());
      return *elem;
    }
  }
  throw SortError("bad term");
}

void check_guard(const Guard& g, const Signature& sig, const VariableSorts& vars) {
  for (const auto& a : g.atoms) {
    if (a.op == GuardAtom::Op::truth) continue;
    if (a.lhs.is_elm() || a.rhs.is_elm()) throw SortError("elm is not allowed in guards: " + a.str());
    Sort l = sig.normalize(sort_of(a.lhs, sig, vars));
    Sort r = sig.normalize(sort_of(a.rhs, sig, vars));
    switch (a.op) {
      case GuardAtom::Op::equal:
        if (l != r) throw SortError("'" + a.str() + "' compares " + l.str() + " with " + r.str());
        break;
      case GuardAtom::Op::member:
        if (r.kind() != Sort::Kind::power || l != Sort::named(r.symbol()))
          throw SortError("'" + a.str() + "' needs a set-sorted right operand over " + l.str());
        break;
      case GuardAtom::Op::subset:
        if (l.kind() != Sort::Kind::power || r != l)
          throw SortError("'" + a.str() + "' needs set-sorted operands of the same sort");
        break;
      case GuardAtom::Op::truth:
        break;
    }
  }
}

Value evaluate(const Term& t, const Structure& s, const Binding& b) {
  switch (t.kind()) {
    case Term::Kind::variable: {
      auto it = b.find(t.name());
      if (it == b.end()) throw EvalError("unbound variable '" + t.name() + "'");
      return it->second;
    }
    case Term::Kind::constant: {
      const auto* v = s.constant(t.name());
      if (!v) throw EvalError("constant '" + t.name() + "' is not interpreted");
      return *v;
    }
    case Term::Kind::set_symbol: {
      const auto* v = s.carrier(t.name());
      if (!v) throw EvalError("set symbol '" + t.name() + "' has no carrier");
      return *v;
    }
    case Term::Kind::apply: {
      std::vector<Value> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(evaluate(a, s, b));
      return s.apply(t.name(), args);
    }
    case Term::Kind::tuple:
    case Term::Kind::set_literal: {
      std::vector<Value> parts;
      parts.reserve(t.args().size());
      for (const auto& a : t.args()) parts.push_back(evaluate(a, s, b));
      return t.kind() == Term::Kind::tuple ? Value::tuple(std::move(parts)) : Value::set(std::move(parts));
    }
    case Term::Kind::elm:
      throw EvalError("elm(" + t.inner().str() + ") denotes a multiset, not a value");
  }
  throw EvalError("bad term");
}

Multiset expand_elm(const Value& v) {
  if (!v.is_set()) throw EvalError("elm applied to non-set value " + v.str());
  Multiset out;
  for (const auto& e : v.elements()) out.emplace(e, 1);
  return out;
}

Multiset evaluate_inscription(const std::vector<Term>& terms, const Structure& s, const Binding& b) {
  Multiset out;
  for (const auto& t : terms) {
    if (t.is_elm())
      multiset_add(out, expand_elm(evaluate(t.inner(), s, b)));
    else
      multiset_add(out, evaluate(t, s, b));
  }
  return out;
}

bool eval_guard(const Guard& g, const Structure& s, const Binding& b) {
  for (const auto& a : g.atoms) {
    switch (a.op) {
      case GuardAtom::Op::truth:
        break;
      case GuardAtom::Op::equal:
        if (evaluate(a.lhs, s, b) != evaluate(a.rhs, s, b)) return false;
        break;
      case GuardAtom::Op::member:
        if (!evaluate(a.rhs, s, b).contains(evaluate(a.lhs, s, b))) return false;
        break;
      case GuardAtom::Op::subset:
        if (!evaluate(a.lhs, s, b).is_subset_of(evaluate(a.rhs, s, b))) return false;
        break;
    }
  }
  return true;
}

void for_each_binding(const std::vector<std::pair<std::string, Sort>>& vars, const Structure& s,
                      const std::function<bool(const Binding&)>& visit, std::size_t powerset_cap) {
  std::map<std::string, Sort> sorted(vars.begin(), vars.end());
  std::vector<std::string> names;
  std::vector<Value> domains;
  for (const auto& [name, sort] : sorted) {
    names.push_back(name);
    domains.push_back(sort_carrier(sort, s, powerset_cap));
    if (domains.back().size() == 0) return;
  }
  std::vector<std::size_t> index(names.size(), 0);
  Binding b;
  for (std::size_t i = 0; i < names.size(); ++i) b[names[i]] = domains[i].elements().front();
  while (true) {
    if (!visit(b)) return;
    // odometer: the last variable varies fastest
    std::size_t i = names.size();
    while (i > 0) {
      --i;
      if (++index[i] < domains[i].size()) {
        b[names[i]] = domains[i].elements()[index[i]];
        break;
      }
      index[i] = 0;
      b[names[i]] = domains[i].elements().front();
      if (i == 0) return;
    }
    if (names.empty()) return;
  }
}

std::vector<Binding> enumerate_bindings(const std::vector<std::pair<std::string, Sort>>& vars, const Structure& s,
                                        std::size_t powerset_cap) {
  std::vector<Binding> out;
  for_each_binding(
      vars, s,
      [&](const Binding& b) {
        out.push_back(b);
        return true;
      },
      powerset_cap);
  return out;
}

}  // namespace hk
