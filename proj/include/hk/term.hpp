#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hk/signature.hpp"
#include "hk/structure.hpp"
#include "hk/value.hpp"

namespace hk {

/// Symbolic expression over a signature. Identifiers are resolved at
/// construction: a name is either a variable, a constant symbol or a set
/// symbol (which denotes its whole carrier).
class Term {
 public:
  enum class Kind { variable, constant, set_symbol, apply, tuple, set_literal, elm };

  static Term variable(std::string name) { return Term(Kind::variable, std::move(name), {}); }
  static Term constant(std::string name) { return Term(Kind::constant, std::move(name), {}); }
  static Term set_symbol(std::string name) { return Term(Kind::set_symbol, std::move(name), {}); }
  static Term apply(std::string fn, std::vector<Term> args) { return Term(Kind::apply, std::move(fn), std::move(args)); }
  static Term tuple(std::vector<Term> parts) { return Term(Kind::tuple, {}, std::move(parts)); }
  static Term set_literal(std::vector<Term> elems) { return Term(Kind::set_literal, {}, std::move(elems)); }
  static Term elm(Term inner) { return Term(Kind::elm, {}, {std::move(inner)}); }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }
  bool is_elm() const { return kind_ == Kind::elm; }
  /// The wrapped term of an elm term.
  const Term& inner() const { return args_.front(); }

  std::string str() const;
  void collect_variables(std::set<std::string>& out) const;
  /// True if every node is a variable or a tuple (usable for token matching).
  bool is_pattern() const;

  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.name_ <=> b.name_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.args_.begin(), a.args_.end(), b.args_.begin(), b.args_.end());
  }
  friend bool operator==(const Term& a, const Term& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_ && a.args_ == b.args_;
  }

 private:
  Term(Kind k, std::string name, std::vector<Term> args) : kind_(k), name_(std::move(name)), args_(std::move(args)) {}

  Kind kind_;
  std::string name_;
  std::vector<Term> args_;
};

/// One conjunct of a guard.
struct GuardAtom {
  enum class Op { truth, equal, member, subset };
  Op op = Op::truth;
  Term lhs = Term::tuple({});
  Term rhs = Term::tuple({});

  std::string str() const;
  friend auto operator<=>(const GuardAtom&, const GuardAtom&) = default;
  friend bool operator==(const GuardAtom&, const GuardAtom&) = default;
};

/// Conjunction of atoms; the empty conjunction is `true`.
struct Guard {
  std::vector<GuardAtom> atoms;

  bool trivial() const;
  std::string str() const;
  void collect_variables(std::set<std::string>& out) const;
  /// Conjunction of both guards with `true` atoms and duplicates removed.
  static Guard conjoin(const Guard& a, const Guard& b);

  friend auto operator<=>(const Guard&, const Guard&) = default;
  friend bool operator==(const Guard&, const Guard&) = default;
};

using Binding = std::map<std::string, Value>;
using VariableSorts = std::map<std::string, Sort>;

std::string binding_str(const Binding& b);

/// Sort of a term. Throws SortError when the term is ill-sorted; `elm` yields
/// the element sort of the wrapped set-sorted term.
Sort sort_of(const Term& t, const Signature& sig, const VariableSorts& vars);
/// Throws SortError on the first ill-sorted atom.
void check_guard(const Guard& g, const Signature& sig, const VariableSorts& vars);

/// Bottom-up evaluation. Throws EvalError for unbound variables, elm terms and
/// arguments outside a function table.
Value evaluate(const Term& t, const Structure& s, const Binding& b);

/// One copy of each element of a set value; EvalError for non-sets.
Multiset expand_elm(const Value& v);

/// Evaluates a multiset of terms, expanding top-level elm terms.
Multiset evaluate_inscription(const std::vector<Term>& terms, const Structure& s, const Binding& b);

bool eval_guard(const Guard& g, const Structure& s, const Binding& b);

/// Calls `visit` for every sort-respecting total assignment, ordered by
/// variable name and then canonical value order. `visit` returns false to stop.
void for_each_binding(const std::vector<std::pair<std::string, Sort>>& vars, const Structure& s,
                      const std::function<bool(const Binding&)>& visit,
                      std::size_t powerset_cap = default_powerset_cap);

std::vector<Binding> enumerate_bindings(const std::vector<std::pair<std::string, Sort>>& vars, const Structure& s,
                                        std::size_t powerset_cap = default_powerset_cap);

}  // namespace hk
