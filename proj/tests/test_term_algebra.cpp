#include <doctest.h>

#include <random>

#include "hk/error.hpp"
#include "hk/term.hpp"
#include "support.hpp"

using namespace hk;
using hk::test::s0;

namespace {

Value atom(const char* n) { return Value::atom(n); }
Value set(std::vector<Value> v) { return Value::set(std::move(v)); }

bool has_kind(const std::vector<Violation>& vs, Violation::Kind k) {
  for (const auto& v : vs)
    if (v.kind == k) return true;
  return false;
}

}  // namespace

TEST_CASE("values are ordered atoms < sets < tuples and sets are normalized") {
  CHECK(atom("z") < set({}));
  CHECK(set({atom("a")}) < Value::tuple({atom("a")}));
  CHECK(set({atom("b"), atom("a"), atom("b")}) == set({atom("a"), atom("b")}));
  CHECK(set({atom("a"), atom("b")}).size() == 2);
  CHECK(set({atom("a")}).is_subset_of(set({atom("a"), atom("b")})));
  CHECK_FALSE(set({atom("c")}).is_subset_of(set({atom("a"), atom("b")})));
  CHECK(powerset(set({atom("a"), atom("b"), atom("c")})).size() == 8);
}

TEST_CASE("multiset arithmetic") {
  Multiset m;
  multiset_add(m, atom("a"), 2);
  multiset_add(m, atom("b"));
  Multiset part{{atom("a"), 1}};
  CHECK(multiset_includes(m, part));
  multiset_subtract(m, part);
  CHECK(multiset_size(m) == 2);
  multiset_subtract(m, part);
  CHECK(m.count(atom("a")) == 0);
  CHECK_FALSE(multiset_includes(m, part));
}

TEST_CASE("S0 validates against Sigma0") {
  auto s = s0();
  CHECK(validate_structure(*s->signature(), *s).empty());
}

TEST_CASE("a partial function is reported as non-total") {
  Structure s = *s0();
  auto table = *s.function("f");
  table.erase(atom("salad_portion"));
  s.set_function("f", table);
  auto vs = validate_structure(*s.signature(), s);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].kind == Violation::Kind::non_total_function);
  CHECK(vs[0].symbol == "f");
}

TEST_CASE("empty signature and structure validate") {
  Signature sig;
  Structure s("E", std::make_shared<const Signature>(sig));
  CHECK(validate_structure(sig, s).empty());
}

TEST_CASE("structural violations") {
  Structure s = *s0();
  s.set_carrier("Orders", set({set({atom("pizza")})}));
  CHECK(has_kind(validate_structure(*s.signature(), s), Violation::Kind::subset_outside_base));

  Structure t = *s0();
  auto f = *t.function("f");
  f[atom("rice_portion")] = atom("pizza");
  t.set_function("f", f);
  CHECK(has_kind(validate_structure(*t.signature(), t), Violation::Kind::codomain));

  Structure u("U", s0()->signature());
  CHECK(has_kind(validate_structure(*u.signature(), u), Violation::Kind::missing_carrier));
}

TEST_CASE("evaluate on S0") {
  auto s = s0();
  CHECK(evaluate(Term::set_symbol("Menu"), *s, {}) == set({atom("rice"), atom("meat"), atom("salad")}));
  CHECK(evaluate(Term::variable("x"), *s, {{"x", atom("t1")}}) == atom("t1"));
  CHECK(evaluate(Term::apply("f", {Term::variable("y")}), *s, {{"y", atom("rice_portion")}}) == atom("rice"));
  CHECK(evaluate(Term::tuple({Term::variable("x"), Term::set_literal({})}), *s, {{"x", atom("t2")}}) ==
        Value::tuple({atom("t2"), set({})}));
  CHECK_THROWS_AS(evaluate(Term::variable("nope"), *s, {}), EvalError);
  CHECK_THROWS_AS(evaluate(Term::apply("f", {Term::variable("y")}), *s, {{"y", atom("t1")}}), EvalError);
  CHECK_THROWS_AS(evaluate(Term::elm(Term::set_symbol("Menu")), *s, {}), EvalError);
}

TEST_CASE("expand_elm expands one level") {
  auto tables = set({atom("t1"), atom("t2"), atom("t3"), atom("t4")});
  auto m = expand_elm(tables);
  CHECK(multiset_size(m) == 4);
  for (const auto& [v, n] : m) CHECK(n == 1);
  CHECK(expand_elm(set({})).empty());
  auto nested = expand_elm(set({set({atom("a")}), set({atom("b")})}));
  CHECK(nested.size() == 2);
  CHECK(nested.count(set({atom("a")})) == 1);
  CHECK_THROWS_AS(expand_elm(atom("a")), EvalError);
}

TEST_CASE("eval_guard") {
  auto s = s0();
  Guard sub{{{GuardAtom::Op::subset, Term::variable("X"), Term::set_symbol("Menu")}}};
  CHECK(eval_guard(sub, *s, {{"X", set({atom("rice"), atom("meat")})}}));
  CHECK_FALSE(eval_guard(sub, *s, {{"X", set({atom("rice"), atom("pizza")})}}));
  CHECK(eval_guard(Guard{}, *s, {}));
  CHECK(eval_guard(Guard{{{GuardAtom::Op::truth}}}, *s, {{"q", atom("anything")}}));
  Guard member{{{GuardAtom::Op::member, Term::variable("t"), Term::set_symbol("Tables")}}};
  CHECK(eval_guard(member, *s, {{"t", atom("t3")}}));
  CHECK_FALSE(eval_guard(member, *s, {{"t", atom("t9")}}));
  Guard eq{{{GuardAtom::Op::equal, Term::apply("g", {Term::variable("Y")}), Term::variable("X")}}};
  CHECK(eval_guard(eq, *s, {{"X", set({atom("rice")})}, {"Y", set({atom("rice_portion")})}}));
  CHECK_FALSE(eval_guard(eq, *s, {{"X", set({atom("meat")})}, {"Y", set({atom("rice_portion")})}}));
}

TEST_CASE("sort checking") {
  auto sig = s0()->signature();
  VariableSorts vars{{"y", Sort::named("Meal_items")}, {"t", Sort::named("Tables")}, {"X", Sort::named("Orders")}};
  CHECK(sort_of(Term::apply("f", {Term::variable("y")}), *sig, vars) == Sort::named("Menu"));
  CHECK_THROWS_AS(sort_of(Term::apply("f", {Term::variable("t")}), *sig, vars), SortError);
  CHECK(sig->normalize(sort_of(Term::elm(Term::variable("X")), *sig, vars)) == Sort::named("Menu"));
  CHECK_THROWS_AS(check_guard({{{GuardAtom::Op::subset, Term::variable("t"), Term::set_symbol("Menu")}}}, *sig, vars),
                  SortError);
}

TEST_CASE("enumerate_bindings counts") {
  auto s = s0();
  CHECK(enumerate_bindings({{"t", Sort::named("Tables")}}, *s).size() == 4);
  auto none = enumerate_bindings({}, *s);
  REQUIRE(none.size() == 1);
  CHECK(none[0].empty());

  // independent product oracle
  auto clients = s->carrier("Clients")->elements();
  auto tables = s->carrier("Tables")->elements();
  std::set<Binding> expected;
  for (const auto& c : clients)
    for (const auto& t : tables) expected.insert({{"c", c}, {"t", t}});
  auto got = enumerate_bindings({{"c", Sort::named("Clients")}, {"t", Sort::named("Tables")}}, *s);
  CHECK(got.size() == clients.size() * 4);
  CHECK(std::set<Binding>(got.begin(), got.end()) == expected);
  CHECK(std::is_sorted(got.begin(), got.end()));

  CHECK(enumerate_bindings({{"X", Sort::named("Orders")}}, *s).size() == 8);
  CHECK(enumerate_bindings({{"P", Sort::power("Tables")}}, *s).size() == 16);
  CHECK_THROWS_AS(enumerate_bindings({{"P", Sort::power("Tables")}}, *s, 3), DomainError);
}

TEST_CASE("for_each_binding stops early") {
  std::size_t n = 0;
  for_each_binding({{"t", Sort::named("Tables")}}, *s0(), [&](const Binding&) { return ++n < 2; });
  CHECK(n == 2);
}

TEST_CASE("sort_carrier agrees with in_sort") {
  auto s = test::toy_structure(3, 2);
  std::vector<Sort> sorts{Sort::named("A"), Sort::named("C"), Sort::power("B"),
                          Sort::tuple({Sort::named("A"), Sort::named("B")})};
  std::vector<Value> probes{atom("a1"), atom("b2"), set({}), set({atom("a1"), atom("a3")}),
                            Value::tuple({atom("a2"), atom("b1")}), Value::tuple({atom("b1"), atom("a2")})};
  for (const auto& sort : sorts) {
    auto carrier = sort_carrier(sort, *s);
    for (const auto& v : carrier.elements()) CHECK(in_sort(v, sort, *s));
    for (const auto& v : probes) CHECK(in_sort(v, sort, *s) == carrier.contains(v));
  }
}

TEST_CASE("restrict_structure keeps a model") {
  auto r = test::restricted_s0(2, 1, 2);
  CHECK(r->carrier("Tables")->size() == 2);
  CHECK(r->carrier("Orders")->size() == 4);
  CHECK(r->function("g")->size() == 4);
  CHECK(validate_structure(*r->signature(), *r).empty());
}
