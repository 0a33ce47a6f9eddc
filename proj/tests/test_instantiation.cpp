#include <doctest.h>

#include "hk/error.hpp"
#include "support.hpp"

using namespace hk;

namespace {

Value atom(const char* n) { return Value::atom(n); }

}  // namespace

TEST_CASE("branch with S0 has four free tables and one menu card") {
  auto sys = test::branch_system();
  auto free = sys.initial[sys.place_index("free_tables")];
  CHECK(free == Multiset{{atom("t1"), 1}, {atom("t2"), 1}, {atom("t3"), 1}, {atom("t4"), 1}});
  auto menu = sys.initial[sys.place_index("menu")];
  CHECK(menu == Multiset{{Value::set({atom("rice"), atom("meat"), atom("salad")}), 1}});
  std::size_t total = 0;
  for (const auto& ms : sys.initial) total += multiset_size(ms);
  CHECK(total == 5);
}

TEST_CASE("elm over an empty carrier leaves the place empty") {
  auto s = test::restricted_s0(0, 1, 1);
  auto sys = test::branch_system(s);
  CHECK(sys.initial[sys.place_index("free_tables")].empty());
}

TEST_CASE("reinstantiation only changes markings") {
  auto m = test::branch_module();
  auto [a, b] = reinstantiate(m, test::s0(), test::restricted_s0(2, 3, 3));
  CHECK(a.module == b.module);
  CHECK(multiset_size(a.initial[a.place_index("free_tables")]) == 4);
  CHECK(multiset_size(b.initial[b.place_index("free_tables")]) == 2);
  CHECK(interface_of(*a.module, Side::left) == interface_of(*b.module, Side::left));
  CHECK(interface_of(*a.module, Side::right) == interface_of(*b.module, Side::right));

  auto [c, d] = reinstantiate(m, test::s0(), test::s0());
  CHECK(c == d);
}

TEST_CASE("instantiate rejects invalid structures and open init terms") {
  Structure broken = *test::s0();
  broken.set_function("f", {});
  CHECK_THROWS_AS(instantiate(test::branch_module(), std::make_shared<const Structure>(broken)), Error);

  Module open = *test::branch_module();
  open.net.places[0].init.push_back(Term::variable("t"));
  CHECK_THROWS_AS(instantiate(std::make_shared<const Module>(open), test::s0()), Error);
}

TEST_CASE("constants and function applications in init inscriptions") {
  Module m;
  m.signature = test::toy_signature();
  m.net.places = {{"p", Sort::named("B"), {Term::apply("h", {Term::constant("a0")}), Term::apply("h", {Term::constant("a0")})}},
                  {"q", Sort::named("A"), {Term::elm(Term::set_symbol("A"))}}};
  m.normalize();
  auto sys = instantiate(std::make_shared<const Module>(m), test::toy_structure(3, 2));
  CHECK(sys.initial[sys.place_index("p")] == Multiset{{atom("b1"), 2}});
  CHECK(multiset_size(sys.initial[sys.place_index("q")]) == 3);
}
