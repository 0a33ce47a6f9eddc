#include <doctest.h>

#include <algorithm>
#include <random>

#include "hk/error.hpp"
#include "support.hpp"

using namespace hk;

namespace {

/// Two places a, b of sort A with transitions a -> b and b -> a.
System cycle_system() {
  Module m;
  m.signature = test::toy_signature();
  m.net.variables = {{"x", Sort::named("A")}};
  m.net.places = {{"a", Sort::named("A"), {Term::constant("a0")}}, {"b", Sort::named("A"), {}}};
  m.net.transitions = {{"back", {}, {}}, {"forth", {}, {}}};
  auto x = Term::variable("x");
  m.net.arcs = {{0, 1, ArcDirection::input, {x}},
                {1, 1, ArcDirection::output, {x}},
                {1, 0, ArcDirection::input, {x}},
                {0, 0, ArcDirection::output, {x}}};
  m.normalize();
  return instantiate(std::make_shared<const Module>(m), test::toy_structure(1, 1));
}

IntVector mul_left(const IntVector& i, const std::vector<IntVector>& c, std::size_t cols) {
  IntVector out(cols, 0);
  for (std::size_t p = 0; p < c.size(); ++p)
    for (std::size_t t = 0; t < cols; ++t) out[t] += i[p] * c[p][t];
  return out;
}

}  // namespace

TEST_CASE("grounding S0") {
  auto sys = test::branch_system();
  auto g = ground(sys);
  std::size_t free = 0;
  for (const auto& gp : g.places)
    if (sys.net().places[gp.place].name == "free_tables") ++free;
  CHECK(free == 4);
  CHECK(g.incidence.size() == g.places.size());
  CHECK(g.to_vector(sys.initial) == g.initial);
  for (std::size_t p = 0; p < g.places.size(); ++p)
    for (std::size_t t = 0; t < g.transitions.size(); ++t) CHECK(g.incidence[p][t] == g.post[p][t] - g.pre[p][t]);
}

TEST_CASE("a net without transitions has a zero-column matrix") {
  Module m;
  m.signature = test::toy_signature();
  m.net.places = {{"p", Sort::named("A"), {Term::constant("a0")}}, {"q", Sort::named("B"), {}}};
  auto sys = instantiate(std::make_shared<const Module>(m), test::toy_structure(2, 2));
  auto g = ground(sys);
  CHECK(g.transitions.empty());
  CHECK(g.places.size() == 4);
  for (const auto& row : g.incidence) CHECK(row.empty());
  auto inv = place_invariants(g);
  CHECK(inv.size() == 4);  // full standard basis
  for (std::size_t i = 0; i < inv.size(); ++i) {
    std::int64_t ones = 0;
    for (auto v : inv[i]) ones += v;
    CHECK(ones == 1);
  }
  CHECK(transition_invariants(g).empty());
}

TEST_CASE("a two-place cycle has one transition invariant") {
  auto g = ground(cycle_system());
  CHECK(g.transitions.size() == 2);
  auto t = transition_invariants(g);
  REQUIRE(t.size() == 1);
  CHECK(t[0] == IntVector{1, 1});
  auto p = place_invariants(g);
  REQUIRE(p.size() == 1);
  CHECK(p[0] == IntVector{1, 1});
}

TEST_CASE("integer null space") {
  // x + 2y - z = 0
  auto basis = integer_null_space({{1, 2, -1}}, 3);
  CHECK(basis.size() == 2);
  for (const auto& v : basis) CHECK(v[0] + 2 * v[1] - v[2] == 0);
  CHECK(in_span(basis, {1, 0, 1}));
  CHECK(in_span(basis, {0, 1, 2}));
  CHECK_FALSE(in_span(basis, {1, 0, 0}));
  CHECK(integer_null_space({{1, 0}, {0, 1}}, 2).empty());
  CHECK(dot({1, 2, 3}, {4, 5, 6}) == 32);
}

TEST_CASE("S0 place invariants hold along random firing sequences") {
  auto sys = test::branch_system();
  auto g = ground(sys);
  auto inv = place_invariants(g);
  REQUIRE_FALSE(inv.empty());
  for (const auto& i : inv) CHECK(mul_left(i, g.incidence, g.transitions.size()) == IntVector(g.transitions.size(), 0));

  // table life cycle: each table sits in exactly one of these places
  const std::vector<std::string> lifecycle{"free_tables", "offered_tables", "clients_ready_to_order", "waiting",
                                           "eating"};
  for (const char* table : {"t1", "t2", "t3", "t4"}) {
    IntVector v(g.places.size(), 0);
    for (std::size_t gp = 0; gp < g.places.size(); ++gp) {
      const auto& place = sys.net().places[g.places[gp].place].name;
      if (std::find(lifecycle.begin(), lifecycle.end(), place) == lifecycle.end()) continue;
      const auto& val = g.places[gp].value;
      bool holds = val.is_atom() ? val.name() == table : val.is_tuple() && val.elements()[1] == Value::atom(table);
      if (holds) v[gp] = 1;
    }
    CHECK(dot(v, g.initial) == 1);
    CHECK(in_span(inv, v));
  }

  std::mt19937_64 rng(99);
  for (int seq = 0; seq < 100; ++seq) {
    auto m = sys.initial;
    for (int step = 0; step < 40; ++step) {
      auto succ = sys.successors(m);
      if (succ.empty()) break;
      m = succ[std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(rng)].marking;
      auto v = g.to_vector(m);
      for (const auto& i : inv) REQUIRE(dot(i, v) == dot(i, g.initial));
    }
  }
}

TEST_CASE("exploration caps") {
  auto sys = test::branch_system();
  auto root = explore(sys, {1, 0});
  CHECK(root.nodes.size() == 1);
  CHECK(root.edges.empty());
  CHECK(root.truncated);
  CHECK(root.deadlocks.empty());
  auto small = explore(sys, {50, 1000});
  CHECK(small.truncated);
  CHECK(small.nodes.size() == 50);
}

TEST_CASE("edge count equals the sum of successor counts") {
  auto sys = test::branch_system(test::restricted_s0(1, 1, 1));
  auto g = explore(sys);
  CHECK_FALSE(g.truncated);
  std::size_t total = 0;
  for (const auto& m : g.nodes) total += sys.successors(m).size();
  CHECK(g.edges.size() == total);
}

TEST_CASE("the 1/1/1 restriction is deadlock-free up to leave") {
  auto sys = test::branch_system(test::restricted_s0(1, 1, 1));
  auto g = explore(sys);
  CHECK_FALSE(g.truncated);
  CHECK(g.deadlocks.empty());
  auto back = Predicate::count("free_tables", Predicate::Cmp::eq, 1);
  auto hits = explore(sys, {}, &back).hits;
  CHECK(std::find(hits.begin(), hits.end(), 0) != hits.end());
  // leave returns to the root
  std::size_t root_in = 0;
  for (const auto& e : g.edges)
    if (e.to == 0) ++root_in;
  CHECK(root_in > 0);
}

TEST_CASE("grounded and high-level graphs agree on the 1/1/1 restriction") {
  auto sys = test::branch_system(test::restricted_s0(1, 1, 1));
  auto g = ground(sys);
  auto high = explore(sys);
  auto low = explore_grounded(g);
  CHECK(high.nodes.size() == low.nodes.size());
  CHECK(high.edges.size() == low.edges.size());
  CHECK(compare_graphs(high, low, g).empty());
}

TEST_CASE("grounded exploration matches on the cycle net") {
  auto sys = cycle_system();
  auto g = ground(sys);
  auto high = explore(sys);
  auto low = explore_grounded(g);
  CHECK(high.nodes.size() == 2);
  CHECK(compare_graphs(high, low, g).empty());
}

TEST_CASE("marking predicates") {
  auto sys = test::branch_system();
  auto contains = Predicate::contains("free_tables", Value::atom("t1"));
  CHECK(contains.holds(sys.net(), sys.initial));
  CHECK_FALSE(Predicate::neg(contains).holds(sys.net(), sys.initial));
  auto four = Predicate::count("free_tables", Predicate::Cmp::ge, 4);
  CHECK(Predicate::conj(contains, four).holds(sys.net(), sys.initial));
  CHECK(Predicate::disj(Predicate::count("eating", Predicate::Cmp::gt, 0), four).holds(sys.net(), sys.initial));
  CHECK_THROWS_AS(Predicate::count("nowhere", Predicate::Cmp::eq, 0).holds(sys.net(), sys.initial), Error);
  auto parsed = io::parse_predicate(four.str());
  CHECK(parsed.str() == four.str());
}
