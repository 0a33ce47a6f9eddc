#include <doctest.h>

#include <random>
#include <set>

#include "hk/error.hpp"
#include "support.hpp"

using namespace hk;

namespace {

Run load_run(const char* file) {
  io::Loader loader;
  return io::as_run(loader.load(test::corpus(file)));
}

std::size_t cond(const Run& r, const std::string& id) {
  for (std::size_t i = 0; i < r.conditions.size(); ++i)
    if (r.conditions[i].id == id) return i;
  FAIL("no condition " << id);
  return 0;
}

Run simulate_a0(const System& sys) {
  SchedulingPolicy p;
  p.mode = SchedulingPolicy::Mode::script;
  p.script = test::a0_script();
  p.step_limit = p.script.size();
  return simulate(sys, p);
}

/// Module over the toy signature: place `from` holding a0, transition `t`
/// moving it to place `to`.
std::shared_ptr<const Module> mover(const std::string& from, const std::string& t, const std::string& to) {
  Module m;
  m.name = t;
  m.signature = test::toy_signature();
  m.net.variables = {{"x", Sort::named("A")}};
  m.net.places = {{from, Sort::named("A"), {Term::constant("a0")}}, {to, Sort::named("A"), {}}};
  m.net.transitions = {{t, {}, {}}};
  m.net.arcs = {{0, 0, ArcDirection::input, {Term::variable("x")}}, {1, 0, ArcDirection::output, {Term::variable("x")}}};
  m.normalize();
  return std::make_shared<const Module>(m);
}

Run one_step(const std::string& from, const std::string& t, const std::string& to) {
  auto sys = instantiate(mover(from, t, to), test::toy_structure(1, 1));
  SchedulingPolicy p;
  p.step_limit = 1;
  return simulate(sys, p);
}

}  // namespace

TEST_CASE("the scripted simulation reproduces the reference run") {
  auto sys = test::branch_system();
  auto sim = simulate_a0(sys);
  CHECK(sim.events.size() == 16);
  CHECK(sim.conditions.size() == 27);
  CHECK(validate_run(sim, sys).empty());
  auto ref = load_run("a0.hkrun");
  CHECK(validate_run(ref, sys).empty());
  CHECK(canonicalize(sim) == canonicalize(ref));
}

TEST_CASE("a zero-step simulation keeps every initial token implicit") {
  auto sys = test::branch_system();
  SchedulingPolicy p;
  p.step_limit = 0;
  auto r = simulate(sys, p);
  CHECK(r.events.empty());
  CHECK(r.conditions.empty());
  auto m = final_marking(r, sys);
  CHECK(m == sys.initial);
  std::size_t total = 0;
  for (const auto& ms : m) total += multiset_size(ms);
  CHECK(total == 5);
}

TEST_CASE("a disabled script step is rejected") {
  auto sys = test::branch_system();
  SchedulingPolicy p;
  p.mode = SchedulingPolicy::Mode::script;
  p.script = {{"leave", {{"c", Value::atom("Alice")}, {"t", Value::atom("t1")}}}};
  CHECK_THROWS_AS(simulate(sys, p), RunError);
}

TEST_CASE("validation reports guard violations and branching") {
  auto sys = test::branch_system();
  auto ref = load_run("a0.hkrun");
  auto bad = ref;
  auto& serve = bad.events[bad.event_index("serve1")];
  serve.binding["X"] = Value::set({Value::atom("rice"), Value::atom("salad")});
  bool guard = false;
  for (const auto& p : validate_run(bad, sys)) guard = guard || p.find("guard") != std::string::npos;
  CHECK(guard);

  auto branching = ref;
  branching.consumes.emplace_back(cond(ref, "a1"), ref.event_index("offer2"));
  bool found = false;
  for (const auto& p : validate_run(branching, sys)) found = found || p.find("branching") != std::string::npos;
  CHECK(found);
  CHECK_FALSE(run_structure_problems(branching).empty());
}

TEST_CASE("causal order in A0") {
  auto ref = load_run("a0.hkrun");
  auto e = [&](const char* id) { return ref.event_index(id); };
  CHECK(ordered(ref, e("offer1"), e("enter1")) == Order::before);
  CHECK(ordered(ref, e("enter1"), e("offer1")) == Order::after);
  for (const char* a : {"offer1", "enter1"})
    for (const char* b : {"offer2", "enter2"}) CHECK(ordered(ref, e(a), e(b)) == Order::independent);
  CHECK(ordered(ref, e("cook_r2"), e("serve1")) == Order::before);
  CHECK(ordered(ref, e("cook_r1"), e("serve1")) == Order::independent);
  CHECK(ordered(ref, e("leave1"), e("leave1")) == Order::before);
}

TEST_CASE("exchanging the two rice portions") {
  auto sys = test::branch_system();
  auto ref = load_run("a0.hkrun");
  auto k1 = cond(ref, "k1"), k3 = cond(ref, "k3");

  // Identity exchange: the conditions trade places in storage and ids.
  auto exchanged = ref;
  std::swap(exchanged.conditions[k1], exchanged.conditions[k3]);
  auto flip = [&](std::size_t c) { return c == k1 ? k3 : c == k3 ? k1 : c; };
  for (auto& [c, e] : exchanged.consumes) c = flip(c);
  for (auto& [e, c] : exchanged.produces) c = flip(c);
  CHECK(validate_run(exchanged, sys).empty());
  CHECK(canonicalize(exchanged) == canonicalize(ref));

  // Rewiring: each guest gets the rice cooked for their own order.
  auto own = ref;
  for (auto& [c, e] : own.consumes) c = flip(c);
  CHECK(validate_run(own, sys).empty());
  CHECK(canonicalize(own) != canonicalize(ref));
}

TEST_CASE("begin, middle and end compose to A0") {
  auto ref = load_run("a0.hkrun");
  auto whole = compose_runs(compose_runs(load_run("a0_begin.hkrun"), load_run("a0_middle.hkrun")),
                            load_run("a0_end.hkrun"));
  CHECK(run_structure_problems(whole).empty());
  CHECK(canonicalize(whole) == canonicalize(ref));
  auto right_first = compose_runs(load_run("a0_begin.hkrun"),
                                  compose_runs(load_run("a0_middle.hkrun"), load_run("a0_end.hkrun")));
  CHECK(canonicalize(right_first) == canonicalize(ref));
}

TEST_CASE("the empty run is neutral") {
  auto ref = load_run("a0.hkrun");
  CHECK(canonicalize(compose_runs(ref, Run{})) == canonicalize(ref));
  CHECK(canonicalize(compose_runs(Run{}, ref)) == canonicalize(ref));
}

TEST_CASE("two independent single-event runs") {
  auto r1 = one_step("p", "t", "q");
  auto r2 = one_step("r", "u", "s");
  REQUIRE(r1.events.size() == 1);
  REQUIRE(r2.events.size() == 1);
  CHECK(linearize(r1, 0) == std::vector<Step>{{"t", r1.events[0].binding}});
  auto both = compose_runs(r1, r2);
  REQUIRE(both.events.size() == 2);
  CHECK(ordered(both, 0, 1) == Order::independent);
  std::set<std::string> firsts;
  for (std::uint64_t seed = 0; seed < 64; ++seed) firsts.insert(linearize(both, seed).front().transition);
  CHECK(firsts == std::set<std::string>{"t", "u"});
}

TEST_CASE("fusing conditions with different tokens fails") {
  auto r1 = one_step("p", "t", "q");
  auto r2 = one_step("q", "u", "s");
  r2.conditions[r2.left[0].element].value = Value::atom("other");
  CHECK_THROWS_AS(compose_runs(r1, r2), RunError);
}

TEST_CASE("linearizations of A0 replay") {
  auto sys = test::branch_system();
  auto ref = load_run("a0.hkrun");
  auto target = final_marking(ref, sys);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto steps = linearize(ref, seed);
    CHECK(steps.size() == 16);
    CHECK(replay(sys, steps) == target);
  }
}

TEST_CASE("random simulations agree with their linearizations") {
  auto sys = test::branch_system();
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    SchedulingPolicy p;
    p.seed = seed;
    p.step_limit = 25;
    auto r = simulate(sys, p);
    CHECK(validate_run(r, sys).empty());
    auto target = final_marking(r, sys);
    for (std::uint64_t k = 0; k < 5; ++k) CHECK(replay(sys, linearize(r, seed * 31 + k)) == target);
    CHECK(canonicalize(r) == canonicalize(simulate(sys, p)));
  }
}

TEST_CASE("random runs satisfy the structural rules") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    auto r = test::random_run(rng);
    CHECK(run_structure_problems(r).empty());
    CHECK(linearize(r, i).size() == r.events.size());
  }
}
