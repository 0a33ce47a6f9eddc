#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "support.hpp"

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result hk_run(const std::string& args) {
  std::string cmd = std::string("\"") + HK_EXE + "\" " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::current_path() / "cli_scratch";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

using hk::test::corpus;

TEST_CASE("simulate then validate-run") {
  auto run = scratch("a0_sim.hkrun");
  auto sim = hk_run("simulate " + q(corpus("branch.hksys")) + " --script " + q(corpus("a0.steps")) + " --name A0 -o " +
                    q(run));
  CHECK_MESSAGE(sim.code == 0, sim.out);
  auto val = hk_run("validate-run " + q(run) + " " + q(corpus("branch.hksys")));
  CHECK_MESSAGE(val.code == 0, val.out);
  auto eq = hk_run("equal " + q(run) + " " + q(corpus("a0.hkrun")));
  CHECK_MESSAGE(eq.code == 0, eq.out);
}

TEST_CASE("validate-run rejects a run of another system") {
  auto r = hk_run("validate-run " + q(corpus("a0.hkrun")) + " " + q(corpus("branch.hksys")));
  CHECK(r.code == 0);
  auto tampered = scratch("bad.hkrun");
  auto text = hk::test::read_file(corpus("a0.hkrun"));
  text.replace(text.find("offer_table (t = t1)"), 20, "offer_table (t = t3)");
  std::ofstream(tampered) << text;
  CHECK(hk_run("validate-run " + q(tampered) + " " + q(corpus("branch.hksys"))).code == 1);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(hk_run("bogus").code == 2);
  CHECK(hk_run("").code == 2);
  CHECK(hk_run("simulate").code == 2);
  CHECK(hk_run("check " + q(corpus("missing.hk"))).code == 2);
  auto broken = scratch("broken.hksig");
  std::ofstream(broken) << "signature S { sets A, }";
  auto r = hk_run("check " + q(broken));
  CHECK(r.code == 2);
  CHECK(r.out.find("broken.hksig:1:") != std::string::npos);
}

TEST_CASE("compose the three corpus modules") {
  auto out = scratch("branch.hk");
  auto r = hk_run("compose " + q(corpus("entry.hk")) + " " + q(corpus("guest_area.hk")) + " " +
                  q(corpus("kitchen.hk")) + " --name branch -o " + q(out));
  REQUIRE_MESSAGE(r.code == 0, r.out);
  hk::io::Loader loader;
  auto m = hk::io::as_module(loader.load(out));
  using Iface = std::vector<std::pair<hk::ElementKind, std::string>>;
  CHECK(hk::interface_of(m, hk::Side::left) == Iface{{hk::ElementKind::transition, "enter"}});
  CHECK(hk::interface_of(m, hk::Side::right) == Iface{{hk::ElementKind::transition, "leave"}});
  CHECK(hk_run("equal " + q(out) + " " + q(corpus("branch.hk"))).code == 0);
  CHECK(hk_run("equal " + q(corpus("entry.hk")) + " " + q(corpus("kitchen.hk"))).code == 1);
  auto again = scratch("branch_again.hk");
  hk_run("compose " + q(corpus("entry.hk")) + " " + q(corpus("guest_area.hk")) + " " + q(corpus("kitchen.hk")) +
         " --name branch -o " + q(again));
  CHECK(hk::test::read_file(again) == hk::test::read_file(out));
}

TEST_CASE("instantiate reproduces the shipped system") {
  auto out = scratch("branch.hksys");
  auto r = hk_run("instantiate " + q(corpus("branch.hk")) + " " + q(corpus("s0.hks")) + " --name branch_S0 -o " + q(out));
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(hk::test::read_file(out) == hk::test::read_file(corpus("branch.hksys")));
}

TEST_CASE("compose-runs") {
  auto out = scratch("a0_parts.hkrun");
  auto r = hk_run("compose-runs " + q(corpus("a0_begin.hkrun")) + " " + q(corpus("a0_middle.hkrun")) + " " +
                  q(corpus("a0_end.hkrun")) + " -o " + q(out));
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(hk_run("equal " + q(out) + " " + q(corpus("a0.hkrun"))).code == 0);
}

TEST_CASE("analysis subcommands") {
  auto inv = hk_run("invariants " + q(corpus("branch.hksys")) + " --transitions");
  CHECK_MESSAGE(inv.code == 0, inv.out);
  CHECK(inv.out.find("free_tables") != std::string::npos);
  auto reach = hk_run("reach " + q(corpus("branch.hksys")) + " --max-nodes 200 --pred \"count(eating) > 0\"");
  CHECK_MESSAGE(reach.code == 0, reach.out);
  CHECK(reach.out.find("truncated") != std::string::npos);
  CHECK(hk_run("reach " + q(corpus("branch.hksys")) + " --pred \"count(eating\"").code == 2);
}

TEST_CASE("export is deterministic") {
  auto a = hk_run("export --dot " + q(corpus("branch.hk")));
  auto b = hk_run("export --dot " + q(corpus("branch.hk")));
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("digraph") == 0);
  auto s1 = hk_run("simulate " + q(corpus("branch.hksys")) + " --seed 4 --steps 20");
  auto s2 = hk_run("simulate " + q(corpus("branch.hksys")) + " --seed 4 --steps 20");
  CHECK(s1.code == 0);
  CHECK(s1.out == s2.out);
}

TEST_CASE("check accepts the corpus") {
  std::string args;
  for (const auto& e : std::filesystem::directory_iterator(hk::test::corpus_dir()))
    if (e.path().extension() != ".steps") args += " " + q(e.path());
  auto r = hk_run("check" + args);
  CHECK_MESSAGE(r.code == 0, r.out);
}
