#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "jobs.hpp"
#include "obstrukt/charclass.hpp"
#include "obstrukt/hopf.hpp"

using namespace obstrukt::cli;

namespace {

json example(const std::string& file) {
  std::ifstream in(std::string(OBSTRUKT_EXAMPLES) + "/" + file);
  REQUIRE(in);
  return json::parse(in);
}

int exit_status(const std::string& args) {
  const std::string cmd = std::string(OBSTRUKT_CLI) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(OBSTRUKT_TMP) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("pages job for -1 on Z^2 matches the LHS identification") {
  json rep = run_job(example("z2-neg-pages.json"));
  int entries = 0;
  for (const auto& c : rep["pages"])
    for (const auto& e : c["entries"]) {
      CHECK(e["match"].get<bool>());
      ++entries;
    }
  CHECK(entries == 3 * 21);
  for (const auto& c : rep["cohomology"])
    for (const auto& d : c["degrees"]) CHECK(d["ok"].get<bool>());
  for (const auto& c : rep["charclass"]) CHECK(c["v_class"] == "ZERO");
  CHECK(rep["collapse"]["collapses"].get<bool>());
  for (const auto& o : rep["obstruction"]) CHECK(o["ok"].get<bool>());
  for (const auto& n : rep["naturality"]) CHECK(n["maps_v_to_w"].get<bool>());
}

TEST_CASE("reports are deterministic apart from the timestamp") {
  json job = example("z2-neg-pages.json");
  json a = run_job(job), b = run_job(job);
  CHECK(a.contains("timestamp"));
  CHECK(dump(a, true) == dump(b, true));
  CHECK(dump(a, true).find("timestamp") == std::string::npos);
}

TEST_CASE("bounds job") {
  json rep = run_job(example("bounds-r3-t5.json"));
  CHECK(rep["bounds"]["B"] == 24);
  CHECK(rep["bounds"]["parity"] == "odd");
  CHECK(rep["bounds"]["liebermann"]["2"] == 24);
  json even = bounds_report(2, 4);
  CHECK(even["B"] == 2);
  CHECK(even["lambda"].empty());
}

TEST_CASE("hopf job for Z/3 x| Z/2") {
  json rep = run_job(example("hopf-z3-z2.json"));
  CHECK(rep["hopf"]["module_bialgebra"]["module_algebra"].get<bool>());
  CHECK(rep["hopf"]["module_bialgebra"]["module_coalgebra"].get<bool>());
  CHECK(rep["hopf"]["smash_axioms"].get<bool>());
  CHECK(rep["hopf"]["isomorphic_to_group_algebra"].get<bool>());

  json split = R"({"kind": "hopf", "descriptor": {"group": {"symmetric": 3}}})"_json;
  // which elements form A3 depends on the enumeration; find them instead
  obstrukt::FiniteGroup s3 = obstrukt::FiniteGroup::symmetric(3);
  std::vector<int> a3, h;
  for (int g = 0; g < 6; ++g)
    if (s3.element_order(g) != 2) a3.push_back(g);
  for (int g = 0; g < 6 && h.size() < 2; ++g)
    if (g == s3.identity() || s3.element_order(g) == 2) h.push_back(g);
  split["descriptor"]["N"] = a3;
  split["descriptor"]["H"] = h;
  CHECK(run_job(split)["hopf"]["isomorphic_to_group_algebra"].get<bool>());
}

TEST_CASE("heis-nil job and explain") {
  json rep = run_job(example("heis-nil.json"));
  CHECK(rep["collapse"]["verdict"] == "WITNESS d_2^{0,2}");
  bool saw_infinite = false, saw_nontrivial = false;
  for (const auto& c : rep["charclass"]) {
    if (c["t"] == 2 && c["r"] == 2) saw_infinite = c["v_order"] == "INFINITE";
    if (c["t"] == 2 && c["r"] == 3) saw_nontrivial = !c["trivial"].get<bool>();
  }
  CHECK(saw_infinite);
  CHECK(saw_nontrivial);
  const std::string text = explain(rep, 2, 2);
  CHECK(text.find("order INFINITE") != std::string::npos);
  CHECK(text.find("page 1 -> 2") != std::string::npos);
  CHECK(explain(rep, 2, 3).find("not (2,3)-trivial") != std::string::npos);
  CHECK_THROWS_AS(explain(rep, 7, 2), MissingEntry);
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(run_job(json::array()), SchemaError);
  CHECK_THROWS_AS(run_job(R"({"kind": "ring"})"_json), SchemaError);
  CHECK_THROWS_AS(run_job(R"({"kind": "group", "descriptor": {"corpus": "z2-neg"}})"_json), SchemaError);
  CHECK_THROWS_AS(run_job(R"({"kind": "group", "max_degree": 3, "descriptor": {"corpus": "nope"}})"_json),
                  SchemaError);
  CHECK_THROWS_AS(
      run_job(R"({"kind": "lie", "max_degree": 3, "descriptor": {"corpus": "affine"}, "tasks": ["decompose"]})"_json),
      SchemaError);
  CHECK_THROWS_AS(run_job(R"({"kind": "group", "max_degree": 3,
                              "descriptor": {"lattice_rank": 1, "group": {"cyclic": 2},
                                             "action": {"1": [[-1]]}}})"_json),
                  SchemaError);
}

TEST_CASE("exit codes") {
  std::string msg;
  CHECK(exit_code_for(SchemaError("x"), msg) == 2);
  CHECK(exit_code_for(MissingEntry("x"), msg) == 2);
  CHECK(exit_code_for(obstrukt::NotTrivial(2, 3), msg) == 3);
  CHECK(msg.find("(t,r)-triviality") != std::string::npos);
  CHECK(exit_code_for(obstrukt::NotModuleBialgebra("x"), msg) == 3);
  CHECK(msg.find("module bialgebra") != std::string::npos);
  CHECK(exit_code_for(obstrukt::ActionNotBlockDiagonal("x"), msg) == 3);
  CHECK(exit_code_for(obstrukt::TruncationTooSmall("x"), msg) == 4);
  CHECK(exit_code_for(DegreeCeiling("x"), msg) == 4);
  CHECK(exit_code_for(std::overflow_error("x"), msg) == 4);
  CHECK(exit_code_for(std::logic_error("x"), msg) == 1);

  const std::string ex = std::string(OBSTRUKT_EXAMPLES) + "/";
  CHECK(exit_status("run " + ex + "z2-neg-pages.json") == 0);
  CHECK(exit_status("bounds --r 3 --t 5") == 0);
  CHECK(exit_status("bounds --r 5 --t 3") == 2);
  CHECK(exit_status("run /nonexistent.json") == 2);
  CHECK(exit_status("run " + write_temp("bad.json", "{ nope")) == 2);
  CHECK(exit_status("run " + write_temp("deep.json", R"({"kind": "group", "max_degree": 9,
      "descriptor": {"corpus": "z2-neg"}, "tasks": ["pages"]})")) == 4);
  CHECK(exit_status("run " + write_temp("nt.json", R"({"kind": "lie", "max_degree": 5,
      "descriptor": {"corpus": "heis-nil"}, "tasks": ["charclass"], "targets": [[2, 3]]})")) == 3);
  CHECK(exit_status("run " + write_temp("mb.json", R"({"kind": "hopf", "descriptor": {"N": {"cyclic": 3},
      "H": {"cyclic": 2}, "action": [[0, 1, 2], [1, 2, 0]]}})")) == 3);
  CHECK(exit_status("run " + write_temp("blk.json", R"({"kind": "group", "max_degree": 5,
      "descriptor": {"corpus": "z2-swap"}, "tasks": ["decompose"], "n1": 1})")) == 3);
  CHECK(exit_status("explain " + write_temp("empty.json", "{}") + " --t 2 --r 2") == 2);
  CHECK(exit_status("corpus --filter no-such-entry") == 0);
  CHECK(exit_status("corpus --filter z2-sign --inject-sign-error") == 1);
}

TEST_CASE("corpus filter and fixture") {
  CorpusOptions opt;
  opt.filter = "z2-sign";
  auto clean = run_corpus(opt);
  CHECK(clean.ok());
  CHECK(!clean.results.empty());
  opt.inject_sign_error = true;
  auto broken = run_corpus(opt);
  CHECK(!broken.ok());
  bool leibniz_failed = false;
  for (const auto& p : broken.results)
    if (!p.pass) leibniz_failed = leibniz_failed || p.property == "leibniz";
  CHECK(leibniz_failed);

  opt = {};
  opt.filter = "nothing";
  auto none = run_corpus(opt);
  CHECK(none.ok());
  CHECK(none.results.empty());
}
