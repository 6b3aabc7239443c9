#include "approvalkit/cli.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using approvalkit::cli::Document;
using approvalkit::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(APPROVALKIT_DATA_DIR) + "/fixtures/" + name; }
std::string graph(const std::string& name) { return std::string(APPROVALKIT_DATA_DIR) + "/graphs/" + name; }

Document json_of(const Run& r) { return Document::parse(r.out); }

struct GuardOverride {
  explicit GuardOverride(const char* value) { ::setenv("APPROVALKIT_GUARD", value, 1); }
  ~GuardOverride() { ::unsetenv("APPROVALKIT_GUARD"); }
};

}  // namespace

TEST_CASE("winners: RAV on the truthful counterexample profile", "[cli]") {
  const auto r = run({"winners", "--rule", "rav", "--input", fixture("deviation.elec"), "--json"});
  REQUIRE(r.code == 0);
  const auto doc = json_of(r);
  CHECK(doc["winners"] == Document({"a", "c"}));
  CHECK(doc["method"] == "sequential");
  CHECK(doc["trace"].size() == 2);
  CHECK(doc["trace"][0]["selected"] == "a");
}

TEST_CASE("winners: plain text rendering", "[cli]") {
  const auto r = run({"winners", "--rule", "sav", "--input", fixture("deviation.elec")});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "command: winners\nrule: sav\nmethod: top-k\nk: 2\nwinners: a c\nscore: 5/1\n");
}

TEST_CASE("winners: PAV methods agree apart from method and node count", "[cli]") {
  auto exact = json_of(run({"winners", "--rule", "pav", "--method", "exact", "--input", fixture("pav_deviation.elec"), "--json"}));
  auto bb = json_of(run({"winners", "--rule", "pav", "--method", "bb", "--input", fixture("pav_deviation.elec"), "--json"}));
  CHECK(exact["method"] == "exhaustive");
  CHECK(bb["method"] == "branch-and-bound");
  for (auto* d : {&exact, &bb}) {
    d->erase("method");
    d->erase("nodes_explored");
  }
  CHECK(exact == bb);
  CHECK(exact["winners"] == Document({"a", "c"}));
  const auto greedy = json_of(run({"winners", "--rule", "pav", "--method", "greedy", "--input", fixture("pav_deviation.elec"), "--json"}));
  CHECK(greedy["optimal"] == false);
}

TEST_CASE("score: PAV committee score as an exact fraction", "[cli]") {
  const auto r = run({"score", "--rule", "pav", "--committee", "a,c", "--input", fixture("pav_deviation.elec"), "--json"});
  REQUIRE(r.code == 0);
  CHECK(json_of(r)["score"] == "5/1");
  const auto sav = run({"score", "--rule", "sav", "--committee", "a, b", "--input", fixture("deviation.elec")});
  CHECK(sav.out.find("score: 9/2\n") != std::string::npos);
  CHECK(run({"score", "--rule", "rav", "--committee", "a", "--input", fixture("deviation.elec")}).code == 1);
}

TEST_CASE("manipulate wm: RAV witness a d", "[cli]") {
  const auto r = run({"manipulate", "wm", "--rule", "rav", "--candidate", "a", "--manipulators", "1", "--input",
                      fixture("rav_k2.elec"), "--json"});
  REQUIRE(r.code == 0);
  const auto doc = json_of(r);
  CHECK(doc["success"] == true);
  CHECK(doc["witness"] == Document::array({Document({"a", "d"})}));
  CHECK(doc["outcome"] == Document({"a", "d"}));

  const auto text = run({"manipulate", "wm", "--rule", "rav", "--candidate", "a", "--manipulators", "1", "--input",
                         fixture("rav_k2.elec")});
  CHECK(text.out.find("witness[1]: a d\n") != std::string::npos);
}

TEST_CASE("manipulate wsm and best-response", "[cli]") {
  const auto wsm = run({"manipulate", "wsm", "--rule", "sav", "--set", "a,b,c", "--manipulators", "2", "--input",
                        fixture("sav_two_manipulators.elec"), "--json"});
  REQUIRE(wsm.code == 0);
  CHECK(json_of(wsm)["outcome"] == Document({"a", "b", "c"}));

  const auto identical = run({"manipulate", "wsm", "--rule", "sav", "--set", "a,b,c", "--manipulators", "2",
                              "--identical", "--input", fixture("sav_two_manipulators.elec")});
  CHECK(identical.code == 2);

  const auto br = run({"manipulate", "best-response", "--rule", "rav", "--utilities", "a=1,b=1,d=1", "--manipulators",
                       "1", "--input", fixture("rav_k3.elec"), "--json"});
  REQUIRE(br.code == 0);
  const auto doc = json_of(br);
  CHECK(doc["achieved_utility"] == "3/1");
  CHECK(doc["witness"] == Document::array({Document({"a", "d"})}));
}

TEST_CASE("audit reports the SAV deviation", "[cli]") {
  const auto r = run({"audit", "--rule", "sav", "--truth", "a,b", "--input", fixture("deviation_fixed.elec"), "--json"});
  REQUIRE(r.code == 0);
  const auto doc = json_of(r);
  CHECK(doc["strategyproof"] == false);
  CHECK(doc["deviation"]["ballot"] == Document({"b"}));
  CHECK(doc["deviation"]["outcome"] == Document({"a", "b"}));
  CHECK(doc["deviation"]["gain"] == "1/1");

  const auto av = json_of(run({"audit", "--rule", "av", "--truth", "a,b", "--input", fixture("deviation_fixed.elec"), "--json"}));
  CHECK(av["strategyproof"] == true);
  CHECK(av["deviation"].is_null());
}

TEST_CASE("reduce and verify", "[cli]") {
  const auto tmp = std::filesystem::temp_directory_path() / "approvalkit_cli_reduce.elec";
  const auto r = run({"reduce", "is2pav", "--graph", graph("path3.graph"), "--target", "2", "--out", tmp.string(), "--json"});
  REQUIRE(r.code == 0);
  CHECK(json_of(r)["threshold"] == "4/1");
  CHECK(approvalkit::read_file(tmp.string()) == approvalkit::read_file(fixture("reduction_path3_t2.elec")));
  std::filesystem::remove(tmp);

  const auto to_stdout = run({"reduce", "is2pav", "--graph", graph("path3.graph"), "--target", "2"});
  CHECK(to_stdout.out.rfind("# threshold: 4/1\n", 0) == 0);
  CHECK(approvalkit::parse_election(to_stdout.out) ==
        approvalkit::parse_election(approvalkit::read_file(fixture("reduction_path3_t2.elec"))));

  const auto v = run({"verify", "reduction", "--graph", graph("triangle.graph"), "--target", "2", "--json"});
  REQUIRE(v.code == 0);
  const auto doc = json_of(v);
  CHECK(doc["holds"] == true);
  CHECK(doc["optimum"] == "7/2");
  CHECK(doc["independent_set"] == false);
}

TEST_CASE("exit codes", "[cli]") {
  CHECK(run({"winners", "--rule", "av", "--input", "/nonexistent/file.elec"}).code == 1);
  CHECK(run({"winners", "--rule", "xyz", "--input", fixture("deviation.elec")}).code == 1);
  CHECK(run({"winners", "--rule", "av", "--method", "greedy", "--input", fixture("deviation.elec")}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({}).code == 1);
  const auto fail = run({"manipulate", "wm", "--rule", "av", "--candidate", "c", "--manipulators", "0", "--input",
                         fixture("deviation.elec")});
  CHECK(fail.code == 2);
  CHECK(run({"manipulate", "wm", "--rule", "av", "--candidate", "zz", "--manipulators", "1", "--input",
             fixture("deviation.elec")})
            .code == 1);
  CHECK(run({"reduce", "is2pav", "--graph", graph("path3.graph"), "--target", "9"}).code == 1);
  const auto parse_error = run({"winners", "--rule", "av", "--input", graph("path3.graph")});
  CHECK(parse_error.code == 1);
  CHECK(parse_error.err.find("line 1") != std::string::npos);
}

TEST_CASE("APPROVALKIT_GUARD overrides the enumeration guards", "[cli]") {
  {
    const GuardOverride guard("2");
    const auto r = run({"winners", "--rule", "pav", "--method", "exact", "--input", fixture("pav_deviation.elec")});
    CHECK(r.code == 3);
    CHECK(r.err.find("branch-and-bound") != std::string::npos);
    CHECK(run({"manipulate", "wm", "--rule", "rav", "--candidate", "a", "--manipulators", "1", "--input",
               fixture("rav_k2.elec")})
              .code == 3);
  }
  {
    const GuardOverride guard("lots");
    CHECK(run({"winners", "--rule", "av", "--input", fixture("deviation.elec")}).code == 1);
  }
}

TEST_CASE("identical invocations give byte-identical output", "[cli]") {
  const std::vector<std::vector<std::string>> commands{
      {"winners", "--rule", "pav", "--input", fixture("rav_k3.elec"), "--json"},
      {"winners", "--rule", "rav", "--input", fixture("rav_k2.elec")},
      {"manipulate", "best-response", "--rule", "rav", "--utilities", "a=1", "--manipulators", "1", "--input",
       fixture("rav_k2.elec"), "--json"},
      {"audit", "--rule", "rav", "--truth", "a,b", "--input", fixture("deviation_fixed.elec")},
  };
  for (const auto& c : commands) {
    const auto first = run(c);
    const auto second = run(c);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
  }
}
