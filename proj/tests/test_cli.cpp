#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "adic/script.hpp"

using namespace adic;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> fixtures() {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(ADIC_FIXTURE_DIR))
    if (entry.path().extension() == ".adk") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::string run_text(const Script& s, unsigned jobs) { return report_document(s, run_script(s, jobs)).dump(2); }

int cli(const std::string& args) {
  std::string cmd = std::string(ADIC_KIT_BINARY) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path temp_script(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

}  // namespace

TEST_CASE("parse examples") {
  auto s = parse_script("A = Tate(Qp(2,8),[T]); B = Quot(A,[u],[u - T^2]); classify B;");
  CHECK(s.items.size() == 3);
  CHECK(s.command_count() == 1);

  try {
    parse_script("classify C;");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()) == "undefined name C at 1:10");
  }

  CHECK_THROWS_AS(parse_script("A = Tate(Qp(2,8),[T]); classify A, A;"), ParseError);
  CHECK_THROWS_AS(parse_script("A = Tate(Qp(2,8),[T]); glue-check A, T;"), ParseError);
  CHECK_THROWS_AS(parse_script("A = Tate(Qp(2,8),[T]); classify A, bogus=1;"), ParseError);
  CHECK_THROWS_AS(parse_script("A = Tate(Qp(2,8),[T]); A = Tate(Qp(2,8),[S]);"), ParseError);
  CHECK_THROWS_AS(parse_script("A = Tate(Qp(2,8),[T]) classify A;"), ParseError);
  CHECK_THROWS_AS(parse_script("frobnicate;"), ParseError);
  CHECK_THROWS_AS(parse_script("witt twist GF(2), (1, 0);"), ParseError);
}

TEST_CASE("nested quotients flatten and print back") {
  auto s = parse_script("N = Quot(Quot(Tate(Qp(2,8),[T]),[u],[u - T^2]),[v],[v^2 - v - u]); classify N;");
  const auto& decl = std::get<Declaration>(s.items[0].node);
  const auto& pres = std::get<Presentation>(decl.value);
  CHECK(pres.base_vars() == std::vector<std::string>{"T", "u"});
  CHECK(pres.vars() == std::vector<std::string>{"v"});
  auto again = parse_script(print_script(s));
  CHECK(again == s);
  CHECK(print_script(again) == print_script(s));
}

TEST_CASE("fixtures reach a parse/print fixpoint") {
  auto files = fixtures();
  REQUIRE(files.size() >= 7);
  for (const auto& f : files) {
    CAPTURE(f.string());
    auto s = parse_script(read_file(f));
    auto printed = print_script(s);
    auto reparsed = parse_script(printed);
    CHECK(reparsed == s);
    CHECK(print_script(reparsed) == printed);
  }
}

TEST_CASE("reports are deterministic across runs and job counts") {
  auto s = parse_script(read_file(std::filesystem::path(ADIC_FIXTURE_DIR) / "morphisms.adk"));
  auto first = run_text(s, 1);
  CHECK(run_text(s, 1) == first);
  CHECK(run_text(s, 4) == first);
}

TEST_CASE("run examples") {
  auto s = parse_script("witt add GF(2), (1, 0), (1, 0);");
  auto reports = run_script(s);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].body["status"] == "ok");
  CHECK(reports[0].body["result"]["result"] == "(0, 1)");

  auto g = parse_script("A = Tate(Qp(2,8),[T]); glue-check A, T, 2, D=6, N=6;");
  auto gr = run_script(g);
  REQUIRE(gr.size() == 1);
  CHECK(gr[0].body["result"]["left"] == "exact");
  CHECK(gr[0].body["result"]["middle"] == "exact");
  CHECK(gr[0].body["result"]["right"] == "exact");

  auto c = parse_script("A = Tate(Qp(2,8),[T]); L = Loc(A, T, 2); classify L;");
  CHECK(run_script(c)[0].body["result"]["verdict"] == "etale");

  auto bad = parse_script("padic div 1, 0;");
  auto br = run_script(bad);
  CHECK(br[0].failed);
  CHECK(br[0].body["status"] == "error");

  auto doc = report_document(s, reports);
  CHECK(doc["tool"] == kToolName);
  CHECK(doc["version"] == kToolVersion);
  CHECK(doc["totals"]["commands"] == 1);
}

TEST_CASE("every library operation is reachable from a command that the fixtures exercise") {
  const std::vector<std::string> ops{
      "padic_arith",           "finite_ring_build",       "nilradical",          "tate_arith",
      "gauss_norm",            "groebner_basis",          "normal_form",         "compose_presentations",
      "base_change",           "rational_localization",   "covering_check",      "gluing_sequence_check",
      "joint_surjection_lift", "kahler_differentials",    "naive_cotangent_complex", "classify_morphism",
      "de_rham_complex",       "etale_integration",       "point_set",           "de_rham_point_set",
      "enumerate_nilpotent_ideals", "enumerate_pd_structures", "crystalline_point_set", "classify_lifting",
      "witt_arith",            "frobenius_witt",          "tilt",                "robba_norm",
      "interval_norm",         "phi_action",              "parse_script",        "run_script"};
  std::set<std::string> reached;
  std::set<std::string> exercised;
  for (const auto& f : fixtures()) {
    auto s = parse_script(read_file(f));
    for (const auto& item : s.items)
      if (const auto* c = std::get_if<Command>(&item.node)) exercised.insert(c->name);
  }
  for (const auto& [command, names] : command_coverage()) {
    CAPTURE(command);
    CHECK(exercised.count(command) == 1);
    reached.insert(names.begin(), names.end());
  }
  for (const auto& op : ops) {
    CAPTURE(op);
    CHECK(reached.count(op) == 1);
  }
}

TEST_CASE("command line exit codes") {
  auto ok = temp_script("adk_ok.adk", "witt add GF(2), (1, 0), (1, 0);\n");
  auto parse_bad = temp_script("adk_parse.adk", "classify C;\n");
  auto cmd_bad = temp_script("adk_cmd.adk", "padic div 1, 0;\n");
  auto inconclusive = temp_script("adk_inc.adk",
                                  "A = Tate(Qp(2,8),[T]);\nB = Quot(A,[u],[u - T^2]);\nC = Quot(A,[v],[v - T]);\n"
                                  "joint-lift A, T, 1, [u], [v];\n");
  CHECK(cli("run " + ok.string()) == 0);
  CHECK(cli("run " + parse_bad.string()) == 2);
  CHECK(cli("run " + cmd_bad.string()) == 1);
  CHECK(cli("run " + ok.string() + " --corpus 'GF(2);Nonsense('") == 2);
  CHECK(cli("run /nonexistent/script.adk") == 1);
  CHECK(cli("run " + inconclusive.string()) == 0);
  CHECK(cli("run " + inconclusive.string() + " --strict") == 1);

  auto out = std::filesystem::temp_directory_path() / "adk_report.json";
  auto out2 = std::filesystem::temp_directory_path() / "adk_report2.json";
  std::string fixture = (std::filesystem::path(ADIC_FIXTURE_DIR) / "witt_robba.adk").string();
  CHECK(cli("run " + fixture + " --out " + out.string()) == 0);
  CHECK(cli("run " + fixture + " --jobs 4 --out " + out2.string()) == 0);
  CHECK(read_file(out) == read_file(out2));
  auto doc = Json::parse(read_file(out));
  CHECK(doc["defaults"]["D"] == 8);
  CHECK(doc["defaults"]["N"] == 8);
  CHECK(doc["defaults"]["p"] == 2);
}
