#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "adic/error.hpp"
#include "adic/script.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCommandError = 1;
constexpr int kExitParseError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-precision adic algebra toolkit"};
  app.set_version_flag("--version", std::string(adic::kToolVersion));
  app.require_subcommand(1);

  std::string script_path;
  std::string out_path;
  std::string corpus = "default";
  unsigned degree = adic::kDefaultDegreeCap;
  int precision = adic::kDefaultPrecision;
  unsigned prime = adic::kDefaultPrime;
  unsigned jobs = 1;
  bool strict = false;

  CLI::App* run = app.add_subcommand("run", "Run a script and print a JSON report");
  run->add_option("script", script_path, "Script file (.adk)")->required();
  run->add_option("--degree", degree, "Default degree cap D")->check(CLI::Range(1u, 64u));
  run->add_option("--precision", precision, "Default p-adic precision N")->check(CLI::Range(1, 4096));
  run->add_option("--prime", prime, "Default prime p")->check(CLI::Range(2u, 97u));
  run->add_option("--corpus", corpus, "Test rings for classify-lifting: 'default' or specs separated by ';'");
  run->add_option("--jobs", jobs, "Commands run concurrently")->check(CLI::Range(1u, 64u));
  run->add_option("--out", out_path, "Write the report here instead of stdout");
  run->add_flag("--strict", strict, "Inconclusive verdicts fail the run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitCommandError;
  }

  std::ifstream in(script_path, std::ios::binary);
  if (!in) {
    std::cerr << "adic-kit: cannot read " << script_path << "\n";
    return kExitCommandError;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  adic::ScriptDefaults defaults;
  defaults.degree = degree;
  defaults.precision = precision;
  defaults.prime = prime;
  adic::Script script;
  try {
    defaults.corpus = adic::parse_corpus(corpus);
  } catch (const adic::Error& e) {
    std::cerr << "adic-kit: --corpus: " << e.what() << "\n";
    return kExitParseError;
  }
  try {
    script = adic::parse_script(buffer.str(), defaults);
  } catch (const adic::ParseError& e) {
    std::cerr << script_path << ":" << e.pos().to_string() << ": " << e.bare_message() << "\n";
    return kExitParseError;
  }

  auto reports = adic::run_script(script, jobs);
  std::string text = adic::report_document(script, reports).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "adic-kit: cannot write " << out_path << "\n";
      return kExitCommandError;
    }
    out << text;
  }

  std::size_t failed = 0, inconclusive = 0;
  for (const auto& r : reports) {
    std::cerr << "[" << r.body["position"].get<std::string>() << "] " << r.body["command"].get<std::string>() << ": "
              << r.summary << "\n";
    failed += r.failed;
    inconclusive += r.inconclusive;
  }
  std::cerr << reports.size() << " commands, " << failed << " errors, " << inconclusive << " inconclusive\n";
  if (failed) return kExitCommandError;
  if (strict && inconclusive) return kExitCommandError;
  return kExitOk;
}
