#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "adic/finite_ring.hpp"
#include "adic/tate.hpp"
#include "adic/text.hpp"

namespace adic {

inline constexpr const char* kToolName = "adic-kit";
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// Values the command line may override; they fill in whatever a script leaves unsaid.
struct ScriptDefaults {
  unsigned degree = kDefaultDegreeCap;
  int precision = kDefaultPrecision;
  unsigned prime = kDefaultPrime;
  /// Test rings for the lifting classifier; empty selects the built-in rings for the base.
  std::vector<FiniteRing> corpus;

  Json to_json() const;
};

/// Reads "default" or ring specs separated by ';'.
std::vector<FiniteRing> parse_corpus(std::string_view text);

struct Corpus {
  std::vector<FiniteRing> rings;
};

using Value = std::variant<Presentation, Morphism, FiniteRing, Corpus>;

/// "presentation", "morphism", "ring" or "corpus".
std::string kind_name(const Value& v);
/// Text that reads back to the same value.
std::string canonical_text(const Value& v);

struct Declaration {
  std::string name;
  SourcePos pos;
  Value value;
};

struct Outcome {
  Json result;
  std::string summary;
  bool inconclusive = false;
};

struct Command {
  std::string name;
  std::string op;  // subcommand word for padic, tate, witt and robba
  SourcePos pos;
  std::vector<std::string> args;
  std::vector<std::pair<std::string, std::string>> options;
  Json parameters;
  std::function<Outcome()> run;

  std::string echo() const;
};

struct ScriptItem {
  std::variant<Declaration, Command> node;
  std::string to_string() const;
};

struct Script {
  ScriptDefaults defaults;
  std::vector<ScriptItem> items;

  std::size_t command_count() const;
  friend bool operator==(const Script& a, const Script& b);
};

/// Throws ParseError for syntax errors, undefined names, arity errors and declarations the library rejects.
Script parse_script(std::string_view text, const ScriptDefaults& defaults = {});
/// One item per line; parse_script(print_script(s)) equals s.
std::string print_script(const Script& script);

struct Report {
  Json body;
  std::string summary;
  bool failed = false;
  bool inconclusive = false;
};

/// Executes the commands in script order. With jobs > 1 commands run concurrently and
/// the reports keep script order.
std::vector<Report> run_script(const Script& script, unsigned jobs = 1);

/// The full JSON document for a run.
Json report_document(const Script& script, const std::vector<Report>& reports);

/// Library operation names reached by each command.
const std::vector<std::pair<std::string, std::vector<std::string>>>& command_coverage();

}  // namespace adic
