#include "adic/script.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "adic/differentials.hpp"
#include "adic/error.hpp"
#include "adic/infinitesimal.hpp"
#include "adic/localization.hpp"
#include "adic/padic.hpp"
#include "adic/robba.hpp"
#include "adic/witt.hpp"

namespace adic {

namespace {

std::string join_parts(const std::vector<std::string>& parts, const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::string> poly_texts(const std::vector<Poly>& polys, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const Poly& p : polys) out.push_back(p.to_string(names));
  return out;
}

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const DomainMismatch*>(&e)) return "DomainMismatch";
  if (dynamic_cast<const DivisionByZero*>(&e)) return "DivisionByZero";
  if (dynamic_cast<const PrecisionLoss*>(&e)) return "PrecisionLoss";
  if (dynamic_cast<const BoundExceeded*>(&e)) return "BoundExceeded";
  if (dynamic_cast<const Unsupported*>(&e)) return "Unsupported";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "InvalidArgument";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "InternalError";
}

Json corpus_json(const std::vector<FiniteRing>& rings) {
  if (rings.empty()) return "default";
  Json out = Json::array();
  for (const FiniteRing& r : rings) out.push_back(r.spec());
  return out;
}

std::string scope_text(unsigned D, int N) {
  std::string out = "verified up to D=" + std::to_string(D);
  if (N > 0) out += ", N=" + std::to_string(N);
  return out;
}

/// Tokens of one comma-separated argument; `end` is where the argument stops.
struct Slice {
  std::vector<Token> tokens;
  SourcePos end;

  SourcePos pos() const { return tokens.empty() ? end : tokens.front().pos; }
  bool is_name() const { return tokens.size() == 1 && tokens.front().kind == TokenKind::Identifier; }
  TokenStream stream() const {
    std::vector<Token> t = tokens;
    Token stop;
    stop.kind = TokenKind::End;
    stop.pos = end;
    t.push_back(stop);
    return TokenStream(std::move(t));
  }
};

void finish(const TokenStream& ts) {
  if (!ts.at_end()) ts.fail("unexpected '" + ts.peek().text + "'");
}

struct Invocation {
  std::string name;
  std::string op;
  SourcePos pos;
  std::vector<Slice> args;
  std::vector<std::pair<std::string, Slice>> options;

  const Slice* option(const std::string& key) const {
    for (const auto& [k, v] : options)
      if (k == key) return &v;
    return nullptr;
  }
};

struct CommandSpec {
  std::string name;
  std::vector<std::string> ops;
  std::size_t min_args = 0;
  std::size_t max_args = 0;
  std::vector<std::string> options;
  std::vector<std::string> coverage;
};

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"print", {}, 1, 1, {}, {"parse_script", "run_script"}},
      {"ring", {}, 1, 1, {}, {"finite_ring_build", "nilradical"}},
      {"padic", {"add", "sub", "mul", "div"}, 2, 2, {"p", "N"}, {"padic_arith"}},
      {"tate", {"add", "sub", "mul"}, 3, 3, {}, {"tate_arith"}},
      {"gauss-norm", {}, 2, 2, {}, {"gauss_norm"}},
      {"groebner", {}, 1, 2, {}, {"groebner_basis"}},
      {"normal-form", {}, 2, 2, {}, {"normal_form"}},
      {"compose", {}, 2, 2, {}, {"compose_presentations"}},
      {"base-change", {}, 2, 2, {}, {"base_change"}},
      {"localize", {}, 3, 4, {}, {"rational_localization"}},
      {"covering-check", {}, 3, 3, {}, {"covering_check"}},
      {"glue-check", {}, 3, 3, {"D", "N", "mutate"}, {"gluing_sequence_check"}},
      {"joint-lift", {}, 5, 5, {"D", "N"}, {"joint_surjection_lift"}},
      {"kahler", {}, 1, 1, {}, {"kahler_differentials"}},
      {"cotangent-complex", {}, 1, 1, {}, {"naive_cotangent_complex"}},
      {"classify", {}, 1, 1, {"pieces"}, {"classify_morphism"}},
      {"drham", {}, 1, 1, {"top"}, {"de_rham_complex"}},
      {"integrate", {}, 4, 4, {}, {"etale_integration"}},
      {"points", {}, 2, 2, {}, {"point_set"}},
      {"dr-points", {}, 2, 2, {}, {"de_rham_point_set"}},
      {"crys-points", {}, 2, 2, {}, {"crystalline_point_set"}},
      {"nil-ideals", {}, 1, 1, {}, {"enumerate_nilpotent_ideals"}},
      {"pd-structures", {}, 2, 2, {}, {"enumerate_pd_structures"}},
      {"classify-lifting", {}, 1, 1, {"mode", "corpus"}, {"classify_lifting"}},
      {"witt", {"add", "mul", "frob", "ver"}, 2, 3, {"lift"}, {"witt_arith", "frobenius_witt", "verschiebung"}},
      {"tilt", {}, 1, 1, {"depth"}, {"tilt"}},
      {"robba", {"add", "mul", "phi"}, 1, 2, {"p", "length", "cap"}, {"phi_action"}},
      {"robba-norm", {}, 2, 2, {"p", "length", "cap"}, {"robba_norm"}},
      {"interval-norm", {}, 3, 3, {"p", "length", "cap"}, {"interval_norm"}},
  };
  return specs;
}

const CommandSpec* find_spec(const std::string& name) {
  for (const CommandSpec& s : command_specs())
    if (s.name == name) return &s;
  return nullptr;
}

Json verdict_json(const Classification& c) {
  Json j;
  j["verdict"] = to_string(c.verdict);
  j["etale"] = c.etale;
  j["lisse"] = c.lisse;
  j["non_ramifie"] = c.non_ramifie;
  j["h_minus1"] = c.h_minus1;
  j["h0"] = c.h0;
  j["pieces"] = c.pieces;
  j["flags"] = c.flags;
  j["truncation"] = {{"D", c.degree_cap}, {"N", c.precision > 0 ? Json(c.precision) : Json(nullptr)}};
  j["scope"] = scope_text(c.degree_cap, c.precision);
  return j;
}

std::string format_elems(const FiniteRing& R, const std::vector<FiniteRing::Elem>& elems) {
  std::vector<std::string> parts;
  for (auto e : elems) parts.push_back(R.format(e));
  return "{" + join_parts(parts) + "}";
}

Json elems_json(const FiniteRing& R, const std::vector<FiniteRing::Elem>& elems) {
  Json out = Json::array();
  for (auto e : elems) out.push_back(R.format(e));
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const ScriptDefaults& defaults) : ts_(tokenize(text)), defaults_(defaults) {}

  Script run() {
    Script script;
    script.defaults = defaults_;
    while (!ts_.at_end()) {
      if (ts_.peek().kind == TokenKind::Identifier && ts_.is_symbol("=", 1)) {
        script.items.push_back({declaration()});
      } else {
        script.items.push_back({command()});
      }
    }
    return script;
  }

 private:
  // ------------------------------------------------------------ declarations

  Declaration declaration() {
    const Token name = ts_.next();
    ts_.expect_symbol("=");
    if (env_.count(name.text)) throw ParseError(name.text + " is already declared", name.pos);
    Value v = expression(ts_);
    ts_.expect_symbol(";");
    env_.emplace(name.text, v);
    return {name.text, name.pos, std::move(v)};
  }

  const Value& lookup(const Token& t) const {
    auto it = env_.find(t.text);
    if (it == env_.end()) throw ParseError("undefined name " + t.text, t.pos);
    return it->second;
  }

  Value expression(TokenStream& ts) {
    const Token head = ts.peek();
    if (head.kind != TokenKind::Identifier) ts.fail("expected an expression");
    if (!ts.is_symbol("(", 1)) {
      ts.next();
      return lookup(head);
    }
    try {
      return constructor(ts);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), head.pos);
    }
  }

  Value constructor(TokenStream& ts) {
    const Token head = ts.next();
    const std::string& w = head.text;
    ts.expect_symbol("(");
    Value out;
    if (w == "Tate") {
      Coefficients c = coefficients(ts);
      ts.expect_symbol(",");
      auto vars = name_list(ts, {});
      unsigned cap = defaults_.degree;
      if (ts.accept_symbol(";")) {
        if (!ts.is_identifier("D")) ts.fail("expected D=");
        ts.next();
        ts.expect_symbol("=");
        long d = ts.expect_integer();
        if (d < 1) ts.fail("degree cap must be positive");
        cap = static_cast<unsigned>(d);
      }
      out = Presentation::tate(c, vars, cap);
    } else if (w == "Quot") {
      Presentation base = presentation(ts);
      ts.expect_symbol(",");
      auto vars = name_list(ts, base.all_vars());
      ts.expect_symbol(",");
      auto names = base.all_vars();
      names.insert(names.end(), vars.begin(), vars.end());
      auto rels = poly_list(ts, names, base.field());
      out = Presentation::quotient(base, vars, rels);
    } else if (w == "Loc") {
      Presentation base = presentation(ts);
      ts.expect_symbol(",");
      Poly f = parse_poly(ts, base.all_vars(), base.field());
      ts.expect_symbol(",");
      Poly g = parse_poly(ts, base.all_vars(), base.field());
      std::string var = "u";
      if (ts.accept_symbol(",")) var = ts.expect_identifier().text;
      out = rational_localization(base, f, g, var).pres;
    } else if (w == "Hom") {
      Presentation src = presentation(ts);
      ts.expect_symbol(",");
      Presentation tgt = presentation(ts);
      ts.expect_symbol(",");
      Morphism m(src, tgt, poly_list(ts, tgt.all_vars(), tgt.field()));
      m.check();
      out = m;
    } else if (w == "Structural") {
      out = Morphism::structural(presentation(ts));
    } else if (w == "Identity") {
      out = Morphism::identity(presentation(ts));
    } else if (w == "Compose") {
      Morphism f = morphism(ts);
      ts.expect_symbol(",");
      out = compose(f, morphism(ts));
    } else if (w == "BaseChange") {
      Presentation p = presentation(ts);
      ts.expect_symbol(",");
      out = base_change(p, morphism(ts));
    } else if (w == "Ring") {
      out = FiniteRing::parse(ts);
    } else if (w == "Corpus") {
      Corpus c;
      do c.rings.push_back(ring(ts));
      while (ts.accept_symbol(","));
      out = c;
    } else {
      throw ParseError("unknown constructor " + w, head.pos);
    }
    ts.expect_symbol(")");
    return out;
  }

  template <class T>
  T typed(TokenStream& ts, const char* what) {
    SourcePos at = ts.peek().pos;
    Value v = expression(ts);
    if (auto* p = std::get_if<T>(&v)) return *p;
    throw ParseError("expected a " + std::string(what) + ", got a " + kind_name(v), at);
  }

  Presentation presentation(TokenStream& ts) { return typed<Presentation>(ts, "presentation"); }
  Morphism morphism(TokenStream& ts) { return typed<Morphism>(ts, "morphism"); }

  FiniteRing ring(TokenStream& ts) {
    const Token head = ts.peek();
    if (head.kind == TokenKind::Identifier && !ts.is_symbol("(", 1)) {
      ts.next();
      const Value& v = lookup(head);
      if (auto* r = std::get_if<FiniteRing>(&v)) return *r;
      throw ParseError("expected a ring, got a " + kind_name(v), head.pos);
    }
    try {
      return FiniteRing::parse(ts);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), head.pos);
    }
  }

  Coefficients coefficients(TokenStream& ts) {
    const Token head = ts.next();
    if (head.kind != TokenKind::Identifier) throw ParseError("expected coefficients", head.pos);
    auto prime = [&](long p) {
      if (p < 2 || !is_prime(static_cast<unsigned long>(p))) throw ParseError(std::to_string(p) + " is not prime", head.pos);
      return static_cast<unsigned>(p);
    };
    if (head.text == "Qp") {
      unsigned p = defaults_.prime;
      int n = defaults_.precision;
      if (ts.accept_symbol("(")) {
        p = prime(ts.expect_integer());
        if (ts.accept_symbol(",")) {
          long v = ts.expect_integer();
          if (v < 1) ts.fail("precision must be positive");
          n = static_cast<int>(v);
        }
        ts.expect_symbol(")");
      }
      return Coefficients::padic(p, n);
    }
    if (head.text == "GF") {
      ts.expect_symbol("(");
      unsigned p = prime(ts.expect_integer());
      ts.expect_symbol(")");
      return Coefficients::finite_field(p);
    }
    if (head.text == "ZZ") return Coefficients::integers();
    if (head.text == "Zmod") {
      ts.expect_symbol("(");
      long m = ts.expect_integer();
      if (m < 2) ts.fail("modulus must be at least 2");
      ts.expect_symbol(")");
      return Coefficients::integers_mod(static_cast<unsigned long>(m));
    }
    throw ParseError("unknown coefficients " + head.text, head.pos);
  }

  std::vector<std::string> name_list(TokenStream& ts, const std::vector<std::string>& taken) {
    ts.expect_symbol("[");
    std::vector<std::string> out;
    if (ts.accept_symbol("]")) return out;
    do {
      const Token& t = ts.expect_identifier();
      if (std::count(taken.begin(), taken.end(), t.text) || std::count(out.begin(), out.end(), t.text))
        throw ParseError("duplicate variable " + t.text, t.pos);
      out.push_back(t.text);
    } while (ts.accept_symbol(","));
    ts.expect_symbol("]");
    return out;
  }

  std::vector<Poly> poly_list(TokenStream& ts, const std::vector<std::string>& names, Field field) {
    ts.expect_symbol("[");
    std::vector<Poly> out;
    if (ts.accept_symbol("]")) return out;
    do out.push_back(parse_poly(ts, names, field));
    while (ts.accept_symbol(","));
    ts.expect_symbol("]");
    return out;
  }

  // ---------------------------------------------------------------- commands

  Command command() {
    const Token head = ts_.next();
    if (head.kind != TokenKind::Identifier) throw ParseError("expected a command or declaration", head.pos);
    const CommandSpec* spec = find_spec(head.text);
    if (!spec) throw ParseError("unknown command " + head.text, head.pos);
    Invocation inv;
    inv.name = spec->name;
    inv.pos = head.pos;
    if (!spec->ops.empty()) {
      const Token& op = ts_.peek();
      if (op.kind != TokenKind::Identifier || std::find(spec->ops.begin(), spec->ops.end(), op.text) == spec->ops.end())
        throw ParseError(spec->name + " needs one of: " + join_parts(spec->ops), op.pos);
      inv.op = ts_.next().text;
    }
    for (Slice& s : split_arguments()) {
      if (s.tokens.size() >= 2 && s.tokens[0].kind == TokenKind::Identifier && s.tokens[1].text == "=" &&
          s.tokens[1].kind == TokenKind::Symbol) {
        const Token key = s.tokens[0];
        if (std::find(spec->options.begin(), spec->options.end(), key.text) == spec->options.end())
          throw ParseError("unknown option " + key.text + " for " + spec->name, key.pos);
        if (inv.option(key.text)) throw ParseError("option " + key.text + " given twice", key.pos);
        Slice value{std::vector<Token>(s.tokens.begin() + 2, s.tokens.end()), s.end};
        if (value.tokens.empty()) throw ParseError("option " + key.text + " needs a value", s.end);
        inv.options.emplace_back(key.text, std::move(value));
      } else {
        inv.args.push_back(std::move(s));
      }
    }
    if (inv.args.size() < spec->min_args || inv.args.size() > spec->max_args) {
      std::string want = spec->min_args == spec->max_args
                             ? std::to_string(spec->min_args)
                             : std::to_string(spec->min_args) + " to " + std::to_string(spec->max_args);
      throw ParseError(spec->name + " expects " + want + " argument" + (spec->max_args == 1 ? "" : "s") + ", got " +
                           std::to_string(inv.args.size()),
                       head.pos);
    }
    try {
      return build(inv);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), head.pos);
    }
  }

  std::vector<Slice> split_arguments() {
    std::vector<Slice> out;
    Slice cur;
    int depth = 0;
    while (true) {
      const Token& t = ts_.peek();
      if (t.kind == TokenKind::End) ts_.fail("expected ';'");
      if (t.kind == TokenKind::Symbol && depth == 0 && (t.text == ";" || t.text == ",")) {
        cur.end = t.pos;
        bool last = t.text == ";";
        if (cur.tokens.empty() && !(last && out.empty())) throw ParseError("empty argument", t.pos);
        if (!cur.tokens.empty()) out.push_back(std::move(cur));
        cur = Slice{};
        ts_.next();
        if (last) return out;
        continue;
      }
      if (t.kind == TokenKind::Symbol) {
        if (t.text == "(" || t.text == "[") ++depth;
        if (t.text == ")" || t.text == "]") {
          if (depth == 0) throw ParseError("unbalanced '" + t.text + "'", t.pos);
          --depth;
        }
      }
      cur.tokens.push_back(ts_.next());
    }
  }

  // argument readers: each returns the value and appends its canonical text

  struct Args {
    std::vector<std::string> texts;
    std::vector<std::pair<std::string, std::string>> options;
  };

  Value value_arg(const Slice& s, std::string& text) {
    TokenStream ts = s.stream();
    Value v = expression(ts);
    finish(ts);
    text = s.is_name() ? s.tokens.front().text : canonical_text(v);
    return v;
  }

  /// A presentation, or a morphism standing for its target presented relative to its source.
  Presentation presentation_arg(const Slice& s, Args& a, bool allow_morphism = true) {
    std::string text;
    Value v = value_arg(s, text);
    a.texts.push_back(text);
    if (auto* p = std::get_if<Presentation>(&v)) return *p;
    if (auto* m = std::get_if<Morphism>(&v); m && allow_morphism) return m->relative();
    throw ParseError("expected a presentation, got a " + kind_name(v), s.pos());
  }

  Morphism morphism_arg(const Slice& s, Args& a) {
    std::string text;
    Value v = value_arg(s, text);
    a.texts.push_back(text);
    if (auto* m = std::get_if<Morphism>(&v)) return *m;
    throw ParseError("expected a morphism, got a " + kind_name(v), s.pos());
  }

  FiniteRing ring_arg(const Slice& s, std::vector<std::string>& texts) {
    TokenStream ts = s.stream();
    FiniteRing R = ring(ts);
    finish(ts);
    texts.push_back(s.is_name() ? s.tokens.front().text : R.spec());
    return R;
  }

  Poly poly_arg(const Slice& s, const std::vector<std::string>& names, Field field, std::vector<std::string>& texts) {
    TokenStream ts = s.stream();
    Poly p = parse_poly(ts, names, field);
    finish(ts);
    texts.push_back(p.to_string(names));
    return p;
  }

  std::vector<Poly> poly_list_arg(const Slice& s, const std::vector<std::string>& names, Field field,
                                  std::vector<std::string>& texts) {
    TokenStream ts = s.stream();
    auto polys = poly_list(ts, names, field);
    finish(ts);
    texts.push_back("[" + join_parts(poly_texts(polys, names)) + "]");
    return polys;
  }

  mpq_class rational_arg(const Slice& s, std::vector<std::string>& texts) {
    TokenStream ts = s.stream();
    mpq_class q = parse_rational(ts);
    finish(ts);
    texts.push_back(q.get_str());
    return q;
  }

  std::string word_arg(const Slice& s) {
    if (!s.is_name()) throw ParseError("expected a name", s.pos());
    return s.tokens.front().text;
  }

  long integer_option(const Invocation& inv, Args& a, const std::string& key, long fallback, long lo, long hi) {
    const Slice* s = inv.option(key);
    if (!s) return fallback;
    TokenStream ts = s->stream();
    bool negative = ts.accept_symbol("-");
    long v = ts.expect_integer();
    finish(ts);
    if (negative) v = -v;
    if (v < lo || v > hi)
      throw ParseError("option " + key + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]", s->pos());
    a.options.emplace_back(key, std::to_string(v));
    return v;
  }

  std::string word_option(const Invocation& inv, Args& a, const std::string& key, const std::string& fallback,
                          const std::vector<std::string>& allowed) {
    const Slice* s = inv.option(key);
    if (!s) return fallback;
    std::string w = word_arg(*s);
    if (std::find(allowed.begin(), allowed.end(), w) == allowed.end())
      throw ParseError("option " + key + " must be one of: " + join_parts(allowed), s->pos());
    a.options.emplace_back(key, w);
    return w;
  }

  /// N <= 0 marks coefficients without a p-adic precision.
  Json params(unsigned D, int N, unsigned p) const {
    Json j;
    j["D"] = D;
    j["N"] = N > 0 ? Json(N) : Json(nullptr);
    j["p"] = p;
    j["corpus"] = corpus_json(defaults_.corpus);
    return j;
  }

  Json params_for(const Presentation& pres) const {
    const Coefficients& c = pres.coefficients();
    int N = c.kind == Coefficients::Kind::Padic ? c.precision : 0;
    unsigned p = (c.kind == Coefficients::Kind::Padic || c.kind == Coefficients::Kind::FiniteField) ? c.p : defaults_.prime;
    return params(pres.degree_cap(), N, p);
  }

  Json params_for(const FiniteRing& R) const {
    unsigned long c = R.characteristic();
    unsigned p = defaults_.prime;
    for (unsigned q = 2; q <= c; ++q)
      if (c % q == 0) {
        p = q;
        break;
      }
    return params(defaults_.degree, defaults_.precision, p);
  }

  static unsigned padic_prime(const Presentation& pres) {
    const Coefficients& c = pres.coefficients();
    if (c.kind != Coefficients::Kind::Padic) throw Unsupported("needs p-adic coefficients, got " + c.to_string());
    return c.p;
  }

  Command build(const Invocation& inv) {
    Command cmd;
    cmd.name = inv.name;
    cmd.op = inv.op;
    cmd.pos = inv.pos;
    Args a;
    const auto& args = inv.args;
    const std::string& n = inv.name;

    if (n == "print") {
      std::string text;
      Value v = value_arg(args[0], text);
      a.texts.push_back(text);
      cmd.parameters = params(defaults_.degree, defaults_.precision, defaults_.prime);
      cmd.run = [v, text] {
        Outcome o;
        o.result["kind"] = kind_name(v);
        o.result["value"] = canonical_text(v);
        o.summary = text + " is a " + kind_name(v);
        return o;
      };
    } else if (n == "ring") {
      FiniteRing R = ring_arg(args[0], a.texts);
      cmd.parameters = params_for(R);
      cmd.run = [R] {
        Outcome o;
        o.result["spec"] = R.spec();
        o.result["size"] = R.size();
        o.result["characteristic"] = R.characteristic();
        o.result["reduced"] = R.is_reduced();
        o.result["nilradical"] = elems_json(R, R.nilradical());
        o.summary = R.spec() + ": " + std::to_string(R.size()) + " elements, nilradical of size " +
                    std::to_string(R.nilradical().size());
        return o;
      };
    } else if (n == "padic") {
      long p = integer_option(inv, a, "p", defaults_.prime, 2, 1000003);
      if (!is_prime(static_cast<unsigned long>(p))) throw ParseError(std::to_string(p) + " is not prime", inv.option("p")->pos());
      long N = integer_option(inv, a, "N", defaults_.precision, 1, 4096);
      mpq_class x = rational_arg(args[0], a.texts), y = rational_arg(args[1], a.texts);
      std::string op = inv.op;
      cmd.parameters = params(defaults_.degree, static_cast<int>(N), static_cast<unsigned>(p));
      cmd.run = [x, y, p, N, op] {
        auto up = static_cast<unsigned>(p);
        auto a1 = PadicNumber::from_rational(up, static_cast<int>(N), x);
        auto b1 = PadicNumber::from_rational(up, static_cast<int>(N), y);
        PadicNumber r = op == "add" ? a1 + b1 : op == "sub" ? a1 - b1 : op == "mul" ? a1 * b1 : a1 / b1;
        Outcome o;
        o.result["value"] = r.to_string();
        o.result["exact"] = r.is_exact();
        o.result["zero"] = r.is_zero();
        if (r.is_zero()) {
          o.result["valuation"] = nullptr;
        } else {
          o.result["valuation"] = r.valuation();
        }
        o.result["unit"] = r.unit().get_str();
        o.result["norm"] = r.norm().to_string();
        o.summary = op + "(" + x.get_str() + ", " + y.get_str() + ") = " + r.to_string();
        return o;
      };
    } else if (n == "tate" || n == "gauss-norm") {
      Presentation A = presentation_arg(args[0], a, false);
      unsigned p = padic_prime(A);
      int N = A.coefficients().precision;
      auto vars = A.all_vars();
      Field q = Field::rationals();
      std::vector<Poly> polys;
      for (std::size_t i = 1; i < args.size(); ++i) polys.push_back(poly_arg(args[i], vars, q, a.texts));
      cmd.parameters = params_for(A);
      std::string op = inv.op;
      unsigned D = A.degree_cap();
      cmd.run = [polys, p, N, vars, D, op] {
        std::vector<TateSeries> s;
        for (const Poly& f : polys) s.push_back(TateSeries::from_poly(f, p, N, vars, D));
        TateSeries r = s.size() == 1 ? s[0] : op == "add" ? s[0] + s[1] : op == "sub" ? s[0] - s[1] : s[0] * s[1];
        Outcome o;
        o.result["series"] = r.to_string();
        o.result["overflow"] = r.overflow();
        o.result["gauss_norm"] = r.gauss_norm().to_string();
        o.summary = r.to_string() + " with Gauss norm " + r.gauss_norm().to_string() + (r.overflow() ? " (truncated)" : "");
        return o;
      };
    } else if (n == "groebner") {
      Presentation A = presentation_arg(args[0], a, false);
      unsigned p = padic_prime(A);
      auto vars = A.all_vars();
      std::vector<Poly> gens = args.size() > 1 ? poly_list_arg(args[1], vars, Field::rationals(), a.texts)
                                               : A.absolute().relations();
      cmd.parameters = params_for(A);
      int N = A.coefficients().precision;
      unsigned D = A.degree_cap();
      cmd.run = [gens, vars, p, N, D] {
        std::vector<TateSeries> s;
        for (const Poly& f : gens) s.push_back(TateSeries::from_poly(f, p, N, vars, D));
        Outcome o;
        GroebnerResult g;
        if (s.empty()) {
          g.dimension = static_cast<int>(vars.size());
        } else {
          g = groebner_basis(s);
        }
        o.result["basis"] = poly_texts(g.basis, vars);
        o.result["dimension"] = g.dimension;
        o.summary = std::to_string(g.basis.size()) + " basis elements, dimension " + std::to_string(g.dimension);
        return o;
      };
    } else if (n == "normal-form") {
      Presentation B = presentation_arg(args[0], a, false);
      Poly f = poly_arg(args[1], B.all_vars(), B.field(), a.texts);
      cmd.parameters = params_for(B);
      cmd.run = [B, f] {
        NormalForm nf = normal_form(f, B);
        Outcome o;
        o.result["normal_form"] = nf.poly.to_string(B.all_vars());
        o.result["series"] = nf.series.to_string();
        o.result["overflow"] = nf.series.overflow();
        o.result["gauss_norm"] = nf.series.gauss_norm().to_string();
        o.summary = "normal form " + nf.poly.to_string(B.all_vars());
        return o;
      };
    } else if (n == "compose" || n == "base-change") {
      Presentation P;
      std::optional<Morphism> f;
      if (n == "compose") {
        f = morphism_arg(args[0], a);
      } else {
        P = presentation_arg(args[0], a, false);
      }
      Morphism g = morphism_arg(args[1], a);
      cmd.parameters = params_for(g.target());
      bool is_compose = n == "compose";
      cmd.run = [f, g, P, is_compose] {
        Outcome o;
        if (is_compose) {
          Morphism h = compose(*f, g);
          o.result["morphism"] = canonical_text(Value(h));
          o.result["structural"] = h.is_structural();
          o.summary = "composite into " + h.target().to_string();
        } else {
          Presentation q = base_change(P, g);
          o.result["presentation"] = q.to_string();
          o.summary = q.to_string();
        }
        return o;
      };
    } else if (n == "localize") {
      Presentation B = presentation_arg(args[0], a, false);
      Poly f = poly_arg(args[1], B.all_vars(), B.field(), a.texts);
      Poly g = poly_arg(args[2], B.all_vars(), B.field(), a.texts);
      std::string var = "u";
      if (args.size() > 3) {
        var = word_arg(args[3]);
        a.texts.push_back(var);
      }
      cmd.parameters = params_for(B);
      cmd.run = [B, f, g, var] {
        RationalLocalization loc = rational_localization(B, f, g, var);
        Outcome o;
        o.result["presentation"] = loc.pres.to_string();
        o.result["variable"] = loc.pres.vars().back();
        o.result["structural"] = canonical_text(Value(loc.structural));
        o.summary = loc.pres.to_string();
        return o;
      };
    } else if (n == "covering-check") {
      Presentation B = presentation_arg(args[0], a, false);
      Poly f = poly_arg(args[1], B.all_vars(), B.field(), a.texts);
      Poly g = poly_arg(args[2], B.all_vars(), B.field(), a.texts);
      cmd.parameters = params_for(B);
      cmd.run = [B, f, g] {
        CoveringCertificate c = covering_check(B, f, g);
        Outcome o;
        const char* status = c.status == CoveringStatus::Covering      ? "covering"
                             : c.status == CoveringStatus::NotCovering ? "not-covering"
                                                                       : "inconclusive";
        o.result["status"] = status;
        if (c.status == CoveringStatus::Covering) {
          auto names = B.all_vars();
          o.result["certificate"] = {{"a", c.a.to_string(names)}, {"b", c.b.to_string(names)}, {"i", c.i.to_string(names)}};
        }
        o.result["note"] = c.note;
        o.inconclusive = c.status == CoveringStatus::Inconclusive;
        o.summary = status;
        return o;
      };
    } else if (n == "glue-check" || n == "joint-lift") {
      Presentation B = presentation_arg(args[0], a, false);
      Poly f = poly_arg(args[1], B.all_vars(), B.field(), a.texts);
      Poly g = poly_arg(args[2], B.all_vars(), B.field(), a.texts);
      Json base = params_for(B);
      long D = integer_option(inv, a, "D", base["D"].get<long>(), 1, 64);
      long N = integer_option(inv, a, "N", base["N"].is_null() ? defaults_.precision : base["N"].get<long>(), 1, 4096);
      cmd.parameters = params(static_cast<unsigned>(D), static_cast<int>(N), base["p"].get<unsigned>());
      BinaryCovering cov = binary_covering(B, f, g);
      if (n == "glue-check") {
        std::string m = word_option(inv, a, "mutate", "", {"drop-first", "shift-first", "drop-second"});
        if (m == "drop-first") cov = mutate(cov, Mutation::DropFirstRelation);
        if (m == "shift-first") cov = mutate(cov, Mutation::ShiftFirstRelation);
        if (m == "drop-second") cov = mutate(cov, Mutation::DropSecondInJoint);
        cmd.run = [cov, D, N] {
          ExactnessReport r = gluing_sequence_check(cov, static_cast<unsigned>(D), static_cast<int>(N));
          Outcome o;
          o.result["left"] = to_string(r.left);
          o.result["middle"] = to_string(r.middle);
          o.result["right"] = to_string(r.right);
          o.result["degree_cap"] = r.degree_cap;
          o.result["precision"] = r.precision;
          o.result["notes"] = r.notes;
          o.inconclusive = r.left == Exactness::Inconclusive || r.middle == Exactness::Inconclusive ||
                           r.right == Exactness::Inconclusive;
          o.summary = "left=" + to_string(r.left) + " middle=" + to_string(r.middle) + " right=" + to_string(r.right) +
                      " (" + scope_text(r.degree_cap, r.precision) + ")";
          return o;
        };
      } else {
        auto g1 = poly_list_arg(args[3], cov.first.all_vars(), cov.first.field(), a.texts);
        auto g2 = poly_list_arg(args[4], cov.second.all_vars(), cov.second.field(), a.texts);
        cmd.run = [cov, g1, g2, D, N] {
          JointLift l = joint_surjection_lift(cov, {cov.first, g1}, {cov.second, g2}, static_cast<unsigned>(D),
                                              static_cast<int>(N));
          Outcome o;
          o.result["generators"] = poly_texts(l.generators, cov.ring.all_vars());
          o.result["certified"] = l.certified;
          o.result["candidates"] = l.candidates;
          o.result["perturbed"] = l.perturbed;
          o.result["note"] = l.note;
          o.result["first"] = cov.first.to_string();
          o.result["second"] = cov.second.to_string();
          o.inconclusive = !l.certified;
          o.summary = l.certified ? std::to_string(l.generators.size()) + " generator(s) certified (" +
                                        scope_text(static_cast<unsigned>(D), static_cast<int>(N)) + ")"
                                  : "not certified: " + l.note;
          return o;
        };
      }
    } else if (n == "kahler" || n == "cotangent-complex") {
      Presentation B = presentation_arg(args[0], a);
      cmd.parameters = params_for(B);
      bool kahler = n == "kahler";
      cmd.run = [B, kahler] {
        auto names = B.all_vars();
        auto rows = [&](const std::vector<ModVec>& m) {
          Json out = Json::array();
          for (const ModVec& v : m) out.push_back(poly_texts(v, names));
          return out;
        };
        Outcome o;
        if (kahler) {
          KahlerModule k = kahler_differentials(B);
          o.result["generators"] = k.generators;
          o.result["jacobian"] = rows(k.jacobian);
          o.result["zero"] = k.zero;
          o.result["fitting_rank"] = k.fitting_rank;
          o.result["locally_free"] = k.locally_free;
          o.summary = k.zero ? "Omega^1 = 0" : "Omega^1 needs " + std::to_string(k.fitting_rank) + " generators locally";
        } else {
          CotangentComplexData c = naive_cotangent_complex(B);
          o.result["jacobian"] = rows(c.jacobian);
          o.result["kernel_generators"] = c.kernel_generators.size();
          o.result["kernel_witnesses"] = rows(c.kernel_witnesses);
          o.result["h_minus1_zero"] = c.h_minus1_zero;
          o.result["h0_zero"] = c.h0_zero;
          o.summary = std::string("H^-1 ") + (c.h_minus1_zero ? "= 0" : "!= 0") + ", H^0 " + (c.h0_zero ? "= 0" : "!= 0");
        }
        return o;
      };
    } else if (n == "classify") {
      Presentation B = presentation_arg(args[0], a);
      ClassifyOptions opts;
      if (const Slice* s = inv.option("pieces")) {
        TokenStream ts = s->stream();
        ts.expect_symbol("[");
        std::vector<std::string> names;
        do {
          SourcePos at = ts.peek().pos;
          std::size_t start = ts.position();
          Value v = expression(ts);
          auto* p = std::get_if<Presentation>(&v);
          if (!p) throw ParseError("expected a presentation, got a " + kind_name(v), at);
          opts.pieces.push_back(*p);
          bool single = ts.position() == start + 1;
          names.push_back(single ? s->tokens[start].text : p->to_string());
        } while (ts.accept_symbol(","));
        ts.expect_symbol("]");
        finish(ts);
        a.options.emplace_back("pieces", "[" + join_parts(names) + "]");
      }
      cmd.parameters = params_for(B);
      cmd.run = [B, opts] {
        Classification c = classify_morphism(B, opts);
        Outcome o;
        o.result = verdict_json(c);
        o.inconclusive = c.verdict == Verdict::Inconclusive;
        o.summary = to_string(c.verdict) + " (" + scope_text(c.degree_cap, c.precision) + ")";
        return o;
      };
    } else if (n == "drham") {
      Presentation B = presentation_arg(args[0], a);
      long top = integer_option(inv, a, "top", 3, 0, 8);
      cmd.parameters = params_for(B);
      cmd.run = [B, top] {
        DeRhamComplexData d = de_rham_complex(B, static_cast<unsigned>(top));
        Outcome o;
        o.result["top_degree"] = d.top_degree;
        Json pieces = Json::array();
        for (const auto& piece : d.pieces) {
          Json pj;
          pj["degree"] = piece.degree;
          std::vector<std::string> basis;
          for (std::size_t i = 0; i < piece.basis.size(); ++i) basis.push_back(d.basis_name(piece.degree, i));
          pj["basis"] = basis;
          pj["zero"] = piece.zero;
          pieces.push_back(pj);
        }
        o.result["pieces"] = pieces;
        o.result["checked_generators"] = d.checked_generators;
        o.result["violations"] = d.violations;
        o.summary = "d o d = 0 checked on " + std::to_string(d.checked_generators) + " generators, " +
                    std::to_string(d.violations) + " violations";
        return o;
      };
    } else if (n == "integrate") {
      Presentation A = presentation_arg(args[0], a, false);
      std::string T = word_arg(args[1]);
      auto base = A.all_vars();
      if (std::count(base.begin(), base.end(), T)) throw ParseError("variable " + T + " is already used", args[1].pos());
      a.texts.push_back(T);
      auto names = base;
      names.push_back(T);
      Field q = Field::rationals();
      Poly omega = poly_arg(args[2], names, q, a.texts);
      Poly f = poly_arg(args[3], base, q, a.texts);
      cmd.parameters = params_for(A);
      Coefficients coeffs = A.coefficients();
      cmd.run = [omega, f, coeffs, names] {
        EtaleIntegral r = etale_integration(omega, f, coeffs);
        Outcome o;
        o.result["h"] = r.h.to_string(names);
        o.result["quotient"] = r.quotient.to_string(names);
        o.result["precision_loss"] = r.precision_loss;
        o.result["lossy_degrees"] = r.lossy_degrees;
        o.result["precision"] = r.precision;
        o.summary = "h = " + r.h.to_string(names);
        return o;
      };
    } else if (n == "points" || n == "dr-points" || n == "crys-points") {
      Presentation B = presentation_arg(args[0], a);
      FiniteRing R = ring_arg(args[1], a.texts);
      cmd.parameters = params_for(B);
      std::string which = n;
      cmd.run = [B, R, which] {
        Outcome o;
        o.result["ring"] = R.spec();
        if (which == "crys-points") {
          CrystallinePoints c = crystalline_point_set(B, R);
          o.result["classes"] = c.classes;
          o.result["index_pairs"] = c.index_pairs;
          o.result["class_of"] = c.class_of;
          o.summary = std::to_string(c.classes) + " classes over " + std::to_string(c.index_pairs) + " PD pairs";
        } else {
          PointSet s = which == "points" ? point_set(B, R) : de_rham_point_set(B, R);
          o.result["count"] = s.size();
          Json pts = Json::array();
          for (std::size_t i = 0; i < s.size(); ++i) pts.push_back(s.format(i));
          o.result["points"] = pts;
          o.summary = std::to_string(s.size()) + " points over " + s.ring.spec();
        }
        return o;
      };
    } else if (n == "nil-ideals") {
      FiniteRing R = ring_arg(args[0], a.texts);
      cmd.parameters = params_for(R);
      cmd.run = [R] {
        auto ideals = enumerate_nilpotent_ideals(R);
        Outcome o;
        o.result["ring"] = R.spec();
        o.result["count"] = ideals.size();
        Json list = Json::array();
        for (const auto& I : ideals)
          list.push_back({{"elements", elems_json(R, I.elements)}, {"generators", elems_json(R, I.generators)},
                          {"exponent", I.exponent}});
        o.result["ideals"] = list;
        o.summary = std::to_string(ideals.size()) + " nilpotent ideals";
        return o;
      };
    } else if (n == "pd-structures") {
      FiniteRing R = ring_arg(args[0], a.texts);
      TokenStream ts = args[1].stream();
      ts.expect_symbol("[");
      std::vector<FiniteRing::Elem> gens;
      if (!ts.accept_symbol("]")) {
        do gens.push_back(R.parse_element(ts));
        while (ts.accept_symbol(","));
        ts.expect_symbol("]");
      }
      finish(ts);
      std::vector<std::string> gt;
      for (auto e : gens) gt.push_back(R.format(e));
      a.texts.push_back("[" + join_parts(gt) + "]");
      cmd.parameters = params_for(R);
      cmd.run = [R, gens] {
        auto ideal = R.ideal_generated(gens);
        auto all = enumerate_pd_structures(R, ideal);
        Outcome o;
        o.result["ring"] = R.spec();
        o.result["ideal"] = elems_json(R, ideal);
        o.result["count"] = all.size();
        std::size_t bad = 0;
        Json list = Json::array();
        for (const PDStructure& s : all) {
          bad += pd_axiom_violations(s);
          Json gamma = Json::array();
          for (const auto& row : s.gamma) gamma.push_back(elems_json(R, row));
          list.push_back({{"exponent", s.exponent}, {"gamma", gamma}});
        }
        o.result["structures"] = list;
        o.result["violations"] = bad;
        o.summary = std::to_string(all.size()) + " PD structures on " + format_elems(R, ideal);
        return o;
      };
    } else if (n == "classify-lifting") {
      Presentation B = presentation_arg(args[0], a);
      std::string mode = word_option(inv, a, "mode", "dR", {"dR", "crys"});
      std::vector<FiniteRing> rings = defaults_.corpus;
      if (const Slice* s = inv.option("corpus")) {
        std::string text;
        Value v = value_arg(*s, text);
        auto* c = std::get_if<Corpus>(&v);
        if (!c) throw ParseError("expected a corpus, got a " + kind_name(v), s->pos());
        rings = c->rings;
        a.options.emplace_back("corpus", text);
      }
      const Coefficients& c = B.coefficients();
      if (rings.empty()) {
        unsigned p = (c.kind == Coefficients::Kind::Padic || c.kind == Coefficients::Kind::FiniteField) ? c.p : defaults_.prime;
        rings = default_test_rings(p, c.kind == Coefficients::Kind::FiniteField);
      }
      cmd.parameters = params_for(B);
      cmd.parameters["corpus"] = corpus_json(rings);
      LiftingMode lm = mode == "dR" ? LiftingMode::DeRham : LiftingMode::Crystalline;
      cmd.run = [B, rings, lm] {
        LiftingClassification r = classify_lifting(B, rings, lm);
        Outcome o;
        o.result["verdict"] = to_string(r.verdict);
        o.result["etale"] = r.etale;
        o.result["lisse"] = r.lisse;
        o.result["non_ramifie"] = r.non_ramifie;
        o.result["mode"] = to_string(r.mode);
        o.result["scope"] = r.scope;
        Json ev = Json::array();
        for (const RingEvidence& e : r.evidence) {
          Json ej;
          ej["ring"] = e.ring;
          ej["points"] = e.points;
          ej[lm == LiftingMode::DeRham ? "reduced_points" : "crys_classes"] = e.reduced;
          ej["map"] = e.map;
          ej["ideals_checked"] = e.ideals_checked;
          ej["note"] = e.note;
          ev.push_back(ej);
        }
        o.result["evidence"] = ev;
        o.inconclusive = r.verdict == Verdict::Inconclusive;
        o.summary = to_string(r.verdict) + " (" + to_string(r.mode) + ", " + std::to_string(r.evidence.size()) + " rings)";
        return o;
      };
    } else if (n == "witt") {
      FiniteRing R = ring_arg(args[0], a.texts);
      bool binary = inv.op == "add" || inv.op == "mul";
      if (args.size() != (binary ? 3u : 2u))
        throw ParseError("witt " + inv.op + " expects " + (binary ? "3" : "2") + " arguments, got " +
                             std::to_string(args.size()),
                         inv.pos);
      std::vector<WittVector> vs;
      for (std::size_t i = 1; i < args.size(); ++i) {
        TokenStream ts = args[i].stream();
        ts.expect_symbol("(");
        std::vector<FiniteRing::Elem> coords;
        do coords.push_back(R.parse_element(ts));
        while (ts.accept_symbol(","));
        ts.expect_symbol(")");
        finish(ts);
        vs.push_back(witt_vector(R, coords));
        a.texts.push_back(vs.back().to_string());
      }
      long seed = integer_option(inv, a, "lift", 0, 0, 1L << 31);
      cmd.parameters = params_for(R);
      std::string op = inv.op;
      cmd.run = [vs, op, seed] {
        Outcome o;
        const WittVector& x = vs[0];
        WittVector r = x;
        if (op == "add" || op == "mul") {
          WittOp wop = op == "add" ? WittOp::Add : WittOp::Mul;
          r = witt_arith(wop, x, vs[1], static_cast<std::uint32_t>(seed));
          o.result["ghost_consistent"] = ghost_consistent(wop, x, vs[1], r);
          o.summary = x.to_string() + (op == "add" ? " + " : " * ") + vs[1].to_string() + " = " + r.to_string();
        } else {
          r = op == "frob" ? frobenius_witt(x) : verschiebung(x);
          o.summary = (op == "frob" ? "F" : "V") + x.to_string() + " = " + r.to_string();
        }
        o.result["ring"] = x.ring.spec();
        o.result["p"] = x.p;
        o.result["result"] = r.to_string();
        o.result["length"] = r.length();
        return o;
      };
    } else if (n == "tilt") {
      FiniteRing R = ring_arg(args[0], a.texts);
      long depth = integer_option(inv, a, "depth", 4, 0, 16);
      cmd.parameters = params_for(R);
      cmd.run = [R, depth] {
        Tilt t = tilt(R, static_cast<unsigned>(depth));
        Outcome o;
        o.result["source"] = R.spec();
        o.result["ring"] = t.ring.spec();
        o.result["size"] = t.ring.size();
        o.result["stabilization_depth"] = t.stabilization_depth;
        o.result["depth"] = t.depth;
        Json emb = Json::array();
        for (std::size_t x = 0; x < t.ring.size(); ++x)
          emb.push_back({{"element", t.ring.format(static_cast<FiniteRing::Elem>(x))},
                         {"image", R.format(t.embedding[x])}});
        o.result["embedding"] = emb;
        o.summary = "tilt of " + R.spec() + " is " + t.ring.spec();
        return o;
      };
    } else if (n == "robba" || n == "robba-norm" || n == "interval-norm") {
      long p = integer_option(inv, a, "p", defaults_.prime, 2, 97);
      if (!is_prime(static_cast<unsigned long>(p))) throw ParseError(std::to_string(p) + " is not prime", inv.option("p")->pos());
      long len = integer_option(inv, a, "length", kDefaultRobbaLength, 1, 8);
      long cap = integer_option(inv, a, "cap", static_cast<long>(kDefaultSupportCap), 1, 256);
      auto up = static_cast<unsigned>(p);
      auto literal = [&](const Slice& s) {
        TokenStream ts = s.stream();
        RobbaElement f = RobbaElement::parse(ts, up, static_cast<unsigned>(len), static_cast<std::size_t>(cap));
        finish(ts);
        a.texts.push_back(f.to_string());
        return f;
      };
      cmd.parameters = params(defaults_.degree, static_cast<int>(len), up);
      if (n == "robba") {
        bool binary = inv.op != "phi";
        if (args.size() != (binary ? 2u : 1u))
          throw ParseError("robba " + inv.op + " expects " + (binary ? "2" : "1") + " argument" + (binary ? "s" : "") +
                               ", got " + std::to_string(args.size()),
                           inv.pos);
        RobbaElement f = literal(args[0]);
        std::optional<RobbaElement> g;
        if (binary) g = literal(args[1]);
        std::string op = inv.op;
        cmd.run = [f, g, op] {
          RobbaElement r = op == "phi" ? f.phi() : op == "add" ? f + *g : f * *g;
          Outcome o;
          o.result["value"] = r.to_string();
          o.result["flagged"] = r.flagged();
          o.inconclusive = r.flagged();
          o.summary = r.to_string() + (r.flagged() ? " (truncated)" : "");
          return o;
        };
      } else {
        RobbaElement f = literal(args[0]);
        std::vector<mpq_class> radii;
        for (std::size_t i = 1; i < args.size(); ++i) radii.push_back(rational_arg(args[i], a.texts));
        cmd.run = [f, radii] {
          NormValue v = radii.size() == 1 ? robba_norm(f, radii[0]) : interval_norm(f, radii[0], radii[1]);
          Outcome o;
          o.result["value"] = f.to_string();
          if (radii.size() == 1) {
            o.result["r"] = radii[0].get_str();
          } else {
            o.result["s"] = radii[0].get_str();
            o.result["r"] = radii[1].get_str();
          }
          o.result["norm"] = v.to_string();
          o.result["flagged"] = f.flagged();
          o.inconclusive = f.flagged();
          o.summary = "norm " + v.to_string();
          return o;
        };
      }
    }
    cmd.args = std::move(a.texts);
    cmd.options = std::move(a.options);
    return cmd;
  }

  TokenStream ts_;
  ScriptDefaults defaults_;
  std::map<std::string, Value> env_;
};

Report execute(const Command& c, std::size_t index) {
  Report r;
  Json& body = r.body;
  body["index"] = index;
  body["command"] = c.echo();
  body["position"] = c.pos.to_string();
  body["parameters"] = c.parameters;
  try {
    Outcome o = c.run();
    r.inconclusive = o.inconclusive;
    r.summary = o.summary;
    body["status"] = o.inconclusive ? "inconclusive" : "ok";
    body["result"] = std::move(o.result);
  } catch (const std::exception& e) {
    r.failed = true;
    r.summary = "error: " + std::string(e.what());
    body["status"] = "error";
    body["error"] = {{"type", error_type(e)}, {"message", e.what()}};
  }
  body["summary"] = r.summary;
  return r;
}

}  // namespace

Json ScriptDefaults::to_json() const {
  Json j;
  j["D"] = degree;
  j["N"] = precision;
  j["p"] = prime;
  j["corpus"] = corpus_json(corpus);
  return j;
}

std::vector<FiniteRing> parse_corpus(std::string_view text) {
  std::vector<FiniteRing> out;
  if (text == "default") return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t stop = text.find(';', start);
    if (stop == std::string_view::npos) stop = text.size();
    std::string_view part = text.substr(start, stop - start);
    if (part.find_first_not_of(" \t") != std::string_view::npos) out.push_back(FiniteRing::parse(part));
    start = stop + 1;
  }
  if (out.empty()) throw InvalidArgument("empty corpus");
  return out;
}

std::string kind_name(const Value& v) {
  switch (v.index()) {
    case 0:
      return "presentation";
    case 1:
      return "morphism";
    case 2:
      return "ring";
    default:
      return "corpus";
  }
}

std::string canonical_text(const Value& v) {
  if (auto* p = std::get_if<Presentation>(&v)) return p->to_string();
  if (auto* m = std::get_if<Morphism>(&v))
    return "Hom(" + m->source().to_string() + ", " + m->target().to_string() + ", [" +
           join_parts(poly_texts(m->images(), m->target().all_vars())) + "])";
  if (auto* r = std::get_if<FiniteRing>(&v)) return "Ring(" + r->spec() + ")";
  std::vector<std::string> specs;
  for (const FiniteRing& r : std::get<Corpus>(v).rings) specs.push_back(r.spec());
  return "Corpus(" + join_parts(specs) + ")";
}

std::string Command::echo() const {
  std::string out = name;
  if (!op.empty()) out += " " + op;
  std::vector<std::string> parts = args;
  for (const auto& [k, v] : options) parts.push_back(k + "=" + v);
  if (!parts.empty()) out += " " + join_parts(parts);
  return out;
}

std::string ScriptItem::to_string() const {
  if (auto* d = std::get_if<Declaration>(&node)) return d->name + " = " + canonical_text(d->value) + ";";
  return std::get<Command>(node).echo() + ";";
}

std::size_t Script::command_count() const {
  return static_cast<std::size_t>(
      std::count_if(items.begin(), items.end(), [](const ScriptItem& i) { return std::holds_alternative<Command>(i.node); }));
}

bool operator==(const Script& a, const Script& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (a.items[i].node.index() != b.items[i].node.index()) return false;
    if (a.items[i].to_string() != b.items[i].to_string()) return false;
  }
  return true;
}

Script parse_script(std::string_view text, const ScriptDefaults& defaults) {
  return Parser(text, defaults).run();
}

std::string print_script(const Script& script) {
  std::string out;
  for (const ScriptItem& item : script.items) out += item.to_string() + "\n";
  return out;
}

std::vector<Report> run_script(const Script& script, unsigned jobs) {
  std::vector<const Command*> commands;
  for (const ScriptItem& item : script.items)
    if (auto* c = std::get_if<Command>(&item.node)) commands.push_back(c);
  std::vector<Report> reports(commands.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < commands.size(); i = next++) reports[i] = execute(*commands[i], i);
  };
  unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(commands.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return reports;
}

Json report_document(const Script& script, const std::vector<Report>& reports) {
  Json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["defaults"] = script.defaults.to_json();
  Json list = Json::array();
  std::size_t failed = 0, inconclusive = 0;
  for (const Report& r : reports) {
    list.push_back(r.body);
    failed += r.failed;
    inconclusive += r.inconclusive;
  }
  doc["reports"] = list;
  doc["totals"] = {{"commands", reports.size()}, {"errors", failed}, {"inconclusive", inconclusive}};
  return doc;
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& command_coverage() {
  static const auto table = [] {
    std::vector<std::pair<std::string, std::vector<std::string>>> out;
    for (const CommandSpec& s : command_specs()) out.emplace_back(s.name, s.coverage);
    return out;
  }();
  return table;
}

}  // namespace adic
