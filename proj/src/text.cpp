#include "adic/text.hpp"

#include <algorithm>
#include <cctype>

namespace adic {

namespace {

// command words of the script language that contain a hyphen
constexpr std::string_view kHyphenatedWords[] = {
    "classify-lifting", "glue-check", "robba-norm", "interval-norm", "normal-form", "gauss-norm",
    "base-change", "joint-lift", "nil-ideals", "pd-structures", "dr-points", "crys-points", "cotangent-complex",
    "covering-check", "drop-first", "shift-first", "drop-second"};

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.pos = pos;
    std::size_t start = i;
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = TokenKind::Number;
      t.text = std::string(text.substr(start, j - start));
      advance(j - i);
    } else if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < text.size()) {
        unsigned char d = static_cast<unsigned char>(text[j]);
        // a '-' joins words only between letters ("glue-check", "classify-lifting")
        if (std::isalnum(d) || d == '_' || d == '\'') {
          ++j;
        } else if (d == '-' && j + 1 < text.size() && std::isalpha(static_cast<unsigned char>(text[j + 1]))) {
          std::size_t k = j + 1;
          while (k < text.size() && std::isalpha(static_cast<unsigned char>(text[k]))) ++k;
          std::string_view word = text.substr(start, k - start);
          bool known = std::any_of(std::begin(kHyphenatedWords), std::end(kHyphenatedWords),
                                   [&](std::string_view h) { return h == word; });
          if (!known) break;
          j = k;
        } else {
          break;
        }
      }
      t.kind = TokenKind::Identifier;
      t.text = std::string(text.substr(start, j - start));
      advance(j - i);
    } else {
      t.kind = TokenKind::Symbol;
      t.text = std::string(1, static_cast<char>(c));
      advance(1);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = TokenKind::End;
  end.pos = pos;
  out.push_back(end);
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t k = std::min(index_ + ahead, tokens_.size() - 1);
  return tokens_[k];
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (index_ < tokens_.size() - 1) ++index_;
  return t;
}

bool TokenStream::is_symbol(std::string_view s, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::Symbol && t.text == s;
}

bool TokenStream::is_identifier(std::string_view s, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::Identifier && t.text == s;
}

bool TokenStream::accept_symbol(std::string_view s) {
  if (!is_symbol(s)) return false;
  next();
  return true;
}

const Token& TokenStream::expect_symbol(std::string_view s) {
  if (!is_symbol(s)) {
    const Token& t = peek();
    fail("expected '" + std::string(s) + "' but found " + (t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'"));
  }
  return next();
}

const Token& TokenStream::expect_identifier() {
  if (peek().kind != TokenKind::Identifier) {
    const Token& t = peek();
    fail("expected a name but found " + (t.kind == TokenKind::End ? std::string("end of input") : "'" + t.text + "'"));
  }
  return next();
}

long TokenStream::expect_integer() {
  bool negative = accept_symbol("-");
  if (peek().kind != TokenKind::Number) fail("expected an integer");
  const Token& t = next();
  if (t.text.size() > 17) fail("integer literal too large");
  long v = std::stol(t.text);
  return negative ? -v : v;
}

void TokenStream::fail(const std::string& message) const { throw ParseError(message, peek().pos); }

mpq_class parse_rational(TokenStream& ts) {
  bool negative = ts.accept_symbol("-");
  if (ts.peek().kind != TokenKind::Number) ts.fail("expected a number");
  mpq_class v(mpz_class(ts.next().text));
  if (ts.is_symbol("/") && ts.peek(1).kind == TokenKind::Number) {
    ts.next();
    mpz_class d(ts.next().text);
    if (d == 0) ts.fail("zero denominator");
    v /= mpq_class(d);
  }
  v.canonicalize();
  return negative ? mpq_class(-v) : v;
}

namespace {

struct PolyReader {
  TokenStream& ts;
  const std::vector<std::string>& names;
  Field field;

  std::size_t n() const { return names.size(); }

  Poly expr() {
    Poly acc = term();
    while (ts.is_symbol("+") || ts.is_symbol("-")) {
      bool minus = ts.next().text == "-";
      Poly t = term();
      acc = minus ? acc - t : acc + t;
    }
    return acc;
  }

  Poly term() {
    Poly acc = unary();
    while (ts.is_symbol("*") || ts.is_symbol("/")) {
      bool divide = ts.next().text == "/";
      SourcePos at = ts.peek().pos;
      Poly rhs = unary();
      if (divide) {
        if (!rhs.is_constant() || rhs.is_zero()) throw ParseError("division only by a nonzero constant", at);
        try {
          acc = acc.scaled(field.inv(rhs.leading().coeff));
        } catch (const DivisionByZero&) {
          throw ParseError("constant not invertible in characteristic " + std::to_string(field.characteristic), at);
        }
      } else {
        acc = acc * rhs;
      }
    }
    return acc;
  }

  Poly unary() {
    if (ts.accept_symbol("-")) return -unary();
    if (ts.accept_symbol("+")) return unary();
    return power();
  }

  Poly power() {
    Poly base = atom();
    if (ts.accept_symbol("^")) {
      if (ts.peek().kind != TokenKind::Number) ts.fail("expected a non-negative integer exponent");
      long e = std::stol(ts.next().text);
      if (e > 4096) ts.fail("exponent too large");
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Poly atom() {
    const Token& t = ts.peek();
    if (t.kind == TokenKind::Number) {
      ts.next();
      try {
        return Poly::constant(field, n(), mpq_class(mpz_class(t.text)));
      } catch (const DivisionByZero&) {
        throw ParseError("bad constant", t.pos);
      }
    }
    if (t.kind == TokenKind::Identifier) {
      auto it = std::find(names.begin(), names.end(), t.text);
      if (it == names.end()) throw ParseError("undefined name " + t.text, t.pos);
      ts.next();
      return Poly::variable(field, n(), static_cast<std::size_t>(it - names.begin()));
    }
    if (ts.accept_symbol("(")) {
      Poly e = expr();
      ts.expect_symbol(")");
      return e;
    }
    ts.fail(t.kind == TokenKind::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }
};

}  // namespace

Poly parse_poly(TokenStream& ts, const std::vector<std::string>& names, Field field) {
  PolyReader r{ts, names, field};
  return r.expr();
}

Poly parse_poly(std::string_view text, const std::vector<std::string>& names, Field field) {
  TokenStream ts(tokenize(text));
  Poly p = parse_poly(ts, names, field);
  if (!ts.at_end()) ts.fail("trailing input '" + ts.peek().text + "'");
  return p;
}

}  // namespace adic
