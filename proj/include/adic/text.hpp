#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "adic/error.hpp"
#include "adic/poly.hpp"

namespace adic {

struct SourcePos {
  int line = 1;
  int column = 1;
  std::string to_string() const { return std::to_string(line) + ":" + std::to_string(column); }
};

/// Positioned diagnostic raised while reading text input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, SourcePos pos)
      : Error(message + " at " + pos.to_string()), pos_(pos), bare_(message) {}
  SourcePos pos() const { return pos_; }
  const std::string& bare_message() const { return bare_; }

 private:
  SourcePos pos_;
  std::string bare_;
};

enum class TokenKind { Identifier, Number, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourcePos pos;
};

/// Splits text into identifiers (letters, digits, '_', '-' inside words, '.'),
/// integers and single-character symbols. '#' starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view text);

/// Cursor over a token vector with the small helpers recursive-descent parsers need.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::End; }
  bool is_symbol(std::string_view s, std::size_t ahead = 0) const;
  bool is_identifier(std::string_view s, std::size_t ahead = 0) const;
  bool accept_symbol(std::string_view s);
  const Token& expect_symbol(std::string_view s);
  const Token& expect_identifier();
  long expect_integer();
  [[noreturn]] void fail(const std::string& message) const;
  std::size_t position() const { return index_; }
  void rewind(std::size_t index) { index_ = index; }

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

/// Reads a polynomial expression (+ - * ^, division by constants, parentheses,
/// integer literals) in the named variables.
Poly parse_poly(TokenStream& ts, const std::vector<std::string>& names, Field field);
Poly parse_poly(std::string_view text, const std::vector<std::string>& names, Field field);

/// Reads an optionally signed rational literal "a" or "a/b".
mpq_class parse_rational(TokenStream& ts);

}  // namespace adic
