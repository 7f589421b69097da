#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mad::detail {

enum class TokenKind
{
  Identifier,
  Keyword,
  Integer,
  Real,
  String,
  Param,  // :name
  Symbol,
  End,
};

struct Token
{
  TokenKind kind;
  /// Keywords are upper-cased; identifiers keep their case.
  std::string text;
  std::size_t line;
  std::size_t column;
};

/// Splits SQL-subset text into tokens. `--` comments run to end of line.
/// Throws InputError on characters outside the subset.
std::vector<Token> tokenize(std::string_view text);

const char* describe(TokenKind kind);

class TokenStream
{
 public:
  explicit TokenStream(std::vector<Token> tokens) : d_tokens(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::End; }

  bool accept_keyword(const char* kw);
  bool accept_symbol(const char* sym);
  bool is_keyword(const char* kw, std::size_t ahead = 0) const;
  bool is_symbol(const char* sym, std::size_t ahead = 0) const;

  void expect_keyword(const char* kw);
  void expect_symbol(const char* sym);
  std::string expect_identifier(const char* what);

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_expected(const std::string& expected) const;

 private:
  std::vector<Token> d_tokens;
  std::size_t d_pos = 0;
};

}  // namespace mad::detail
