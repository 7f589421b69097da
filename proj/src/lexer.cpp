#include "lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "mad/ar.hpp"

namespace mad::detail {

namespace {

constexpr std::array kKeywords = {
    "AND",     "AS",     "BY",       "CHECK",   "CONSTRAINT", "CREATE", "DEFAULT",
    "DELETE",  "DISTINCT", "FALSE",  "FOREIGN", "FROM",       "GROUP",  "HAVING",
    "INNER",   "INSERT", "INTO",     "JOIN",    "KEY",        "LEFT",   "LIMIT",
    "NOT",     "NULL",   "ON",       "OR",      "ORDER",      "OUTER",  "PRIMARY",
    "REFERENCES", "RIGHT", "SELECT", "SET",     "TABLE",      "TRUE",   "UNION",
    "UNIQUE",  "UPDATE", "VALUES",   "WHERE",
};

bool
is_keyword(const std::string& upper)
{
  return std::find(kKeywords.begin(), kKeywords.end(), upper) != kKeywords.end();
}

std::string
to_upper(std::string s)
{
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

bool
ident_start(char c)
{
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool
ident_char(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

const char*
describe(TokenKind kind)
{
  switch (kind)
  {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Integer: return "integer";
    case TokenKind::Real: return "real";
    case TokenKind::String: return "string";
    case TokenKind::Param: return "parameter";
    case TokenKind::Symbol: return "symbol";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

std::vector<Token>
tokenize(std::string_view text)
{
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i)
    {
      if (text[i] == '\n')
      {
        ++line;
        col = 1;
      }
      else
      {
        ++col;
      }
    }
  };

  while (i < text.size())
  {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)))
    {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-')
    {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }

    std::size_t tl = line, tc = col;
    if (ident_start(c))
    {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      std::string upper = to_upper(word);
      if (is_keyword(upper))
      {
        out.push_back({TokenKind::Keyword, upper, tl, tc});
      }
      else
      {
        out.push_back({TokenKind::Identifier, word, tl, tc});
      }
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)))
    {
      std::size_t j = i;
      bool real = false;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.')
      {
        real = true;
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E'))
      {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k])))
        {
          real = true;
          j = k;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      out.push_back({real ? TokenKind::Real : TokenKind::Integer,
                     std::string(text.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '\'')
    {
      std::string value;
      std::size_t j = i + 1;
      for (;;)
      {
        if (j >= text.size()) throw InputError("unterminated string literal", tl, tc);
        if (text[j] == '\'')
        {
          if (j + 1 < text.size() && text[j + 1] == '\'')
          {
            value += '\'';
            j += 2;
            continue;
          }
          break;
        }
        value += text[j++];
      }
      out.push_back({TokenKind::String, value, tl, tc});
      advance(j + 1 - i);
      continue;
    }
    if (c == ':' && i + 1 < text.size() && ident_start(text[i + 1]))
    {
      std::size_t j = i + 1;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({TokenKind::Param, std::string(text.substr(i + 1, j - i - 1)), tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '?')
    {
      throw InputError("positional '?' placeholders are unsupported; use :name", tl, tc);
    }

    static constexpr std::array kTwoChar = {"<=", ">=", "<>", "!="};
    std::string sym;
    if (i + 1 < text.size())
    {
      std::string two(text.substr(i, 2));
      if (std::find(kTwoChar.begin(), kTwoChar.end(), two) != kTwoChar.end()) sym = two;
    }
    if (sym.empty())
    {
      if (std::string_view("(),;=<>+-*/.").find(c) == std::string_view::npos)
      {
        throw InputError(std::string("unexpected character '") + c + "'", tl, tc);
      }
      sym = std::string(1, c);
    }
    std::size_t width = sym.size();
    if (sym == "!=") sym = "<>";
    out.push_back({TokenKind::Symbol, sym, tl, tc});
    advance(width);
  }
  out.push_back({TokenKind::End, "", line, col});
  return out;
}

/* -------------------------------------------------------------------------- */

const Token&
TokenStream::peek(std::size_t ahead) const
{
  std::size_t idx = std::min(d_pos + ahead, d_tokens.size() - 1);
  return d_tokens[idx];
}

const Token&
TokenStream::next()
{
  const Token& t = d_tokens[d_pos];
  if (d_pos + 1 < d_tokens.size()) ++d_pos;
  return t;
}

bool
TokenStream::is_keyword(const char* kw, std::size_t ahead) const
{
  const Token& t = peek(ahead);
  return t.kind == TokenKind::Keyword && t.text == kw;
}

bool
TokenStream::is_symbol(const char* sym, std::size_t ahead) const
{
  const Token& t = peek(ahead);
  return t.kind == TokenKind::Symbol && t.text == sym;
}

bool
TokenStream::accept_keyword(const char* kw)
{
  if (!is_keyword(kw)) return false;
  next();
  return true;
}

bool
TokenStream::accept_symbol(const char* sym)
{
  if (!is_symbol(sym)) return false;
  next();
  return true;
}

void
TokenStream::expect_keyword(const char* kw)
{
  if (!accept_keyword(kw)) fail_expected(kw);
}

void
TokenStream::expect_symbol(const char* sym)
{
  if (!accept_symbol(sym)) fail_expected(std::string("'") + sym + "'");
}

std::string
TokenStream::expect_identifier(const char* what)
{
  if (peek().kind != TokenKind::Identifier) fail_expected(what);
  return next().text;
}

void
TokenStream::fail(const std::string& message) const
{
  throw InputError(message, peek().line, peek().column);
}

void
TokenStream::fail_expected(const std::string& expected) const
{
  const Token& t = peek();
  std::string found = t.kind == TokenKind::End ? "end of input"
                                                : describe(t.kind) + std::string(" '") + t.text + "'";
  fail("syntax error: expected " + expected + ", found " + found);
}

}  // namespace mad::detail
