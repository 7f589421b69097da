#pragma once

// Minimal S-expression values for reading SMT-LIB2 solver responses.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mad {

struct Sexpr
{
  /// Atom text, with |quotes| removed from quoted symbols and string literals
  /// unescaped. Empty for lists.
  std::string atom;
  std::vector<Sexpr> list;
  bool is_list = false;

  static Sexpr make_atom(std::string s);
  static Sexpr make_list(std::vector<Sexpr> items);

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  std::string to_string() const;

  /// Integer value of `5` or `(- 5)`.
  std::optional<long long> as_int() const;
  /// `true` / `false`.
  std::optional<bool> as_bool() const;
};

/// Incremental reader: feed text, pop complete top-level expressions.
class SexprReader
{
 public:
  void feed(std::string_view text) { d_buffer.append(text); }
  /// Next complete expression, if one has been fully received.
  std::optional<Sexpr> next();

 private:
  std::string d_buffer;
};

/// Parses exactly one expression. Throws std::runtime_error.
Sexpr parse_sexpr(std::string_view text);

}  // namespace mad
