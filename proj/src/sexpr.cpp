#include "mad/sexpr.hpp"

#include <cctype>
#include <stdexcept>

namespace mad {

namespace {

bool
is_space(char c)
{
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

/// Length of the first complete expression in `s` starting at `pos` (after
/// whitespace and comments), or npos if incomplete.
std::size_t
complete_length(std::string_view s, std::size_t pos)
{
  int depth = 0;
  std::size_t i = pos;
  bool started = false;
  while (i < s.size())
  {
    char c = s[i];
    if (c == ';')
    {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (c == '|')
    {
      auto end = s.find('|', i + 1);
      if (end == std::string_view::npos) return std::string_view::npos;
      i = end + 1;
      started = true;
      if (depth == 0) return i - pos;
      continue;
    }
    if (c == '"')
    {
      std::size_t j = i + 1;
      for (;;)
      {
        if (j >= s.size()) return std::string_view::npos;
        if (s[j] == '"')
        {
          if (j + 1 < s.size() && s[j + 1] == '"')
          {
            j += 2;
            continue;
          }
          if (j + 1 >= s.size() && depth == 0) return std::string_view::npos;
          break;
        }
        ++j;
      }
      i = j + 1;
      started = true;
      if (depth == 0) return i - pos;
      continue;
    }
    if (c == '(')
    {
      ++depth;
      started = true;
      ++i;
      continue;
    }
    if (c == ')')
    {
      if (depth == 0) throw std::runtime_error("unbalanced ')' in solver output");
      --depth;
      ++i;
      if (depth == 0) return i - pos;
      continue;
    }
    if (is_space(c))
    {
      ++i;
      continue;
    }
    // plain atom
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j]) && s[j] != '(' && s[j] != ')') ++j;
    if (depth == 0)
    {
      // An atom at top level is complete only once a delimiter follows it.
      if (j >= s.size()) return std::string_view::npos;
      return j - pos;
    }
    started = true;
    i = j;
  }
  (void)started;
  return std::string_view::npos;
}

class Parser
{
 public:
  explicit Parser(std::string_view s) : d_s(s) {}

  Sexpr parse()
  {
    skip();
    if (d_i >= d_s.size()) throw std::runtime_error("empty s-expression");
    char c = d_s[d_i];
    if (c == '(')
    {
      ++d_i;
      std::vector<Sexpr> items;
      for (;;)
      {
        skip();
        if (d_i >= d_s.size()) throw std::runtime_error("unterminated list in solver output");
        if (d_s[d_i] == ')')
        {
          ++d_i;
          return Sexpr::make_list(std::move(items));
        }
        items.push_back(parse());
      }
    }
    if (c == ')') throw std::runtime_error("unexpected ')' in solver output");
    if (c == '|')
    {
      auto end = d_s.find('|', d_i + 1);
      if (end == std::string_view::npos) throw std::runtime_error("unterminated |symbol|");
      std::string text(d_s.substr(d_i + 1, end - d_i - 1));
      d_i = end + 1;
      return Sexpr::make_atom(std::move(text));
    }
    if (c == '"')
    {
      std::string text;
      std::size_t j = d_i + 1;
      for (;;)
      {
        if (j >= d_s.size()) throw std::runtime_error("unterminated string in solver output");
        if (d_s[j] == '"')
        {
          if (j + 1 < d_s.size() && d_s[j + 1] == '"')
          {
            text += '"';
            j += 2;
            continue;
          }
          break;
        }
        text += d_s[j++];
      }
      d_i = j + 1;
      return Sexpr::make_atom(std::move(text));
    }
    std::size_t j = d_i;
    while (j < d_s.size() && !is_space(d_s[j]) && d_s[j] != '(' && d_s[j] != ')') ++j;
    std::string text(d_s.substr(d_i, j - d_i));
    d_i = j;
    return Sexpr::make_atom(std::move(text));
  }

  void skip()
  {
    while (d_i < d_s.size())
    {
      if (is_space(d_s[d_i]))
      {
        ++d_i;
      }
      else if (d_s[d_i] == ';')
      {
        while (d_i < d_s.size() && d_s[d_i] != '\n') ++d_i;
      }
      else
      {
        break;
      }
    }
  }

  bool at_end()
  {
    skip();
    return d_i >= d_s.size();
  }

 private:
  std::string_view d_s;
  std::size_t d_i = 0;
};

}  // namespace

Sexpr
Sexpr::make_atom(std::string s)
{
  Sexpr e;
  e.atom = std::move(s);
  return e;
}

Sexpr
Sexpr::make_list(std::vector<Sexpr> items)
{
  Sexpr e;
  e.list = std::move(items);
  e.is_list = true;
  return e;
}

std::string
Sexpr::to_string() const
{
  if (!is_list) return atom;
  std::string out = "(";
  for (std::size_t i = 0; i < list.size(); ++i)
  {
    if (i) out += ' ';
    out += list[i].to_string();
  }
  return out + ")";
}

std::optional<long long>
Sexpr::as_int() const
{
  if (is_list)
  {
    if (list.size() == 2 && list[0].is_atom("-"))
    {
      auto v = list[1].as_int();
      if (v) return -*v;
    }
    return std::nullopt;
  }
  if (atom.empty()) return std::nullopt;
  for (char c : atom)
  {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  }
  try
  {
    return std::stoll(atom);
  }
  catch (const std::exception&)
  {
    return std::nullopt;
  }
}

std::optional<bool>
Sexpr::as_bool() const
{
  if (is_atom("true")) return true;
  if (is_atom("false")) return false;
  return std::nullopt;
}

std::optional<Sexpr>
SexprReader::next()
{
  std::size_t pos = 0;
  while (pos < d_buffer.size())
  {
    if (is_space(d_buffer[pos]))
    {
      ++pos;
    }
    else if (d_buffer[pos] == ';')
    {
      auto nl = d_buffer.find('\n', pos);
      if (nl == std::string::npos) return std::nullopt;
      pos = nl + 1;
    }
    else
    {
      break;
    }
  }
  if (pos >= d_buffer.size())
  {
    d_buffer.clear();
    return std::nullopt;
  }
  std::size_t len = complete_length(d_buffer, pos);
  if (len == std::string_view::npos) return std::nullopt;
  Sexpr e = parse_sexpr(std::string_view(d_buffer).substr(pos, len));
  d_buffer.erase(0, pos + len);
  return e;
}

Sexpr
parse_sexpr(std::string_view text)
{
  Parser p(text);
  Sexpr e = p.parse();
  if (!p.at_end()) throw std::runtime_error("trailing text after s-expression");
  return e;
}

}  // namespace mad
