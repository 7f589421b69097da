#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "mad/frontend.hpp"

namespace mad {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

namespace {

std::string
upper(std::string s)
{
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

/// Name resolution rules for one expression.
struct Scope
{
  const Table* table = nullptr;  // null: no columns in scope
  const Functionality* functionality = nullptr;
  const std::map<std::string, ValueType>* variables = nullptr;
  /// Error reported when a column is referenced but columns are not allowed.
  std::string column_error;
  /// Path conditions name parameters and variables without a leading ':'.
  bool bare_names = false;
};

class ExprParser
{
 public:
  ExprParser(TokenStream& ts, const Scope& scope) : d_ts(ts), d_scope(scope) {}

  ExprPtr parse() { return parse_or(); }

 private:
  TokenStream& d_ts;
  const Scope& d_scope;

  [[noreturn]] void type_error(const Token& at, const std::string& message)
  {
    throw InputError("type mismatch: " + message, at.line, at.column);
  }

  ExprPtr parse_or()
  {
    ExprPtr lhs = parse_and();
    while (d_ts.is_keyword("OR"))
    {
      Token at = d_ts.next();
      ExprPtr rhs = parse_and();
      lhs = logical(BinaryOp::Or, lhs, rhs, at);
    }
    return lhs;
  }

  ExprPtr parse_and()
  {
    ExprPtr lhs = parse_not();
    while (d_ts.is_keyword("AND"))
    {
      Token at = d_ts.next();
      ExprPtr rhs = parse_not();
      lhs = logical(BinaryOp::And, lhs, rhs, at);
    }
    return lhs;
  }

  ExprPtr logical(BinaryOp op, ExprPtr lhs, ExprPtr rhs, const Token& at)
  {
    if (lhs->type != ValueType::Boolean || rhs->type != ValueType::Boolean)
    {
      type_error(at, std::string(to_string(op)) + " needs boolean operands");
    }
    return Expr::binary(op, std::move(lhs), std::move(rhs), ValueType::Boolean);
  }

  ExprPtr parse_not()
  {
    if (d_ts.is_keyword("NOT"))
    {
      Token at = d_ts.next();
      ExprPtr operand = parse_not();
      if (operand->type != ValueType::Boolean) type_error(at, "NOT needs a boolean operand");
      return Expr::unary(UnaryOp::Not, std::move(operand), ValueType::Boolean);
    }
    return parse_comparison();
  }

  static std::optional<BinaryOp> comparison_op(const Token& t)
  {
    if (t.kind != TokenKind::Symbol) return std::nullopt;
    if (t.text == "=") return BinaryOp::Eq;
    if (t.text == "<>") return BinaryOp::Ne;
    if (t.text == "<") return BinaryOp::Lt;
    if (t.text == "<=") return BinaryOp::Le;
    if (t.text == ">") return BinaryOp::Gt;
    if (t.text == ">=") return BinaryOp::Ge;
    return std::nullopt;
  }

  ExprPtr parse_comparison()
  {
    ExprPtr lhs = parse_additive();
    auto op = comparison_op(d_ts.peek());
    if (!op) return lhs;
    Token at = d_ts.next();
    ExprPtr rhs = parse_additive();
    bool numeric = is_numeric(lhs->type) && is_numeric(rhs->type);
    if (!numeric && lhs->type != rhs->type)
    {
      type_error(at, std::string("cannot compare ") + to_string(lhs->type) + " with "
                         + to_string(rhs->type));
    }
    if (*op != BinaryOp::Eq && *op != BinaryOp::Ne && !numeric)
    {
      type_error(at, std::string("ordering comparison on ") + to_string(lhs->type));
    }
    if (comparison_op(d_ts.peek()))
    {
      d_ts.fail("syntax error: comparisons do not chain; use AND");
    }
    return Expr::binary(*op, std::move(lhs), std::move(rhs), ValueType::Boolean);
  }

  ExprPtr arithmetic(BinaryOp op, ExprPtr lhs, ExprPtr rhs, const Token& at)
  {
    if (!is_numeric(lhs->type) || !is_numeric(rhs->type))
    {
      type_error(at, std::string("'") + to_string(op) + "' needs numeric operands");
    }
    ValueType t = (lhs->type == ValueType::Real || rhs->type == ValueType::Real)
                      ? ValueType::Real
                      : ValueType::Int;
    return Expr::binary(op, std::move(lhs), std::move(rhs), t);
  }

  ExprPtr parse_additive()
  {
    ExprPtr lhs = parse_multiplicative();
    while (d_ts.is_symbol("+") || d_ts.is_symbol("-"))
    {
      Token at = d_ts.next();
      ExprPtr rhs = parse_multiplicative();
      lhs = arithmetic(at.text == "+" ? BinaryOp::Add : BinaryOp::Sub, lhs, rhs, at);
    }
    return lhs;
  }

  ExprPtr parse_multiplicative()
  {
    ExprPtr lhs = parse_unary();
    while (d_ts.is_symbol("*") || d_ts.is_symbol("/"))
    {
      Token at = d_ts.next();
      ExprPtr rhs = parse_unary();
      lhs = arithmetic(at.text == "*" ? BinaryOp::Mul : BinaryOp::Div, lhs, rhs, at);
    }
    return lhs;
  }

  ExprPtr parse_unary()
  {
    if (d_ts.is_symbol("-"))
    {
      Token at = d_ts.next();
      ExprPtr operand = parse_unary();
      if (!is_numeric(operand->type)) type_error(at, "unary '-' needs a numeric operand");
      ValueType t = operand->type;
      return Expr::unary(UnaryOp::Neg, std::move(operand), t);
    }
    return parse_primary();
  }

  ExprPtr resolve_name(const Token& at, const std::string& name)
  {
    if (d_scope.functionality)
    {
      if (const Parameter* p = d_scope.functionality->find_param(name))
      {
        return Expr::param(name, p->type);
      }
    }
    if (d_scope.variables)
    {
      auto it = d_scope.variables->find(name);
      if (it != d_scope.variables->end()) return Expr::variable(name, it->second);
    }
    throw InputError("use of unbound variable or unknown parameter '" + name + "'", at.line,
                     at.column);
  }

  ExprPtr column_ref(const Token& at, const std::string& name)
  {
    if (!d_scope.column_error.empty())
    {
      throw InputError(d_scope.column_error + " (column '" + name + "')", at.line, at.column);
    }
    const Column* c = d_scope.table->find_column(name);
    if (!c)
    {
      throw InputError("unknown column '" + name + "' in table " + d_scope.table->name,
                       at.line, at.column);
    }
    return Expr::column(name, c->type);
  }

  ExprPtr parse_primary()
  {
    const Token& t = d_ts.peek();
    switch (t.kind)
    {
      case TokenKind::Integer:
      {
        Token tok = d_ts.next();
        try
        {
          return Expr::literal(static_cast<std::int64_t>(std::stoll(tok.text)));
        }
        catch (const std::out_of_range&)
        {
          throw InputError("integer literal out of range", tok.line, tok.column);
        }
      }
      case TokenKind::Real:
        return Expr::literal(std::stod(d_ts.next().text));
      case TokenKind::String:
        return Expr::literal(d_ts.next().text);
      case TokenKind::Param:
      {
        Token tok = d_ts.next();
        return resolve_name(tok, tok.text);
      }
      case TokenKind::Keyword:
        if (t.text == "TRUE" || t.text == "FALSE")
        {
          return Expr::literal(d_ts.next().text == "TRUE");
        }
        if (t.text == "NULL") d_ts.fail("unsupported SQL feature: NULL");
        if (t.text == "SELECT") d_ts.fail("unsupported SQL feature: subqueries");
        d_ts.fail_expected("expression");
      case TokenKind::Identifier:
      {
        Token tok = d_ts.next();
        if (d_ts.is_symbol("("))
        {
          d_ts.fail("unsupported SQL feature: function call '" + tok.text + "'");
        }
        if (d_scope.bare_names) return resolve_name(tok, tok.text);
        if (!d_scope.table)
        {
          throw InputError("unexpected column reference '" + tok.text + "'", tok.line,
                           tok.column);
        }
        if (d_ts.accept_symbol("."))
        {
          std::string col = d_ts.expect_identifier("column name");
          if (tok.text != d_scope.table->name)
          {
            throw InputError("join or multi-table statement unsupported: reference to table '"
                                 + tok.text + "'",
                             tok.line, tok.column);
          }
          return column_ref(tok, col);
        }
        return column_ref(tok, tok.text);
      }
      case TokenKind::Symbol:
        if (t.text == "(")
        {
          d_ts.next();
          if (d_ts.is_keyword("SELECT")) d_ts.fail("unsupported SQL feature: subqueries");
          ExprPtr inner = parse_or();
          d_ts.expect_symbol(")");
          return inner;
        }
        d_ts.fail_expected("expression");
      case TokenKind::End:
        d_ts.fail_expected("expression");
    }
    d_ts.fail_expected("expression");
  }
};

void
reject_tail_clauses(TokenStream& ts)
{
  for (const char* kw : {"ORDER", "GROUP", "HAVING", "LIMIT", "UNION"})
  {
    if (ts.is_keyword(kw)) ts.fail(std::string("unsupported SQL feature: ") + kw);
  }
}

void
finish_statement(TokenStream& ts)
{
  reject_tail_clauses(ts);
  ts.accept_symbol(";");
  if (!ts.at_end()) ts.fail_expected("end of statement");
}

const Table&
lookup_table(TokenStream& ts, const Schema& schema, const std::string& name)
{
  const Table* t = schema.find_table(name);
  if (!t) ts.fail("unknown table '" + name + "'");
  return *t;
}

void
reject_joins(TokenStream& ts)
{
  if (ts.is_symbol(",") || ts.is_keyword("JOIN") || ts.is_keyword("INNER")
      || ts.is_keyword("LEFT") || ts.is_keyword("RIGHT") || ts.is_keyword("OUTER"))
  {
    ts.fail("join or multi-table statement unsupported");
  }
  if (ts.is_keyword("AS") || ts.peek().kind == TokenKind::Identifier)
  {
    ts.fail("unsupported SQL feature: table aliases");
  }
}

ExprPtr
parse_where(TokenStream& ts, const Scope& scope)
{
  if (!ts.accept_keyword("WHERE")) return nullptr;
  Token at = ts.peek();
  ExprPtr e = ExprParser(ts, scope).parse();
  if (e->type != ValueType::Boolean)
  {
    throw InputError("type mismatch: WHERE clause must be boolean", at.line, at.column);
  }
  return e;
}

void
check_assignable(const Token& at, const Column& column, const ExprPtr& value)
{
  bool ok = column.type == value->type
            || (column.type == ValueType::Real && value->type == ValueType::Int);
  if (!ok)
  {
    throw InputError("type mismatch: cannot assign " + std::string(to_string(value->type))
                         + " to column '" + column.name + "' of type " + to_string(column.type),
                     at.line, at.column);
  }
}

Statement
parse_select(TokenStream& ts, const Schema& schema, const Scope& base)
{
  Statement s;
  s.kind = StatementKind::Select;
  if (ts.is_keyword("DISTINCT")) ts.fail("unsupported SQL feature: DISTINCT");

  struct Item
  {
    Token at;
    std::string qualifier;
    std::string column;
  };
  std::vector<Item> items;
  bool star = false;
  if (ts.accept_symbol("*"))
  {
    star = true;
  }
  else
  {
    do
    {
      Token at = ts.peek();
      std::string name = ts.expect_identifier("column name");
      if (ts.is_symbol("(")) ts.fail("unsupported SQL feature: function call '" + name + "'");
      Item item{at, "", name};
      if (ts.accept_symbol("."))
      {
        item.qualifier = name;
        item.column = ts.expect_identifier("column name");
      }
      if (ts.is_keyword("AS")) ts.fail("unsupported SQL feature: column aliases");
      items.push_back(item);
    } while (ts.accept_symbol(","));
  }
  ts.expect_keyword("FROM");
  s.table = ts.expect_identifier("table name");
  const Table& table = lookup_table(ts, schema, s.table);
  reject_joins(ts);

  if (star)
  {
    for (const auto& c : table.columns) s.read_columns.push_back(c.name);
  }
  for (const auto& item : items)
  {
    if (!item.qualifier.empty() && item.qualifier != table.name)
    {
      throw InputError("join or multi-table statement unsupported: reference to table '"
                           + item.qualifier + "'",
                       item.at.line, item.at.column);
    }
    if (!table.find_column(item.column))
    {
      throw InputError("unknown column '" + item.column + "' in table " + table.name,
                       item.at.line, item.at.column);
    }
    if (std::find(s.read_columns.begin(), s.read_columns.end(), item.column)
        == s.read_columns.end())
    {
      s.read_columns.push_back(item.column);
    }
  }

  Scope scope = base;
  scope.table = &table;
  s.where = parse_where(ts, scope);
  finish_statement(ts);
  return s;
}

Statement
parse_update(TokenStream& ts, const Schema& schema, const Scope& base)
{
  Statement s;
  s.kind = StatementKind::Update;
  s.table = ts.expect_identifier("table name");
  const Table& table = lookup_table(ts, schema, s.table);
  reject_joins(ts);
  ts.expect_keyword("SET");

  Scope value_scope = base;
  value_scope.table = &table;
  value_scope.column_error =
      "implicit update unsupported: split into a select and an update";
  do
  {
    Token at = ts.peek();
    std::string col = ts.expect_identifier("column name");
    if (ts.accept_symbol("."))
    {
      if (col != table.name) ts.fail("join or multi-table statement unsupported");
      col = ts.expect_identifier("column name");
    }
    const Column* c = table.find_column(col);
    if (!c)
    {
      throw InputError("unknown column '" + col + "' in table " + table.name, at.line,
                       at.column);
    }
    if (table.is_key_column(col))
    {
      throw InputError("unsupported SQL feature: updating primary-key column '" + col + "'",
                       at.line, at.column);
    }
    for (const auto& w : s.writes)
    {
      if (w.column == col)
      {
        throw InputError("column '" + col + "' assigned twice", at.line, at.column);
      }
    }
    ts.expect_symbol("=");
    Token vat = ts.peek();
    ExprPtr value = ExprParser(ts, value_scope).parse();
    check_assignable(vat, *c, value);
    s.writes.push_back({col, value});
  } while (ts.accept_symbol(","));

  Scope where_scope = base;
  where_scope.table = &table;
  s.where = parse_where(ts, where_scope);
  finish_statement(ts);
  return s;
}

Statement
parse_insert(TokenStream& ts, const Schema& schema, const Scope& base)
{
  Statement s;
  s.kind = StatementKind::Insert;
  ts.expect_keyword("INTO");
  s.table = ts.expect_identifier("table name");
  const Table& table = lookup_table(ts, schema, s.table);

  std::vector<std::pair<Token, std::string>> cols;
  ts.expect_symbol("(");
  do
  {
    Token at = ts.peek();
    std::string col = ts.expect_identifier("column name");
    if (!table.find_column(col))
    {
      throw InputError("unknown column '" + col + "' in table " + table.name, at.line,
                       at.column);
    }
    for (const auto& [_, prev] : cols)
    {
      if (prev == col) throw InputError("column '" + col + "' listed twice", at.line, at.column);
    }
    cols.emplace_back(at, col);
  } while (ts.accept_symbol(","));
  ts.expect_symbol(")");

  if (ts.is_keyword("SELECT")) ts.fail("unsupported SQL feature: INSERT ... SELECT");
  ts.expect_keyword("VALUES");
  Scope scope = base;
  scope.table = &table;
  scope.column_error = "column references are not allowed in VALUES";
  ts.expect_symbol("(");
  std::size_t i = 0;
  do
  {
    Token at = ts.peek();
    if (i >= cols.size()) ts.fail("more VALUES than columns");
    ExprPtr value = ExprParser(ts, scope).parse();
    check_assignable(at, *table.find_column(cols[i].second), value);
    s.writes.push_back({cols[i].second, value});
    ++i;
  } while (ts.accept_symbol(","));
  if (i != cols.size()) ts.fail("fewer VALUES than columns");
  ts.expect_symbol(")");
  if (ts.is_symbol(",")) ts.fail("unsupported SQL feature: multi-row INSERT");

  for (const auto& key : table.primary_key)
  {
    bool present = std::any_of(s.writes.begin(), s.writes.end(),
                               [&](const Assignment& a) { return a.column == key; });
    if (!present) ts.fail("INSERT must provide primary-key column '" + key + "'");
  }
  finish_statement(ts);
  return s;
}

Statement
parse_delete(TokenStream& ts, const Schema& schema, const Scope& base)
{
  Statement s;
  s.kind = StatementKind::Delete;
  ts.expect_keyword("FROM");
  s.table = ts.expect_identifier("table name");
  const Table& table = lookup_table(ts, schema, s.table);
  reject_joins(ts);
  Scope scope = base;
  scope.table = &table;
  s.where = parse_where(ts, scope);
  finish_statement(ts);
  return s;
}

std::optional<ValueType>
sql_type(const std::string& name)
{
  std::string u = upper(name);
  if (u == "INT" || u == "INTEGER" || u == "BIGINT" || u == "SMALLINT" || u == "TINYINT")
  {
    return ValueType::Int;
  }
  if (u == "REAL" || u == "FLOAT" || u == "DOUBLE" || u == "DECIMAL" || u == "NUMERIC")
  {
    return ValueType::Real;
  }
  if (u == "VARCHAR" || u == "CHAR" || u == "TEXT" || u == "STRING") return ValueType::String;
  if (u == "BOOLEAN" || u == "BOOL") return ValueType::Boolean;
  return std::nullopt;
}

const char*
sql_type_name(ValueType t)
{
  switch (t)
  {
    case ValueType::Int: return "INT";
    case ValueType::Real: return "REAL";
    case ValueType::String: return "VARCHAR";
    case ValueType::Boolean: return "BOOLEAN";
  }
  return "?";
}

std::vector<std::string>
parse_key_list(TokenStream& ts)
{
  std::vector<std::string> cols;
  ts.expect_symbol("(");
  do
  {
    cols.push_back(ts.expect_identifier("column name"));
  } while (ts.accept_symbol(","));
  ts.expect_symbol(")");
  return cols;
}

Table
parse_create_table(TokenStream& ts, const Schema& schema)
{
  Token start = ts.peek();
  ts.expect_keyword("CREATE");
  ts.expect_keyword("TABLE");
  Token name_tok = ts.peek();
  Table table;
  table.name = ts.expect_identifier("table name");
  if (schema.find_table(table.name))
  {
    throw InputError("duplicate table '" + table.name + "'", name_tok.line, name_tok.column);
  }
  ts.expect_symbol("(");

  bool has_key = false;
  Token key_tok = start;
  auto set_key = [&](const Token& at, std::vector<std::string> cols) {
    if (has_key)
    {
      throw InputError("table '" + table.name + "' declares more than one PRIMARY KEY",
                       at.line, at.column);
    }
    has_key = true;
    key_tok = at;
    table.primary_key = std::move(cols);
  };

  do
  {
    Token at = ts.peek();
    if (ts.is_keyword("PRIMARY"))
    {
      ts.next();
      ts.expect_keyword("KEY");
      set_key(at, parse_key_list(ts));
      continue;
    }
    if (ts.is_keyword("FOREIGN")) ts.fail("unsupported SQL feature: FOREIGN KEY unsupported");
    if (ts.is_keyword("CONSTRAINT")) ts.fail("unsupported SQL feature: named CONSTRAINT");
    if (ts.is_keyword("UNIQUE")) ts.fail("unsupported SQL feature: UNIQUE constraint");
    if (ts.is_keyword("CHECK")) ts.fail("unsupported SQL feature: CHECK constraint");

    Column col;
    col.name = ts.expect_identifier("column name");
    Token type_tok = ts.peek();
    std::string type_name = ts.expect_identifier("column type");
    auto type = sql_type(type_name);
    if (!type)
    {
      throw InputError("unsupported column type '" + type_name + "'", type_tok.line,
                       type_tok.column);
    }
    col.type = *type;
    if (ts.accept_symbol("("))
    {
      do
      {
        if (ts.peek().kind != TokenKind::Integer) ts.fail_expected("type length");
        ts.next();
      } while (ts.accept_symbol(","));
      ts.expect_symbol(")");
    }
    if (table.find_column(col.name))
    {
      throw InputError("duplicate column '" + col.name + "' in table '" + table.name + "'",
                       at.line, at.column);
    }
    table.columns.push_back(col);

    for (;;)
    {
      Token ct = ts.peek();
      if (ts.accept_keyword("NOT"))
      {
        ts.expect_keyword("NULL");
      }
      else if (ts.accept_keyword("NULL"))
      {
      }
      else if (ts.accept_keyword("PRIMARY"))
      {
        ts.expect_keyword("KEY");
        set_key(ct, {col.name});
      }
      else if (ts.is_keyword("REFERENCES"))
      {
        ts.fail("unsupported SQL feature: FOREIGN KEY unsupported");
      }
      else if (ts.is_keyword("UNIQUE"))
      {
        ts.fail("unsupported SQL feature: UNIQUE constraint");
      }
      else if (ts.is_keyword("DEFAULT"))
      {
        ts.fail("unsupported SQL feature: DEFAULT");
      }
      else if (ts.is_keyword("CHECK"))
      {
        ts.fail("unsupported SQL feature: CHECK constraint");
      }
      else
      {
        break;
      }
    }
  } while (ts.accept_symbol(","));
  ts.expect_symbol(")");
  ts.accept_symbol(";");

  if (!has_key)
  {
    throw InputError("table '" + table.name + "' has no PRIMARY KEY", start.line, start.column);
  }
  std::set<std::string> seen;
  for (const auto& k : table.primary_key)
  {
    if (!table.find_column(k))
    {
      throw InputError("PRIMARY KEY names unknown column '" + k + "'", key_tok.line,
                       key_tok.column);
    }
    if (!seen.insert(k).second)
    {
      throw InputError("PRIMARY KEY lists column '" + k + "' twice", key_tok.line,
                       key_tok.column);
    }
  }
  return table;
}

}  // namespace

/* -------------------------------------------------------------------------- */

Schema
parse_schema(std::string_view text)
{
  TokenStream ts(detail::tokenize(text));
  Schema schema;
  while (!ts.at_end())
  {
    if (ts.accept_symbol(";")) continue;
    if (!ts.is_keyword("CREATE"))
    {
      ts.fail_expected("CREATE TABLE");
    }
    if (!ts.is_keyword("TABLE", 1))
    {
      ts.next();
      ts.fail("unsupported SQL feature: only CREATE TABLE is supported");
    }
    schema.tables.push_back(parse_create_table(ts, schema));
  }
  return schema;
}

Statement
parse_statement(std::string_view sql,
                const Schema& schema,
                const Functionality& f,
                const std::string& name)
{
  TokenStream ts(detail::tokenize(sql));
  auto vars = f.variable_types(schema);
  Scope scope;
  scope.functionality = &f;
  scope.variables = &vars;

  Statement s;
  if (ts.accept_keyword("SELECT"))
  {
    s = parse_select(ts, schema, scope);
  }
  else if (ts.accept_keyword("UPDATE"))
  {
    s = parse_update(ts, schema, scope);
  }
  else if (ts.accept_keyword("INSERT"))
  {
    s = parse_insert(ts, schema, scope);
  }
  else if (ts.accept_keyword("DELETE"))
  {
    s = parse_delete(ts, schema, scope);
  }
  else
  {
    ts.fail_expected("SELECT, UPDATE, INSERT or DELETE");
  }
  s.name = name;
  s.path_condition = Expr::truth();
  return s;
}

ExprPtr
parse_path_condition(std::string_view text, const Functionality& f, const Schema& schema)
{
  TokenStream ts(detail::tokenize(text));
  auto vars = f.variable_types(schema);
  Scope scope;
  scope.functionality = &f;
  scope.variables = &vars;
  scope.bare_names = true;
  Token at = ts.peek();
  ExprPtr e = ExprParser(ts, scope).parse();
  if (!ts.at_end()) ts.fail_expected("end of path condition");
  if (e->type != ValueType::Boolean)
  {
    throw InputError("type mismatch: path condition must be boolean", at.line, at.column);
  }
  return e;
}

std::string
print_schema(const Schema& schema)
{
  std::ostringstream out;
  for (const auto& t : schema.tables)
  {
    out << "CREATE TABLE " << t.name << " (\n";
    for (const auto& c : t.columns)
    {
      out << "  " << c.name << " " << sql_type_name(c.type) << ",\n";
    }
    out << "  PRIMARY KEY (";
    for (std::size_t i = 0; i < t.primary_key.size(); ++i)
    {
      out << (i ? ", " : "") << t.primary_key[i];
    }
    out << ")\n);\n\n";
  }
  return out.str();
}

std::string
statement_sql(const Statement& s)
{
  std::string out;
  auto join_writes = [&](bool names_only) {
    std::string r;
    for (std::size_t i = 0; i < s.writes.size(); ++i)
    {
      if (i) r += ", ";
      r += names_only ? s.writes[i].column : to_sql(s.writes[i].value);
    }
    return r;
  };
  switch (s.kind)
  {
    case StatementKind::Select:
      out = "SELECT ";
      for (std::size_t i = 0; i < s.read_columns.size(); ++i)
      {
        out += (i ? ", " : "") + s.read_columns[i];
      }
      out += " FROM " + s.table;
      break;
    case StatementKind::Update:
      out = "UPDATE " + s.table + " SET ";
      for (std::size_t i = 0; i < s.writes.size(); ++i)
      {
        out += (i ? ", " : "") + s.writes[i].column + " = " + to_sql(s.writes[i].value);
      }
      break;
    case StatementKind::Insert:
      return "INSERT INTO " + s.table + " (" + join_writes(true) + ") VALUES ("
             + join_writes(false) + ")";
    case StatementKind::Delete:
      out = "DELETE FROM " + s.table;
      break;
  }
  if (s.where) out += " WHERE " + to_sql(s.where);
  return out;
}

}  // namespace mad
