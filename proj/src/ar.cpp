#include "mad/ar.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace mad {

namespace {

void
append_unique(std::vector<std::string>& out, const std::string& name)
{
  if (std::find(out.begin(), out.end(), name) == out.end())
  {
    out.push_back(name);
  }
}

void
collect(const ExprPtr& e, ExprRefs& refs)
{
  if (!e) return;
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Expr::Column>)
        {
          append_unique(refs.columns, n.name);
        }
        else if constexpr (std::is_same_v<N, Expr::Param>)
        {
          append_unique(refs.params, n.name);
        }
        else if constexpr (std::is_same_v<N, Expr::Variable>)
        {
          append_unique(refs.variables, n.name);
        }
        else if constexpr (std::is_same_v<N, Expr::Unary>)
        {
          collect(n.operand, refs);
        }
        else if constexpr (std::is_same_v<N, Expr::Binary>)
        {
          collect(n.lhs, refs);
          collect(n.rhs, refs);
        }
      },
      e->node);
}

int
precedence(BinaryOp op)
{
  switch (op)
  {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul:
    case BinaryOp::Div: return 6;
  }
  return 0;
}

std::string
render(const ExprPtr& e, int parent_prec)
{
  return std::visit(
      [&](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Expr::Literal>)
        {
          return to_string(n.value);
        }
        else if constexpr (std::is_same_v<N, Expr::Column>)
        {
          return n.name;
        }
        else if constexpr (std::is_same_v<N, Expr::Param>
                           || std::is_same_v<N, Expr::Variable>)
        {
          return ":" + n.name;
        }
        else if constexpr (std::is_same_v<N, Expr::Unary>)
        {
          if (n.op == UnaryOp::Not)
          {
            std::string s = "NOT " + render(n.operand, 3);
            return parent_prec > 3 ? "(" + s + ")" : s;
          }
          return "-" + render(n.operand, 7);
        }
        else
        {
          int p = precedence(n.op);
          // Comparisons do not chain, so both sides bind tighter.
          int lp = is_comparison(n.op) ? p + 1 : p;
          std::string s = render(n.lhs, lp) + " " + to_string(n.op) + " "
                          + render(n.rhs, p + 1);
          return p < parent_prec ? "(" + s + ")" : s;
        }
      },
      e->node);
}

}  // namespace

/* -------------------------------------------------------------------------- */

InputError::InputError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(
          line ? message + " (line " + std::to_string(line)
                     + (column ? ", column " + std::to_string(column) : "") + ")"
               : message),
      d_message(message),
      d_line(line),
      d_column(column)
{
}

InputError
InputError::in_file(const std::string& file) const
{
  InputError copy(file + ": " + d_message, d_line, d_column);
  copy.d_file = file;
  return copy;
}

const char*
to_string(ValueType type)
{
  switch (type)
  {
    case ValueType::Int: return "int";
    case ValueType::Real: return "real";
    case ValueType::String: return "string";
    case ValueType::Boolean: return "boolean";
  }
  return "?";
}

std::optional<ValueType>
value_type_from_string(const std::string& name)
{
  if (name == "int") return ValueType::Int;
  if (name == "real") return ValueType::Real;
  if (name == "string") return ValueType::String;
  if (name == "boolean") return ValueType::Boolean;
  return std::nullopt;
}

bool
is_numeric(ValueType type)
{
  return type == ValueType::Int || type == ValueType::Real;
}

ValueType
type_of(const Value& value)
{
  switch (value.index())
  {
    case 0: return ValueType::Int;
    case 1: return ValueType::Real;
    case 2: return ValueType::String;
    default: return ValueType::Boolean;
  }
}

std::string
to_string(const Value& value)
{
  if (auto i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  if (auto d = std::get_if<double>(&value))
  {
    // Shortest round-trip form, always with a decimal point so it re-lexes
    // as a real.
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), *d);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
  }
  if (auto s = std::get_if<std::string>(&value))
  {
    std::string out = "'";
    for (char c : *s)
    {
      if (c == '\'') out += '\'';
      out += c;
    }
    return out + "'";
  }
  return std::get<bool>(value) ? "true" : "false";
}

const char*
to_string(UnaryOp op)
{
  return op == UnaryOp::Neg ? "-" : "NOT";
}

const char*
to_string(BinaryOp op)
{
  switch (op)
  {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "<>";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "AND";
    case BinaryOp::Or: return "OR";
  }
  return "?";
}

bool
is_comparison(BinaryOp op)
{
  return op >= BinaryOp::Eq && op <= BinaryOp::Ge;
}

bool
is_arithmetic(BinaryOp op)
{
  return op <= BinaryOp::Div;
}

bool
is_logical(BinaryOp op)
{
  return op == BinaryOp::And || op == BinaryOp::Or;
}

/* -------------------------------------------------------------------------- */

ExprPtr
Expr::literal(Value value)
{
  ValueType t = type_of(value);
  return std::make_shared<const Expr>(Expr{Literal{std::move(value)}, t});
}

ExprPtr
Expr::column(std::string name, ValueType type)
{
  return std::make_shared<const Expr>(Expr{Column{std::move(name)}, type});
}

ExprPtr
Expr::param(std::string name, ValueType type)
{
  return std::make_shared<const Expr>(Expr{Param{std::move(name)}, type});
}

ExprPtr
Expr::variable(std::string name, ValueType type)
{
  return std::make_shared<const Expr>(Expr{Variable{std::move(name)}, type});
}

ExprPtr
Expr::unary(UnaryOp op, ExprPtr operand, ValueType type)
{
  return std::make_shared<const Expr>(Expr{Unary{op, std::move(operand)}, type});
}

ExprPtr
Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, ValueType type)
{
  return std::make_shared<const Expr>(
      Expr{Binary{op, std::move(lhs), std::move(rhs)}, type});
}

ExprPtr
Expr::truth()
{
  static const ExprPtr t = literal(true);
  return t;
}

bool
operator==(const Expr& a, const Expr& b)
{
  if (a.type != b.type || a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using N = std::decay_t<decltype(x)>;
        const auto& y = std::get<N>(b.node);
        if constexpr (std::is_same_v<N, Expr::Literal>)
        {
          return x.value == y.value;
        }
        else if constexpr (std::is_same_v<N, Expr::Unary>)
        {
          return x.op == y.op && same_expr(x.operand, y.operand);
        }
        else if constexpr (std::is_same_v<N, Expr::Binary>)
        {
          return x.op == y.op && same_expr(x.lhs, y.lhs) && same_expr(x.rhs, y.rhs);
        }
        else
        {
          return x.name == y.name;
        }
      },
      a.node);
}

bool
same_expr(const ExprPtr& a, const ExprPtr& b)
{
  if (!a || !b) return !a && !b;
  return *a == *b;
}

bool
is_trivially_true(const ExprPtr& e)
{
  if (!e) return true;
  auto lit = std::get_if<Expr::Literal>(&e->node);
  return lit && lit->value == Value{true};
}

ExprRefs
collect_refs(const ExprPtr& e)
{
  ExprRefs refs;
  collect(e, refs);
  return refs;
}

std::string
to_sql(const ExprPtr& e)
{
  return e ? render(e, 0) : std::string{};
}

/* -------------------------------------------------------------------------- */

const Column*
Table::find_column(const std::string& column) const
{
  for (const auto& c : columns)
  {
    if (c.name == column) return &c;
  }
  return nullptr;
}

bool
Table::is_key_column(const std::string& column) const
{
  return std::find(primary_key.begin(), primary_key.end(), column) != primary_key.end();
}

const Table*
Schema::find_table(const std::string& name) const
{
  for (const auto& t : tables)
  {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const Table&
Schema::table(const std::string& name) const
{
  const Table* t = find_table(name);
  if (!t) throw std::out_of_range("unknown table " + name);
  return *t;
}

const char*
to_string(StatementKind kind)
{
  switch (kind)
  {
    case StatementKind::Select: return "select";
    case StatementKind::Update: return "update";
    case StatementKind::Insert: return "insert";
    case StatementKind::Delete: return "delete";
  }
  return "?";
}

std::vector<std::string>
Statement::observed_columns() const
{
  if (kind != StatementKind::Select) return {};
  std::vector<std::string> out = read_columns;
  for (const auto& c : collect_refs(where).columns) append_unique(out, c);
  return out;
}

std::vector<std::string>
Statement::written_columns(const Table& t) const
{
  std::vector<std::string> out;
  switch (kind)
  {
    case StatementKind::Select: break;
    case StatementKind::Update:
      for (const auto& w : writes) append_unique(out, w.column);
      break;
    case StatementKind::Insert:
    case StatementKind::Delete:
      for (const auto& c : t.columns) out.push_back(c.name);
      break;
  }
  return out;
}

bool
operator==(const Statement& a, const Statement& b)
{
  if (a.name != b.name || a.kind != b.kind || a.table != b.table
      || a.read_columns != b.read_columns || a.bindings != b.bindings
      || a.writes.size() != b.writes.size() || !same_expr(a.where, b.where)
      || !same_expr(a.path_condition, b.path_condition))
  {
    return false;
  }
  for (std::size_t i = 0; i < a.writes.size(); ++i)
  {
    if (a.writes[i].column != b.writes[i].column
        || !same_expr(a.writes[i].value, b.writes[i].value))
    {
      return false;
    }
  }
  return true;
}

const Parameter*
Functionality::find_param(const std::string& pname) const
{
  for (const auto& p : params)
  {
    if (p.name == pname) return &p;
  }
  return nullptr;
}

std::map<std::string, ValueType>
Functionality::variable_types(const Schema& schema) const
{
  std::map<std::string, ValueType> out;
  for (const auto& s : statements)
  {
    const Table* t = schema.find_table(s.table);
    if (!t) continue;
    for (const auto& b : s.bindings)
    {
      if (const Column* c = t->find_column(b.column)) out[b.variable] = c->type;
    }
  }
  return out;
}

const Functionality*
MonolithAR::find_functionality(const std::string& fname) const
{
  for (const auto& f : functionalities)
  {
    if (f.name == fname) return &f;
  }
  return nullptr;
}

const std::string&
Decomposition::microservice_of(const std::string& table) const
{
  for (const auto& c : clusters)
  {
    if (std::find(c.tables.begin(), c.tables.end(), table) != c.tables.end())
    {
      return c.microservice;
    }
  }
  throw std::out_of_range("table " + table + " is not assigned to a microservice");
}

Decomposition
Decomposition::mono(const Schema& schema, std::string name)
{
  Cluster c{std::move(name), {}};
  for (const auto& t : schema.tables) c.tables.push_back(t.name);
  return Decomposition{{std::move(c)}};
}

}  // namespace mad
