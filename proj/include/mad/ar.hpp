#pragma once

// Abstract representation (AR) of a monolith: its relational schema, the
// functionalities that operate on it, and a decomposition of its tables into
// microservices.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mad {

/// Raised for any malformed or unsupported input. `line` is 1-based, 0 when
/// the position is not known.
class InputError : public std::runtime_error
{
 public:
  InputError(const std::string& message, std::size_t line = 0, std::size_t column = 0);

  std::size_t line() const { return d_line; }
  std::size_t column() const { return d_column; }
  const std::string& message() const { return d_message; }

  /// Returns a copy whose what() is prefixed with `file`.
  InputError in_file(const std::string& file) const;

 private:
  std::string d_message;
  std::size_t d_line;
  std::size_t d_column;
  std::string d_file;
};

enum class ValueType
{
  Int,
  Real,
  String,
  Boolean,
};

const char* to_string(ValueType type);
std::optional<ValueType> value_type_from_string(const std::string& name);

bool is_numeric(ValueType type);

using Value = std::variant<std::int64_t, double, std::string, bool>;

ValueType type_of(const Value& value);
std::string to_string(const Value& value);

/* -------------------------------------------------------------------------- */
/* Expressions                                                                */
/* -------------------------------------------------------------------------- */

enum class UnaryOp
{
  Neg,
  Not,
};

enum class BinaryOp
{
  Add,
  Sub,
  Mul,
  Div,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
};

const char* to_string(UnaryOp op);
const char* to_string(BinaryOp op);
bool is_comparison(BinaryOp op);
bool is_arithmetic(BinaryOp op);
bool is_logical(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree. Every node carries the type assigned by the
/// type checker in the frontend.
struct Expr
{
  struct Literal
  {
    Value value;
  };
  /// A column of the table the enclosing statement accesses.
  struct Column
  {
    std::string name;
  };
  struct Param
  {
    std::string name;
  };
  /// A variable bound by an earlier select of the same functionality.
  struct Variable
  {
    std::string name;
  };
  struct Unary
  {
    UnaryOp op;
    ExprPtr operand;
  };
  struct Binary
  {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };

  using Node = std::variant<Literal, Column, Param, Variable, Unary, Binary>;

  Node node;
  ValueType type;

  static ExprPtr literal(Value value);
  static ExprPtr column(std::string name, ValueType type);
  static ExprPtr param(std::string name, ValueType type);
  static ExprPtr variable(std::string name, ValueType type);
  static ExprPtr unary(UnaryOp op, ExprPtr operand, ValueType type);
  static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, ValueType type);
  static ExprPtr truth();
};

bool operator==(const Expr& a, const Expr& b);
bool same_expr(const ExprPtr& a, const ExprPtr& b);

/// True if the expression is the literal `true`.
bool is_trivially_true(const ExprPtr& e);

/// Names referenced by an expression, by node kind.
struct ExprRefs
{
  std::vector<std::string> columns;
  std::vector<std::string> params;
  std::vector<std::string> variables;
};
ExprRefs collect_refs(const ExprPtr& e);

/// SQL-ish rendering that the frontend parses back to an equal tree.
std::string to_sql(const ExprPtr& e);

/* -------------------------------------------------------------------------- */
/* Schema                                                                     */
/* -------------------------------------------------------------------------- */

struct Column
{
  std::string name;
  ValueType type;

  bool operator==(const Column&) const = default;
};

struct Table
{
  std::string name;
  std::vector<Column> columns;
  std::vector<std::string> primary_key;

  const Column* find_column(const std::string& column) const;
  bool is_key_column(const std::string& column) const;

  bool operator==(const Table&) const = default;
};

struct Schema
{
  std::vector<Table> tables;

  const Table* find_table(const std::string& name) const;
  const Table& table(const std::string& name) const;

  bool operator==(const Schema&) const = default;
};

/* -------------------------------------------------------------------------- */
/* Functionalities                                                            */
/* -------------------------------------------------------------------------- */

enum class StatementKind
{
  Select,
  Update,
  Insert,
  Delete,
};

const char* to_string(StatementKind kind);

struct Assignment
{
  std::string column;
  ExprPtr value;
};

struct Binding
{
  std::string variable;
  std::string column;

  bool operator==(const Binding&) const = default;
};

struct Statement
{
  std::string name;
  StatementKind kind;
  std::string table;
  /// Selected columns (select only), in select-list order.
  std::vector<std::string> read_columns;
  /// SET assignments (update) or VALUES (insert).
  std::vector<Assignment> writes;
  /// Null when the statement has no WHERE clause.
  ExprPtr where;
  std::vector<Binding> bindings;
  ExprPtr path_condition;

  /// Insert, update and delete all write.
  bool is_update() const { return kind != StatementKind::Select; }

  /// Columns whose values the statement observes: the select list plus the
  /// columns its WHERE clause inspects. Empty for writers.
  std::vector<std::string> observed_columns() const;

  /// Columns the statement writes. Insert and delete write every column of the
  /// row, so they take the table to resolve the full list.
  std::vector<std::string> written_columns(const Table& table) const;
};

bool operator==(const Statement& a, const Statement& b);

struct Parameter
{
  std::string name;
  ValueType type;

  bool operator==(const Parameter&) const = default;
};

struct Functionality
{
  std::string name;
  std::vector<Parameter> params;
  std::vector<Statement> statements;

  const Parameter* find_param(const std::string& name) const;
  /// Type of every variable bound by a select of this functionality.
  std::map<std::string, ValueType> variable_types(const Schema& schema) const;

  bool operator==(const Functionality&) const = default;
};

struct MonolithAR
{
  Schema schema;
  std::vector<Functionality> functionalities;

  const Functionality* find_functionality(const std::string& name) const;

  bool operator==(const MonolithAR&) const = default;
};

/* -------------------------------------------------------------------------- */
/* Decomposition                                                              */
/* -------------------------------------------------------------------------- */

struct Cluster
{
  std::string microservice;
  std::vector<std::string> tables;

  bool operator==(const Cluster&) const = default;
};

struct Decomposition
{
  /// In file order.
  std::vector<Cluster> clusters;

  /// Microservice owning `table`; throws std::out_of_range if none does.
  const std::string& microservice_of(const std::string& table) const;

  /// A decomposition with a single cluster holding every table of `schema`.
  static Decomposition mono(const Schema& schema, std::string name = "mono");

  bool operator==(const Decomposition&) const = default;
};

}  // namespace mad
