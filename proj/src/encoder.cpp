#include "mad/encoder.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mad {

const char*
to_string(DepKind kind)
{
  switch (kind)
  {
    case DepKind::WR: return "WR";
    case DepKind::RW: return "RW";
    case DepKind::WW: return "WW";
  }
  return "?";
}

namespace {

bool
intersects(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
  for (const auto& x : a)
  {
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  }
  return false;
}

}  // namespace

ConflictTable
ConflictTable::build(const MicroservicesAR& m)
{
  ConflictTable ct;
  std::vector<const Statement*> all;
  for (const auto& f : m.monolith.functionalities)
  {
    for (const auto& s : f.statements) all.push_back(&s);
  }
  for (const Statement* a : all)
  {
    for (const Statement* b : all)
    {
      std::array<bool, 3> row{false, false, false};
      if (a->table == b->table)
      {
        const Table& t = m.monolith.schema.table(a->table);
        auto wa = a->written_columns(t);
        auto wb = b->written_columns(t);
        if (a->is_update() && !b->is_update())
        {
          row[static_cast<int>(DepKind::WR)] = intersects(wa, b->observed_columns());
        }
        if (!a->is_update() && b->is_update())
        {
          row[static_cast<int>(DepKind::RW)] = intersects(a->observed_columns(), wb);
        }
        if (a->is_update() && b->is_update())
        {
          row[static_cast<int>(DepKind::WW)] = intersects(wa, wb);
        }
        auto structural = [](const Statement* s) {
          return s->kind == StatementKind::Insert || s->kind == StatementKind::Delete;
        };
        bool phantom = (a->kind == StatementKind::Select && structural(b))
                       || (b->kind == StatementKind::Select && structural(a));
        if (phantom) ct.d_phantom[{a->name, b->name}] = true;
      }
      ct.d_table[{a->name, b->name}] = row;
    }
  }
  return ct;
}

bool
ConflictTable::feasible(const std::string& from, const std::string& to, DepKind kind) const
{
  auto it = d_table.find({from, to});
  return it != d_table.end() && it->second[static_cast<int>(kind)];
}

std::vector<std::pair<std::string, std::string>>
ConflictTable::pairs(DepKind kind) const
{
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, row] : d_table)
  {
    if (row[static_cast<int>(kind)]) out.push_back(key);
  }
  return out;
}

bool
ConflictTable::phantom_capable(const std::string& a, const std::string& b) const
{
  return d_phantom.count({a, b}) > 0;
}

const OpInfo*
CombinationProblem::find_op(const std::string& name) const
{
  for (const auto& o : ops)
  {
    if (o.name == name) return &o;
  }
  return nullptr;
}

const OpInfo&
CombinationProblem::op(const std::string& name) const
{
  const OpInfo* o = find_op(name);
  if (!o) throw std::out_of_range("operation not in problem: " + name);
  return *o;
}

std::string
smt_file_name(const std::vector<std::string>& subset)
{
  std::vector<std::string> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  std::string name = "comb";
  for (const auto& s : sorted) name += "_" + s;
  return name + ".smt2";
}

namespace smt {

std::string
op_constant(int i)
{
  return "o_" + std::to_string(i);
}

std::string
oname_ctor(const std::string& op)
{
  return "op_" + op;
}

std::string
tname_ctor(const std::string& sub_transaction)
{
  return "tx_" + sub_transaction;
}

std::string
fname_ctor(const std::string& functionality)
{
  return "fn_" + functionality;
}

std::string
mname_ctor(std::size_t index)
{
  return "ms_" + std::to_string(index);
}

}  // namespace smt

namespace {

const char*
sort_of(ValueType t)
{
  switch (t)
  {
    case ValueType::Int: return "Int";
    case ValueType::Real: return "Real";
    case ValueType::String: return "Str";
    case ValueType::Boolean: return "Bool";
  }
  return "?";
}

std::string
quoted(const std::string& s)
{
  return "|" + s + "|";
}

std::string
param_fn(const std::string& functionality, const std::string& param)
{
  return quoted("p:" + functionality + "." + param);
}

std::string
var_fn(const std::string& functionality, const std::string& var)
{
  return quoted("v:" + functionality + "." + var);
}

std::string
real_literal(double v)
{
  char buf[128];
  auto res = std::to_chars(buf, buf + sizeof buf, v < 0 ? -v : v, std::chars_format::fixed);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos) s += ".0";
  return v < 0 ? "(- " + s + ")" : s;
}

std::string
int_literal(std::int64_t v)
{
  return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v);
}

std::string
o(int i)
{
  return smt::op_constant(i);
}

std::string
app(const std::string& f, int i)
{
  return "(" + f + " " + o(i) + ")";
}

std::string
app2(const std::string& f, int i, int j)
{
  return "(" + f + " " + o(i) + " " + o(j) + ")";
}

std::string
conj(const std::vector<std::string>& xs)
{
  if (xs.empty()) return "true";
  if (xs.size() == 1) return xs[0];
  std::string s = "(and";
  for (const auto& x : xs) s += " " + x;
  return s + ")";
}

std::string
disj(const std::vector<std::string>& xs)
{
  if (xs.empty()) return "false";
  if (xs.size() == 1) return xs[0];
  std::string s = "(or";
  for (const auto& x : xs) s += " " + x;
  return s + ")";
}

class Builder
{
 public:
  Builder(const MicroservicesAR& m, const ConflictTable& ct, CombinationProblem& p)
      : d_m(m), d_ct(ct), d_p(p)
  {
  }

  void build();

 private:
  const MicroservicesAR& d_m;
  const ConflictTable& d_ct;
  CombinationProblem& d_p;

  std::ostringstream d_decls;
  std::ostringstream d_body;
  std::set<std::string> d_declared;
  std::map<std::string, std::string> d_strings;  // literal -> symbol
  bool d_uses_strings = false;

  /// Column, parameter and variable resolution for one side of a pair.
  struct Env
  {
    const Functionality* functionality = nullptr;
    int constant = 0;
    std::map<std::string, std::string> columns;
  };

  void declare_const(const std::string& name, const std::string& sort)
  {
    if (d_declared.insert(name).second)
    {
      d_decls << "(declare-const " << name << " " << sort << ")\n";
    }
  }

  std::string string_symbol(const std::string& literal)
  {
    d_uses_strings = true;
    auto it = d_strings.find(literal);
    if (it != d_strings.end()) return it->second;
    std::string sym = quoted("str:" + std::to_string(d_strings.size()));
    d_strings.emplace(literal, sym);
    return sym;
  }

  std::string coerce(const std::string& term, ValueType from, ValueType to)
  {
    if (from == ValueType::Int && to == ValueType::Real) return "(to_real " + term + ")";
    return term;
  }

  std::string term(const ExprPtr& e, const Env& env);

  std::string guard(std::initializer_list<int> constants) const
  {
    std::vector<std::string> gs;
    std::set<int> seen;
    for (int i : constants)
    {
      if (i > 3 && seen.insert(i).second) gs.push_back("(<= " + std::to_string(i) + " len)");
    }
    return conj(gs);
  }

  void assert_guarded(std::initializer_list<int> constants, const std::string& body)
  {
    std::string g = guard(constants);
    if (g == "true")
    {
      d_body << "(assert " << body << ")\n";
    }
    else
    {
      d_body << "(assert (=> " << g << " " << body << "))\n";
    }
  }

  std::string side_condition(const OpInfo& op, int i, int j, int self, const char* tag);
  std::string overlap(const OpInfo& a, const OpInfo& b, int i, int j);
  void emit_declarations();
  void emit_per_operation(int i);
  void emit_per_pair(int i, int j);
  void emit_per_triple(int i, int j, int k);
  void emit_cycle();
  void emit_participation();

  std::vector<const OpInfo*> ops_where(bool (*pred)(const OpInfo&)) const
  {
    std::vector<const OpInfo*> out;
    for (const auto& op : d_p.ops)
    {
      if (pred(op)) out.push_back(&op);
    }
    return out;
  }
};

std::string
Builder::term(const ExprPtr& e, const Env& env)
{
  return std::visit(
      [&](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Expr::Literal>)
        {
          switch (e->type)
          {
            case ValueType::Int: return int_literal(std::get<std::int64_t>(n.value));
            case ValueType::Real: return real_literal(std::get<double>(n.value));
            case ValueType::Boolean: return std::get<bool>(n.value) ? "true" : "false";
            case ValueType::String: return string_symbol(std::get<std::string>(n.value));
          }
          return "";
        }
        else if constexpr (std::is_same_v<N, Expr::Column>)
        {
          auto it = env.columns.find(n.name);
          if (it == env.columns.end())
          {
            throw std::logic_error("column without row binding: " + n.name);
          }
          return it->second;
        }
        else if constexpr (std::is_same_v<N, Expr::Param>)
        {
          return "(" + param_fn(env.functionality->name, n.name) + " (origtx " + o(env.constant)
                 + "))";
        }
        else if constexpr (std::is_same_v<N, Expr::Variable>)
        {
          return "(" + var_fn(env.functionality->name, n.name) + " (origtx " + o(env.constant)
                 + "))";
        }
        else if constexpr (std::is_same_v<N, Expr::Unary>)
        {
          std::string x = term(n.operand, env);
          return n.op == UnaryOp::Neg ? "(- " + x + ")" : "(not " + x + ")";
        }
        else
        {
          std::string l = term(n.lhs, env);
          std::string r = term(n.rhs, env);
          ValueType lt = n.lhs->type, rt = n.rhs->type;
          if (is_numeric(lt) && is_numeric(rt) && lt != rt)
          {
            l = coerce(l, lt, ValueType::Real);
            r = coerce(r, rt, ValueType::Real);
          }
          bool real = lt == ValueType::Real || rt == ValueType::Real;
          auto bin = [&](const char* op) { return std::string("(") + op + " " + l + " " + r + ")"; };
          switch (n.op)
          {
            case BinaryOp::Add: return bin("+");
            case BinaryOp::Sub: return bin("-");
            case BinaryOp::Mul: return bin("*");
            case BinaryOp::Div: return real ? bin("/") : bin("div");
            case BinaryOp::Eq: return bin("=");
            case BinaryOp::Ne: return "(not " + bin("=") + ")";
            case BinaryOp::Lt: return bin("<");
            case BinaryOp::Le: return bin("<=");
            case BinaryOp::Gt: return bin(">");
            case BinaryOp::Ge: return bin(">=");
            case BinaryOp::And: return bin("and");
            case BinaryOp::Or: return bin("or");
          }
          return "";
        }
      },
      e->node);
}

/// The row touched by `op` (at constant `self`) has key rk_<i>_<j>: its WHERE
/// clause holds there, or for an insert, its key values name that row.
std::string
Builder::side_condition(const OpInfo& op, int i, int j, int self, const char* tag)
{
  const Functionality& f = *d_m.monolith.find_functionality(op.functionality);
  const Statement& s = f.statements[op.index];
  const Table& t = d_m.monolith.schema.table(s.table);
  std::string pair = std::to_string(i) + "." + std::to_string(j) + ".";
  Env env;
  env.functionality = &f;
  env.constant = self;
  for (const auto& c : t.columns)
  {
    std::string name;
    if (t.is_key_column(c.name))
    {
      name = quoted("rk:" + pair + t.name + "." + c.name);
    }
    else
    {
      name = quoted("nk:" + pair + tag + "." + t.name + "." + c.name);
    }
    env.columns[c.name] = name;
  }
  auto declare_used = [&](const ExprPtr& e) {
    for (const auto& col : collect_refs(e).columns)
    {
      declare_const(env.columns.at(col), sort_of(t.find_column(col)->type));
    }
  };

  if (s.kind == StatementKind::Insert)
  {
    std::vector<std::string> eqs;
    for (const auto& w : s.writes)
    {
      if (!t.is_key_column(w.column)) continue;
      const std::string& rk = env.columns.at(w.column);
      ValueType ct = t.find_column(w.column)->type;
      declare_const(rk, sort_of(ct));
      eqs.push_back("(= " + rk + " " + coerce(term(w.value, env), w.value->type, ct) + ")");
    }
    return conj(eqs);
  }
  if (!s.where) return "true";
  declare_used(s.where);
  return term(s.where, env);
}

std::string
Builder::overlap(const OpInfo& a, const OpInfo& b, int i, int j)
{
  std::vector<std::string> parts = {"(= (oname " + o(i) + ") " + smt::oname_ctor(a.name) + ")",
                                    "(= (oname " + o(j) + ") " + smt::oname_ctor(b.name) + ")"};
  std::string sa = side_condition(a, i, j, i, "a");
  std::string sb = side_condition(b, i, j, j, "b");
  if (sa != "true") parts.push_back(sa);
  if (sb != "true") parts.push_back(sb);
  return conj(parts);
}

void
Builder::emit_declarations()
{
  std::ostringstream& d = d_decls;
  d << "(set-option :produce-models true)\n";
  d << "(set-logic ALL)\n";
  d << "; subset:";
  for (const auto& s : d_p.subset) d << " " << s;
  d << "\n";

  d << "(declare-datatype OName (";
  for (const auto& op : d_p.ops) d << "(" << smt::oname_ctor(op.name) << ")";
  d << "))\n(declare-datatype TName (";
  for (const auto& t : d_p.sub_transactions) d << "(" << smt::tname_ctor(t) << ")";
  d << "))\n(declare-datatype FName (";
  for (const auto& f : d_p.subset) d << "(" << smt::fname_ctor(f) << ")";
  d << "))\n(declare-datatype MName (";
  for (std::size_t k = 0; k < d_p.microservices.size(); ++k) d << "(" << smt::mname_ctor(k) << ")";
  d << "))\n";
  for (std::size_t k = 0; k < d_p.microservices.size(); ++k)
  {
    d << "; " << smt::mname_ctor(k) << " = " << d_p.microservices[k] << "\n";
  }

  d << "(declare-sort O 0)\n(declare-sort T 0)\n(declare-sort F 0)\n";
  bool strings = false;
  for (const auto& f : d_m.monolith.functionalities)
  {
    if (std::find(d_p.subset.begin(), d_p.subset.end(), f.name) == d_p.subset.end()) continue;
    for (const auto& p : f.params) strings = strings || p.type == ValueType::String;
    for (const auto& [v, t] : f.variable_types(d_m.monolith.schema))
    {
      strings = strings || t == ValueType::String;
    }
  }
  for (const auto& t : d_m.monolith.schema.tables)
  {
    for (const auto& c : t.columns) strings = strings || c.type == ValueType::String;
  }
  if (strings) d << "(declare-sort Str 0)\n";

  d << "(declare-fun otime (O) Int)\n"
       "(declare-fun oname (O) OName)\n"
       "(declare-fun opos (OName) Int)\n"
       "(declare-fun parent (O) T)\n"
       "(declare-fun origtx (O) F)\n"
       "(declare-fun tname (T) TName)\n"
       "(declare-fun fname (F) FName)\n"
       "(declare-fun mname (O) MName)\n"
       "(declare-fun is_update (O) Bool)\n";
  for (const char* rel : {"ST", "SOT", "WR", "RW", "WW", "vis", "ar", "D", "X"})
  {
    d << "(declare-fun " << rel << " (O O) Bool)\n";
  }
  d << "(declare-const len Int)\n";
  for (int i = 1; i <= d_p.mcl; ++i) d << "(declare-const " << o(i) << " O)\n";

  for (const auto& f : d_m.monolith.functionalities)
  {
    if (std::find(d_p.subset.begin(), d_p.subset.end(), f.name) == d_p.subset.end()) continue;
    for (const auto& p : f.params)
    {
      d << "(declare-fun " << param_fn(f.name, p.name) << " (F) " << sort_of(p.type) << ")\n";
    }
    for (const auto& [v, t] : f.variable_types(d_m.monolith.schema))
    {
      d << "(declare-fun " << var_fn(f.name, v) << " (F) " << sort_of(t) << ")\n";
    }
  }
}

void
Builder::emit_per_operation(int i)
{
  std::ostringstream& b = d_body;
  b << "; operation " << o(i) << "\n";
  // C4
  std::vector<std::string> updates;
  for (const auto& op : d_p.ops)
  {
    if (op.is_update()) updates.push_back("(= (oname " + o(i) + ") " + smt::oname_ctor(op.name) + ")");
  }
  assert_guarded({i}, "(= (is_update " + o(i) + ") " + disj(updates) + ")");
  // C5-C7 and path conditions
  for (const auto& op : d_p.ops)
  {
    std::size_t ms = std::find(d_p.microservices.begin(), d_p.microservices.end(), op.microservice)
                     - d_p.microservices.begin();
    std::string is_op = "(= (oname " + o(i) + ") " + smt::oname_ctor(op.name) + ")";
    std::vector<std::string> facts = {
        "(= (tname (parent " + o(i) + ")) " + smt::tname_ctor(op.sub_transaction) + ")",
        "(= (fname (origtx " + o(i) + ")) " + smt::fname_ctor(op.functionality) + ")",
        "(= (mname " + o(i) + ") " + smt::mname_ctor(ms) + ")"};
    const Functionality& f = *d_m.monolith.find_functionality(op.functionality);
    const Statement& s = f.statements[op.index];
    if (!is_trivially_true(s.path_condition))
    {
      Env env;
      env.functionality = &f;
      env.constant = i;
      facts.push_back(term(s.path_condition, env));
    }
    assert_guarded({i}, "(=> " + is_op + " " + conj(facts) + ")");
  }
  assert_guarded({i}, "(not " + app2("ar", i, i) + ")");
  assert_guarded({i}, "(not " + app2("vis", i, i) + ")");
}

void
Builder::emit_per_pair(int i, int j)
{
  std::ostringstream& b = d_body;
  b << "; pair " << o(i) << " " << o(j) << "\n";
  std::string pi = app("parent", i), pj = app("parent", j);
  std::string fi = app("origtx", i), fj = app("origtx", j);
  std::string ti = app("otime", i), tj = app("otime", j);
  std::string same_parent = "(= " + pi + " " + pj + ")";
  std::string same_tx = "(= " + fi + " " + fj + ")";
  std::string same_ms = "(= " + app("mname", i) + " " + app("mname", j) + ")";

  assert_guarded({i, j}, "(=> " + app2("WR", i, j) + " " + app2("vis", i, j) + ")");          // C1
  assert_guarded({i, j}, "(=> " + app2("WW", i, j) + " " + app2("ar", i, j) + ")");           // C2
  assert_guarded({i, j}, "(=> " + app2("RW", i, j) + " (not " + app2("vis", j, i) + "))");    // C3
  assert_guarded({i, j}, "(=> " + app2("ar", i, j) + " (< " + ti + " " + tj + "))");          // C8
  assert_guarded({i, j}, "(=> (and (or " + same_parent + " " + same_tx + ") (< (opos (oname "
                             + o(i) + ")) (opos (oname " + o(j) + ")))) (< " + ti + " " + tj
                             + "))");  // C9
  assert_guarded({i, j}, "(=> " + app2("D", i, j) + " (and (not (or " + app2("ST", i, j) + " "
                             + app2("SOT", i, j) + ")) (or " + app2("WW", i, j) + " "
                             + app2("WR", i, j) + " " + app2("RW", i, j) + ")))");  // C10
  assert_guarded({i, j}, "(=> " + app2("X", i, j) + " (or " + app2("ST", i, j) + " "
                             + app2("SOT", i, j) + " " + app2("D", i, j) + "))");  // C11
  assert_guarded({i, j}, "(=> (and " + app2("ar", i, j) + " " + same_ms + ") " + app2("vis", i, j)
                             + ")");  // C14
  assert_guarded({i, j}, "(= " + same_parent + " " + app2("ST", i, j) + ")");  // C15
  assert_guarded({i, j}, "(= (and " + same_tx + " (not " + same_parent + ")) " + app2("SOT", i, j)
                             + ")");  // C16
  // Visibility implies arbitration; same-service operations are totally ordered.
  assert_guarded({i, j}, "(=> " + app2("vis", i, j) + " " + app2("ar", i, j) + ")");
  if (i < j)
  {
    assert_guarded({i, j}, "(=> " + same_ms + " (or " + app2("ar", i, j) + " " + app2("ar", j, i)
                               + "))");
    // Instance structure: a sub-transaction instance lies in one functionality
    // instance, which runs each sub-transaction and each statement once.
    assert_guarded({i, j}, "(=> " + same_parent + " " + same_tx + ")");
    assert_guarded({i, j}, "(=> (and " + same_tx + " (= (tname " + pi + ") (tname " + pj + "))) "
                               + same_parent + ")");
    assert_guarded({i, j}, "(not (and (= (oname " + o(i) + ") (oname " + o(j) + ")) " + same_tx
                               + "))");
    assert_guarded({i, j}, "(not (= " + ti + " " + tj + "))");
  }

  // Dependency feasibility.
  for (DepKind kind : {DepKind::WR, DepKind::RW, DepKind::WW})
  {
    std::vector<std::string> options;
    for (const auto& a : d_p.ops)
    {
      for (const auto& c : d_p.ops)
      {
        if (d_ct.feasible(a.name, c.name, kind)) options.push_back(overlap(a, c, i, j));
      }
    }
    assert_guarded({i, j}, "(=> " + app2(to_string(kind), i, j) + " " + disj(options) + ")");
  }
}

void
Builder::emit_per_triple(int i, int j, int k)
{
  std::string pi = app("parent", i), pj = app("parent", j), pk = app("parent", k);
  std::string other = "(not (= " + pk + " " + pi + "))";
  std::string same_ms = "(= " + app("mname", i) + " " + app("mname", k) + ")";
  // Sub-transaction instances execute atomically.
  assert_guarded({i, j, k}, "(not (and (= " + pi + " " + pj + ") " + other + " (< " + app("otime", i)
                                + " " + app("otime", k) + ") (< " + app("otime", k) + " "
                                + app("otime", j) + ")))");
  // C12, C13
  assert_guarded({i, j, k}, "(=> (and " + app2("ST", i, j) + " " + app2("vis", i, k) + " " + same_ms
                                + " " + other + ") " + app2("vis", j, k) + ")");
  assert_guarded({i, j, k}, "(=> (and " + app2("ST", i, j) + " " + app2("vis", k, i) + " " + same_ms
                                + " " + other + ") " + app2("vis", k, j) + ")");
}

void
Builder::emit_cycle()
{
  std::vector<std::string> shapes;
  for (int len = 3; len <= d_p.mcl; ++len)
  {
    std::vector<std::string> parts = {"(= len " + std::to_string(len) + ")",
                                      "(or " + app2("ST", 1, 2) + " " + app2("SOT", 1, 2) + ")",
                                      app2("D", 2, 3)};
    for (int i = 3; i < len; ++i) parts.push_back(app2("X", i, i + 1));
    parts.push_back(app2("D", len, 1));
    shapes.push_back(conj(parts));
  }
  d_body << "; C17\n(assert " << disj(shapes) << ")\n";
}

void
Builder::emit_participation()
{
  d_body << "; participation\n";
  for (const auto& f : d_p.subset)
  {
    std::vector<std::string> any;
    for (int i = 1; i <= d_p.mcl; ++i)
    {
      std::string is_f = "(= (fname (origtx " + o(i) + ")) " + smt::fname_ctor(f) + ")";
      std::string g = guard({i});
      any.push_back(g == "true" ? is_f : "(and " + g + " " + is_f + ")");
    }
    d_body << "(assert " << disj(any) << ")\n";
  }
}

void
Builder::build()
{
  emit_declarations();
  d_body << "(assert (distinct";
  for (int i = 1; i <= d_p.mcl; ++i) d_body << " " << o(i);
  d_body << "))\n(assert (and (<= 3 len) (<= len " << d_p.mcl << ")))\n";
  for (const auto& op : d_p.ops)
  {
    d_body << "(assert (= (opos " << smt::oname_ctor(op.name) << ") " << op.index << "))\n";
  }
  for (int i = 1; i <= d_p.mcl; ++i) emit_per_operation(i);
  for (int i = 1; i <= d_p.mcl; ++i)
  {
    for (int j = 1; j <= d_p.mcl; ++j)
    {
      if (i != j) emit_per_pair(i, j);
    }
  }
  d_body << "; triples\n";
  for (int i = 1; i <= d_p.mcl; ++i)
  {
    for (int j = 1; j <= d_p.mcl; ++j)
    {
      for (int k = 1; k <= d_p.mcl; ++k)
      {
        if (i != j && j != k && i != k) emit_per_triple(i, j, k);
      }
    }
  }
  emit_cycle();
  if (d_p.participation) emit_participation();

  if (d_uses_strings && d_strings.size() > 1)
  {
    d_body << "(assert (distinct";
    for (const auto& [lit, sym] : d_strings) d_body << " " << sym;
    d_body << "))\n";
  }
  for (const auto& [lit, sym] : d_strings)
  {
    d_decls << "(declare-const " << sym << " Str) ; '" << lit << "'\n";
  }
  d_p.script = d_decls.str() + d_body.str();
}

}  // namespace

CombinationProblem
encode_combination(const MicroservicesAR& m,
                   const ConflictTable& ct,
                   std::vector<std::string> subset,
                   int mcl,
                   bool participation)
{
  if (mcl < 3) throw std::invalid_argument("mcl must be at least 3");
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  for (const auto& f : subset)
  {
    if (!m.monolith.find_functionality(f))
    {
      throw std::invalid_argument("unknown functionality '" + f + "'");
    }
  }

  CombinationProblem p;
  p.subset = subset;
  p.mcl = mcl;
  p.participation = participation;
  for (const auto& c : m.decomposition.clusters) p.microservices.push_back(c.microservice);

  bool empty_member = false;
  for (const auto& f : m.monolith.functionalities)
  {
    if (!std::binary_search(subset.begin(), subset.end(), f.name)) continue;
    if (f.statements.empty()) empty_member = true;
    for (const SubTransaction* t : m.sub_transactions_of(f.name))
    {
      p.sub_transactions.push_back(t->name);
      for (std::size_t si : t->statements)
      {
        const Statement& s = f.statements[si];
        p.ops.push_back({s.name, f.name, t->name, t->microservice, s.table, s.kind, si});
      }
    }
  }

  if (p.ops.empty() || p.subset.empty() || (participation && empty_member))
  {
    // No operation can take part in a cycle.
    p.script = "(set-option :produce-models true)\n(set-logic ALL)\n; no operations\n(assert false)\n";
    return p;
  }

  Builder(m, ct, p).build();
  return p;
}

}  // namespace mad
