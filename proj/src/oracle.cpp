#include "mad/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace mad {

namespace {

using Mask = std::uint64_t;
constexpr std::size_t max_instances = 64;

Mask
bit(std::size_t i)
{
  return Mask{1} << i;
}

/* -------------------------------------------------------------------------- */
/* Values                                                                     */
/* -------------------------------------------------------------------------- */

std::vector<Value>
domain_of(ValueType t, const OracleConfig& cfg)
{
  std::vector<Value> d;
  switch (t)
  {
    case ValueType::Int:
      for (int v = cfg.int_min; v <= cfg.int_max; ++v) d.emplace_back(std::int64_t{v});
      break;
    case ValueType::Real:
      for (int v = cfg.int_min; v <= cfg.int_max; ++v) d.emplace_back(static_cast<double>(v));
      break;
    case ValueType::String:
      for (int v = 0; v < cfg.strings; ++v) d.emplace_back("s" + std::to_string(v));
      break;
    case ValueType::Boolean:
      d.emplace_back(false);
      d.emplace_back(true);
      break;
  }
  if (d.empty()) throw std::invalid_argument("empty oracle domain");
  return d;
}

double
as_double(const Value& v)
{
  if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (auto r = std::get_if<double>(&v)) return *r;
  throw std::logic_error("numeric value expected");
}

bool
values_equal(const Value& a, const Value& b)
{
  bool an = std::holds_alternative<std::int64_t>(a) || std::holds_alternative<double>(a);
  bool bn = std::holds_alternative<std::int64_t>(b) || std::holds_alternative<double>(b);
  if (an && bn)
  {
    if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b))
    {
      return std::get<std::int64_t>(a) == std::get<std::int64_t>(b);
    }
    return as_double(a) == as_double(b);
  }
  return a == b;
}

/// Converts an assigned value to the column type (Int into Real columns).
Value
coerce(const Value& v, ValueType t)
{
  if (t == ValueType::Real && std::holds_alternative<std::int64_t>(v)) return static_cast<double>(std::get<std::int64_t>(v));
  return v;
}

struct EvalContext
{
  const Functionality* functionality;
  const std::vector<Value>* params;
  const std::map<std::string, Value>* vars;
  const Table* table = nullptr;
  const Value* row = nullptr;  // columns of one slot, in schema order
};

Value
eval(const ExprPtr& e, const EvalContext& c)
{
  return std::visit(
      [&](const auto& n) -> Value {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Expr::Literal>)
        {
          return n.value;
        }
        else if constexpr (std::is_same_v<N, Expr::Column>)
        {
          if (!c.table || !c.row) throw std::logic_error("column outside a row context");
          for (std::size_t i = 0; i < c.table->columns.size(); ++i)
          {
            if (c.table->columns[i].name == n.name) return c.row[i];
          }
          throw std::logic_error("unknown column " + n.name);
        }
        else if constexpr (std::is_same_v<N, Expr::Param>)
        {
          const auto& ps = c.functionality->params;
          for (std::size_t i = 0; i < ps.size(); ++i)
          {
            if (ps[i].name == n.name) return (*c.params)[i];
          }
          throw std::logic_error("unknown parameter " + n.name);
        }
        else if constexpr (std::is_same_v<N, Expr::Variable>)
        {
          auto it = c.vars->find(n.name);
          if (it == c.vars->end()) throw std::logic_error("unbound variable " + n.name);
          return it->second;
        }
        else if constexpr (std::is_same_v<N, Expr::Unary>)
        {
          Value v = eval(n.operand, c);
          if (n.op == UnaryOp::Not) return !std::get<bool>(v);
          if (auto i = std::get_if<std::int64_t>(&v)) return -*i;
          return -std::get<double>(v);
        }
        else
        {
          if (n.op == BinaryOp::And) return std::get<bool>(eval(n.lhs, c)) && std::get<bool>(eval(n.rhs, c));
          if (n.op == BinaryOp::Or) return std::get<bool>(eval(n.lhs, c)) || std::get<bool>(eval(n.rhs, c));
          Value a = eval(n.lhs, c), b = eval(n.rhs, c);
          switch (n.op)
          {
            case BinaryOp::Eq: return values_equal(a, b);
            case BinaryOp::Ne: return !values_equal(a, b);
            case BinaryOp::Lt: return as_double(a) < as_double(b);
            case BinaryOp::Le: return as_double(a) <= as_double(b);
            case BinaryOp::Gt: return as_double(a) > as_double(b);
            case BinaryOp::Ge: return as_double(a) >= as_double(b);
            default: break;
          }
          if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b))
          {
            std::int64_t x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
            switch (n.op)
            {
              case BinaryOp::Add: return x + y;
              case BinaryOp::Sub: return x - y;
              case BinaryOp::Mul: return x * y;
              case BinaryOp::Div: return y == 0 ? std::int64_t{0} : x / y;
              default: break;
            }
          }
          double x = as_double(a), y = as_double(b);
          switch (n.op)
          {
            case BinaryOp::Add: return x + y;
            case BinaryOp::Sub: return x - y;
            case BinaryOp::Mul: return x * y;
            case BinaryOp::Div: return y == 0 ? 0.0 : x / y;
            default: break;
          }
          throw std::logic_error("unsupported operator");
        }
      },
      e->node);
}

bool
holds(const ExprPtr& e, const EvalContext& c)
{
  return !e || std::get<bool>(eval(e, c));
}

void
append_value(std::string& out, const Value& v)
{
  out.push_back(static_cast<char>(v.index()));
  std::visit(
      [&](const auto& x) {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, std::string>)
        {
          out += x;
          out.push_back('\0');
        }
        else
        {
          char buf[sizeof(X)];
          std::memcpy(buf, &x, sizeof(X));
          out.append(buf, sizeof(X));
        }
      },
      v);
}

template <typename T>
void
append_raw(std::string& out, const T& x)
{
  char buf[sizeof(T)];
  std::memcpy(buf, &x, sizeof(T));
  out.append(buf, sizeof(T));
}

/* -------------------------------------------------------------------------- */
/* Program model                                                              */
/* -------------------------------------------------------------------------- */

struct TableLayout
{
  const Table* table;
  std::size_t base;  // first cell
  std::size_t width;  // 1 + columns
};

struct InstanceSpec
{
  const Functionality* functionality;
  std::string label;
  std::vector<const SubTransaction*> steps;
  /// Parameter valuations the search explores.
  std::vector<std::vector<Value>> valuations;
  /// Position of the functionality in the subset.
  std::size_t group = 0;
};

struct Program
{
  const MicroservicesAR* m;
  OracleConfig cfg;
  std::vector<TableLayout> tables;
  std::map<std::string, std::size_t> table_index;
  std::size_t cells = 0;
  std::vector<InstanceSpec> instances;
  Mask all_groups = 0;

  const TableLayout& layout(const std::string& table) const { return tables[table_index.at(table)]; }

  std::string cell_name(std::size_t cell) const
  {
    for (const auto& t : tables)
    {
      if (cell >= t.base && cell < t.base + t.width * static_cast<std::size_t>(cfg.rows))
      {
        std::size_t slot = (cell - t.base) / t.width, col = (cell - t.base) % t.width;
        return t.table->name + "[" + std::to_string(slot) + "]."
               + (col == 0 ? std::string("<present>") : t.table->columns[col - 1].name);
      }
    }
    return "?";
  }
};

Program
make_program(const MicroservicesAR& m, const OracleConfig& cfg)
{
  if (cfg.rows < 1) throw std::invalid_argument("oracle needs at least one row per table");
  Program p;
  p.m = &m;
  p.cfg = cfg;
  for (const auto& t : m.monolith.schema.tables)
  {
    std::size_t width = 1 + t.columns.size();
    p.table_index[t.name] = p.tables.size();
    p.tables.push_back({&t, p.cells, width});
    p.cells += width * static_cast<std::size_t>(cfg.rows);
    for (const auto& key : t.primary_key)
    {
      if (domain_of(t.find_column(key)->type, cfg).size() < static_cast<std::size_t>(cfg.rows))
      {
        throw std::invalid_argument("oracle domain too small for " + std::to_string(cfg.rows) + " rows of "
                                    + t.name);
      }
    }
  }
  return p;
}

/// Parameters, variables and columns that can influence which cells a
/// statement touches or whether it runs.
struct Relevance
{
  std::set<std::pair<std::string, std::string>> params;   // (functionality, param)
  std::set<std::pair<std::string, std::string>> columns;  // (table, column)
};

Relevance
relevance(const MicroservicesAR& m, const std::vector<const Functionality*>& fns)
{
  Relevance r;
  std::set<std::pair<std::string, std::string>> vars;
  bool changed = true;
  auto add = [&](auto& set, std::string a, std::string b) {
    if (set.emplace(std::move(a), std::move(b)).second) changed = true;
  };
  auto add_refs = [&](const Functionality& f, const Statement& s, const ExprPtr& e) {
    if (!e) return;
    ExprRefs refs = collect_refs(e);
    for (const auto& p : refs.params) add(r.params, f.name, p);
    for (const auto& v : refs.variables) add(vars, f.name, v);
    for (const auto& c : refs.columns) add(r.columns, s.table, c);
  };
  while (changed)
  {
    changed = false;
    for (const Functionality* f : fns)
    {
      for (const Statement& s : f->statements)
      {
        add_refs(*f, s, s.where);
        add_refs(*f, s, s.path_condition);
        const Table& t = m.monolith.schema.table(s.table);
        for (const auto& w : s.writes)
        {
          bool key = s.kind == StatementKind::Insert && t.is_key_column(w.column);
          if (key || r.columns.count({s.table, w.column})) add_refs(*f, s, w.value);
        }
        for (const auto& b : s.bindings)
        {
          if (vars.count({f->name, b.variable})) add(r.columns, s.table, b.column);
        }
      }
    }
  }
  return r;
}

std::vector<std::vector<Value>>
valuations(const Functionality& f, const Relevance& rel, const OracleConfig& cfg)
{
  std::vector<std::vector<Value>> out = {{}};
  for (const auto& p : f.params)
  {
    auto d = domain_of(p.type, cfg);
    if (!rel.params.count({f.name, p.name})) d.resize(1);
    std::vector<std::vector<Value>> next;
    for (const auto& prefix : out)
    {
      for (const auto& v : d)
      {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    }
    out = std::move(next);
  }
  return out;
}

/* -------------------------------------------------------------------------- */
/* Execution state                                                            */
/* -------------------------------------------------------------------------- */

struct State
{
  std::vector<Value> cells;
  std::vector<Mask> readers;
  std::vector<Mask> writers;
  std::vector<Mask> succ;
  std::vector<int> pos;
  /// Index into the instance's valuations; -1 until the instance starts.
  std::vector<int> valuation;
  std::vector<std::map<std::string, Value>> vars;
  bool cyclic = false;

  std::string key() const
  {
    std::string k;
    for (const auto& v : cells) append_value(k, v);
    for (auto m : readers) append_raw(k, m);
    for (auto m : writers) append_raw(k, m);
    for (auto m : succ) append_raw(k, m);
    for (auto p : pos) append_raw(k, p);
    for (auto v : valuation) append_raw(k, v);
    for (const auto& vs : vars)
    {
      for (const auto& [name, v] : vs)
      {
        k += name;
        k.push_back('\0');
        append_value(k, v);
      }
      k.push_back('\1');
    }
    return k;
  }
};

/// Records footprints and labeled edges during a replay.
struct Trace
{
  std::vector<std::string> reads;
  std::vector<std::string> writes;
  std::vector<InstanceEdge> edges;
};

class Executor
{
 public:
  explicit Executor(const Program& p) : d_p(p) {}

  State initial(const std::vector<Value>& cells) const
  {
    State s;
    s.cells = cells;
    s.readers.assign(d_p.cells, 0);
    s.writers.assign(d_p.cells, 0);
    s.succ.assign(d_p.instances.size(), 0);
    s.pos.assign(d_p.instances.size(), 0);
    s.valuation.assign(d_p.instances.size(), -1);
    s.vars.resize(d_p.instances.size());
    return s;
  }

  /// Runs the next sub-transaction of instance `i`.
  void step(State& s, std::size_t i, Trace* trace) const
  {
    const InstanceSpec& spec = d_p.instances[i];
    const SubTransaction& st = *spec.steps[static_cast<std::size_t>(s.pos[i])];
    const std::vector<Value>& params = spec.valuations[static_cast<std::size_t>(s.valuation[i])];
    for (std::size_t idx : st.statements)
    {
      run(s, i, spec.functionality->statements[idx], params, trace);
    }
    ++s.pos[i];
  }

 private:
  void access(State& s, std::size_t i, std::size_t cell, bool write, Trace* trace) const
  {
    Mask earlier = (write ? (s.readers[cell] | s.writers[cell]) : s.writers[cell]) & ~bit(i);
    for (std::size_t j = 0; earlier; ++j)
    {
      if (!(earlier & bit(j))) continue;
      earlier &= ~bit(j);
      if (trace)
      {
        auto label = [&](const char* kind) {
          trace->edges.push_back({d_p.instances[j].label, d_p.instances[i].label, kind, d_p.cell_name(cell)});
        };
        if (write && (s.writers[cell] & bit(j))) label("WW");
        if (write && (s.readers[cell] & bit(j))) label("RW");
        if (!write) label("WR");
      }
      add_edge(s, j, i);
    }
    (write ? s.writers : s.readers)[cell] |= bit(i);
    if (trace) (write ? trace->writes : trace->reads).push_back(d_p.cell_name(cell));
  }

  void add_edge(State& s, std::size_t from, std::size_t to) const
  {
    if (s.succ[from] & bit(to)) return;
    s.succ[from] |= bit(to);
    // A cycle exists iff `from` is reachable from `to`.
    Mask seen = bit(to), frontier = bit(to);
    while (frontier)
    {
      Mask next = 0;
      for (std::size_t k = 0; frontier; ++k)
      {
        if (!(frontier & bit(k))) continue;
        frontier &= ~bit(k);
        next |= s.succ[k];
      }
      if (next & bit(from))
      {
        if (covers(s, from)) s.cyclic = true;
        return;
      }
      frontier = next & ~seen;
      seen |= next;
    }
  }

  /// The strongly connected component of `v` spans every functionality of
  /// the subset (always true without participation).
  bool covers(const State& s, std::size_t v) const
  {
    if (!d_p.cfg.participation) return true;
    const std::size_t n = d_p.instances.size();
    Mask forward = bit(v), frontier = bit(v);
    while (frontier)
    {
      Mask next = 0;
      for (std::size_t k = 0; k < n; ++k)
      {
        if (frontier & bit(k)) next |= s.succ[k];
      }
      frontier = next & ~forward;
      forward |= next;
    }
    Mask backward = bit(v);
    for (bool grew = true; grew;)
    {
      grew = false;
      for (std::size_t k = 0; k < n; ++k)
      {
        if (!(backward & bit(k)) && (s.succ[k] & backward))
        {
          backward |= bit(k);
          grew = true;
        }
      }
    }
    Mask scc = forward & backward, fns = 0;
    for (std::size_t k = 0; k < n; ++k)
    {
      if (scc & bit(k)) fns |= bit(d_p.instances[k].group);
    }
    return fns == d_p.all_groups;
  }

  void run(State& s, std::size_t i, const Statement& st, const std::vector<Value>& params, Trace* trace) const
  {
    const InstanceSpec& spec = d_p.instances[i];
    EvalContext ctx{spec.functionality, &params, &s.vars[i]};
    if (!holds(st.path_condition, ctx)) return;
    const TableLayout& t = d_p.layout(st.table);
    const Table& table = *t.table;
    ctx.table = &table;
    auto col_index = [&](const std::string& c) {
      for (std::size_t k = 0; k < table.columns.size(); ++k)
      {
        if (table.columns[k].name == c) return k;
      }
      throw std::logic_error("unknown column " + c);
    };
    const std::size_t rows = static_cast<std::size_t>(d_p.cfg.rows);

    switch (st.kind)
    {
      case StatementKind::Select:
      {
        std::vector<std::string> observed = st.observed_columns();
        bool bound = false;
        for (std::size_t r = 0; r < rows; ++r)
        {
          std::size_t base = t.base + r * t.width;
          access(s, i, base, false, trace);
          if (!std::get<bool>(s.cells[base])) continue;
          ctx.row = &s.cells[base + 1];
          if (!holds(st.where, ctx)) continue;
          for (const auto& c : observed) access(s, i, base + 1 + col_index(c), false, trace);
          if (!bound)
          {
            for (const auto& b : st.bindings) s.vars[i][b.variable] = s.cells[base + 1 + col_index(b.column)];
            bound = true;
          }
        }
        if (!bound)
        {
          for (const auto& b : st.bindings)
          {
            s.vars[i][b.variable] = domain_of(table.find_column(b.column)->type, d_p.cfg).front();
          }
        }
        break;
      }
      case StatementKind::Update:
      {
        for (std::size_t r = 0; r < rows; ++r)
        {
          std::size_t base = t.base + r * t.width;
          if (!std::get<bool>(s.cells[base])) continue;
          ctx.row = &s.cells[base + 1];
          if (!holds(st.where, ctx)) continue;
          std::vector<std::pair<std::size_t, Value>> out;
          for (const auto& w : st.writes)
          {
            std::size_t k = col_index(w.column);
            out.emplace_back(k, coerce(eval(w.value, ctx), table.columns[k].type));
          }
          for (auto& [k, v] : out)
          {
            access(s, i, base + 1 + k, true, trace);
            s.cells[base + 1 + k] = std::move(v);
          }
        }
        break;
      }
      case StatementKind::Delete:
      {
        for (std::size_t r = 0; r < rows; ++r)
        {
          std::size_t base = t.base + r * t.width;
          if (!std::get<bool>(s.cells[base])) continue;
          ctx.row = &s.cells[base + 1];
          if (!holds(st.where, ctx)) continue;
          for (std::size_t k = 0; k < t.width; ++k) access(s, i, base + k, true, trace);
          s.cells[base] = false;
        }
        break;
      }
      case StatementKind::Insert:
      {
        std::vector<Value> row(table.columns.size());
        for (std::size_t k = 0; k < table.columns.size(); ++k)
        {
          row[k] = domain_of(table.columns[k].type, d_p.cfg).front();
        }
        for (const auto& w : st.writes)
        {
          std::size_t k = col_index(w.column);
          row[k] = coerce(eval(w.value, ctx), table.columns[k].type);
        }
        for (std::size_t r = 0; r < rows; ++r)
        {
          std::size_t base = t.base + r * t.width;
          bool match = true;
          for (const auto& key : table.primary_key)
          {
            std::size_t k = col_index(key);
            if (!values_equal(s.cells[base + 1 + k], row[k])) match = false;
          }
          if (!match) continue;
          for (std::size_t k = 0; k < t.width; ++k) access(s, i, base + k, true, trace);
          s.cells[base] = true;
          for (std::size_t k = 0; k < row.size(); ++k) s.cells[base + 1 + k] = row[k];
          break;
        }
        break;
      }
    }
  }

  const Program& d_p;
};

/// Initial cell vector: slot keys from the key domain, non-key columns and
/// presence from `choice` where enumerated, else defaults.
std::vector<Value>
default_cells(const Program& p)
{
  std::vector<Value> cells(p.cells);
  for (const auto& t : p.tables)
  {
    for (int r = 0; r < p.cfg.rows; ++r)
    {
      std::size_t base = t.base + static_cast<std::size_t>(r) * t.width;
      cells[base] = true;
      for (std::size_t k = 0; k < t.table->columns.size(); ++k)
      {
        const Column& c = t.table->columns[k];
        auto d = domain_of(c.type, p.cfg);
        cells[base + 1 + k] = t.table->is_key_column(c.name) ? d[static_cast<std::size_t>(r)] : d.front();
      }
    }
  }
  return cells;
}

/// Every initial database the search starts from.
std::vector<std::vector<Value>>
initial_databases(const Program& p, const Relevance& rel, const std::set<std::string>& churned_tables)
{
  std::vector<std::vector<Value>> out = {default_cells(p)};
  for (const auto& t : p.tables)
  {
    for (int r = 0; r < p.cfg.rows; ++r)
    {
      std::size_t base = t.base + static_cast<std::size_t>(r) * t.width;
      std::vector<std::pair<std::size_t, std::vector<Value>>> choices;
      if (churned_tables.count(t.table->name)) choices.push_back({base, {true, false}});
      for (std::size_t k = 0; k < t.table->columns.size(); ++k)
      {
        const Column& c = t.table->columns[k];
        if (t.table->is_key_column(c.name) || !rel.columns.count({t.table->name, c.name})) continue;
        choices.push_back({base + 1 + k, domain_of(c.type, p.cfg)});
      }
      for (const auto& [cell, values] : choices)
      {
        std::vector<std::vector<Value>> next;
        for (const auto& db : out)
        {
          for (const auto& v : values)
          {
            next.push_back(db);
            next.back()[cell] = v;
          }
        }
        out = std::move(next);
      }
    }
  }
  return out;
}

std::string
describe_valuation(const InstanceSpec& spec, const std::vector<Value>& v)
{
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k)
  {
    out += (k ? ", " : "") + spec.functionality->params[k].name + "=" + to_string(v[k]);
  }
  return "{" + out + "}";
}

class Search
{
 public:
  Search(const Program& p) : d_p(p), d_exec(p) {}

  bool run(const std::vector<Value>& cells, OracleVerdict& v)
  {
    d_verdict = &v;
    State s = d_exec.initial(cells);
    d_path.clear();
    d_initial = cells;
    return dfs(s);
  }

 private:
  bool dfs(const State& s)
  {
    if (d_verdict->partial) return false;
    if (!d_seen.insert(s.key()).second) return false;
    if (++d_verdict->states > d_p.cfg.state_bound)
    {
      d_verdict->partial = true;
      return false;
    }
    for (std::size_t i = 0; i < d_p.instances.size(); ++i)
    {
      const InstanceSpec& spec = d_p.instances[i];
      if (static_cast<std::size_t>(s.pos[i]) >= spec.steps.size()) continue;
      // Instances of one functionality are interchangeable; start them in order.
      if (s.valuation[i] < 0 && i > 0 && d_p.instances[i - 1].functionality == spec.functionality
          && s.valuation[i - 1] < 0)
      {
        continue;
      }
      std::size_t choices = s.valuation[i] < 0 ? spec.valuations.size() : 1;
      for (std::size_t c = 0; c < choices; ++c)
      {
        State next = s;
        if (next.valuation[i] < 0) next.valuation[i] = static_cast<int>(c);
        d_exec.step(next, i, nullptr);
        d_path.emplace_back(i, next.valuation[i]);
        if (next.cyclic)
        {
          report(next);
          return true;
        }
        if (dfs(next)) return true;
        d_path.pop_back();
      }
    }
    return false;
  }

  void report(const State&)
  {
    d_verdict->anomaly = true;
    State s = d_exec.initial(d_initial);
    Trace trace;
    for (auto [i, val] : d_path)
    {
      const InstanceSpec& spec = d_p.instances[i];
      if (s.valuation[i] < 0) s.valuation[i] = val;
      std::string step = spec.label + ":" + spec.steps[static_cast<std::size_t>(s.pos[i])]->name + " "
                         + describe_valuation(spec, spec.valuations[static_cast<std::size_t>(val)]);
      d_exec.step(s, i, &trace);
      d_verdict->schedule.push_back(step);
    }
    d_verdict->edges = std::move(trace.edges);
  }

  const Program& d_p;
  Executor d_exec;
  std::unordered_set<std::string> d_seen;
  std::vector<std::pair<std::size_t, int>> d_path;
  std::vector<Value> d_initial;
  OracleVerdict* d_verdict = nullptr;
};

OracleVerdict
search(const MicroservicesAR& m, const std::vector<std::string>& subset, const OracleConfig& cfg)
{
  Program p = make_program(m, cfg);
  std::vector<const Functionality*> fns;
  std::set<std::string> churned;
  for (const auto& name : subset)
  {
    const Functionality* f = m.monolith.find_functionality(name);
    if (!f) throw std::invalid_argument("unknown functionality '" + name + "'");
    if (std::find(fns.begin(), fns.end(), f) != fns.end()) continue;
    fns.push_back(f);
    for (const auto& s : f->statements)
    {
      if (s.kind == StatementKind::Insert || s.kind == StatementKind::Delete) churned.insert(s.table);
    }
  }
  Relevance rel = relevance(m, fns);
  for (const Functionality* const& f : fns)
  {
    int count = fns.size() == 1 ? cfg.singleton_instances : cfg.instances;
    if (auto it = cfg.multiplicity.find(f->name); it != cfg.multiplicity.end()) count = it->second;
    auto vals = valuations(*f, rel, cfg);
    auto steps = m.sub_transactions_of(f->name);
    std::size_t group = static_cast<std::size_t>(&f - fns.data());
    p.all_groups |= bit(group);
    for (int k = 1; k <= count; ++k)
    {
      p.instances.push_back({f, f->name + "#" + std::to_string(k), steps, vals, group});
    }
  }
  if (p.instances.size() > max_instances) throw std::invalid_argument("too many oracle instances");

  OracleVerdict v;
  v.instances = p.instances.size();
  Search s(p);
  for (const auto& db : initial_databases(p, rel, churned))
  {
    if (s.run(db, v) || v.partial) break;
  }
  if (v.partial) v.notes.push_back("state bound reached; verdict is best-effort");
  return v;
}

}  // namespace

OracleVerdict
oracle_has_anomaly(const MicroservicesAR& m, const std::vector<std::string>& subset, const OracleConfig& cfg)
{
  return search(m, subset, cfg);
}

OracleVerdict
realize_witness(const MicroservicesAR& m, const CycleWitness& w, OracleConfig cfg)
{
  std::map<std::string, std::set<int>> instances;
  for (const auto& n : w.nodes) instances[n.functionality].insert(n.origtx);
  std::vector<std::string> subset;
  for (const auto& [f, ids] : instances)
  {
    subset.push_back(f);
    cfg.multiplicity[f] = static_cast<int>(ids.size());
  }
  return search(m, subset, cfg);
}

ExecutedSchedule
execute_schedule(const MicroservicesAR& m,
                 const std::vector<ScheduleInstance>& instances,
                 const std::vector<std::size_t>& order,
                 const OracleConfig& cfg,
                 const std::map<std::string, Value>& initial)
{
  OracleConfig plain = cfg;
  plain.participation = false;
  Program p = make_program(m, plain);
  std::map<std::string, int> counts;
  for (const auto& inst : instances)
  {
    const Functionality* f = m.monolith.find_functionality(inst.functionality);
    if (!f) throw std::invalid_argument("unknown functionality '" + inst.functionality + "'");
    std::vector<Value> vals;
    for (const auto& param : f->params)
    {
      auto it = inst.params.find(param.name);
      vals.push_back(it != inst.params.end() ? coerce(it->second, param.type) : domain_of(param.type, cfg).front());
    }
    p.instances.push_back(
        {f, f->name + "#" + std::to_string(++counts[f->name]), m.sub_transactions_of(f->name), {vals}, 0});
  }
  if (p.instances.size() > max_instances) throw std::invalid_argument("too many instances");

  std::vector<Value> cells = default_cells(p);
  for (const auto& [name, value] : initial)
  {
    auto dot = name.find('.');
    if (dot == std::string::npos) throw std::invalid_argument("initial value key must be Table.column");
    const TableLayout& t = p.layout(name.substr(0, dot));
    bool found = false;
    for (std::size_t k = 0; k < t.table->columns.size(); ++k)
    {
      if (t.table->columns[k].name != name.substr(dot + 1)) continue;
      found = true;
      for (int r = 0; r < cfg.rows; ++r) cells[t.base + static_cast<std::size_t>(r) * t.width + 1 + k] = coerce(value, t.table->columns[k].type);
    }
    if (!found) throw std::invalid_argument("unknown column " + name);
  }

  Executor exec(p);
  State s = exec.initial(cells);
  for (std::size_t i = 0; i < p.instances.size(); ++i) s.valuation[i] = 0;
  ExecutedSchedule out;
  for (const auto& inst : p.instances) out.instances.push_back(inst.label);
  for (std::size_t i : order)
  {
    if (i >= p.instances.size() || static_cast<std::size_t>(s.pos[i]) >= p.instances[i].steps.size())
    {
      throw std::invalid_argument("schedule is not an interleaving of the instances");
    }
    Trace trace;
    out.steps.push_back(p.instances[i].label + ":" + p.instances[i].steps[static_cast<std::size_t>(s.pos[i])]->name);
    exec.step(s, i, &trace);
    out.reads.push_back(std::move(trace.reads));
    out.writes.push_back(std::move(trace.writes));
    for (auto& e : trace.edges) out.edges.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < p.instances.size(); ++i)
  {
    if (static_cast<std::size_t>(s.pos[i]) != p.instances[i].steps.size())
    {
      throw std::invalid_argument("schedule leaves " + p.instances[i].label + " unfinished");
    }
  }
  return out;
}

bool
is_serializable(const ExecutedSchedule& s)
{
  std::map<std::string, std::set<std::string>> succ;
  for (const auto& e : s.edges)
  {
    if (e.from != e.to) succ[e.from].insert(e.to);
  }
  std::map<std::string, int> color;
  std::function<bool(const std::string&)> has_cycle = [&](const std::string& n) {
    color[n] = 1;
    for (const auto& next : succ[n])
    {
      if (color[next] == 1) return true;
      if (color[next] == 0 && has_cycle(next)) return true;
    }
    color[n] = 2;
    return false;
  };
  for (const auto& n : s.instances)
  {
    if (color[n] == 0 && has_cycle(n)) return false;
  }
  return true;
}

std::size_t
for_each_interleaving(const std::vector<std::size_t>& steps,
                      const std::function<void(const std::vector<std::size_t>&)>& visit)
{
  std::size_t total = 0;
  for (auto n : steps) total += n;
  std::vector<std::size_t> left = steps, order;
  std::size_t count = 0;
  std::function<void()> rec = [&] {
    if (order.size() == total)
    {
      ++count;
      if (visit) visit(order);
      return;
    }
    for (std::size_t i = 0; i < left.size(); ++i)
    {
      if (!left[i]) continue;
      --left[i];
      order.push_back(i);
      rec();
      order.pop_back();
      ++left[i];
    }
  };
  rec();
  return count;
}

}  // namespace mad
