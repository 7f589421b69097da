#include "mad/solver.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "mad/subprocess.hpp"

namespace mad {

namespace {

struct DeadlineExpired
{
};

std::string
basename_of(const std::string& path)
{
  auto slash = path.rfind('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::vector<std::string>
solver_argv(const std::string& exe)
{
  std::string base = basename_of(exe);
  if (base.find("cvc5") != std::string::npos || base.find("cvc4") != std::string::npos)
  {
    return {exe, "--lang=smt2", "--incremental"};
  }
  return {exe, "-in", "-smt2"};
}

}  // namespace

std::string
find_solver(const std::string& flag)
{
  auto resolve = [](const std::string& name, const char* origin) {
    std::string path = find_on_path(name);
    if (path.empty())
    {
      throw SolverError(std::string("SMT solver '") + name + "' from " + origin
                        + " is not an executable");
    }
    return path;
  };
  if (!flag.empty()) return resolve(flag, "--solver");
  if (const char* env = std::getenv("MAD_SOLVER"); env && *env) return resolve(env, "MAD_SOLVER");
  for (const char* name : {"z3", "cvc5"})
  {
    std::string path = find_on_path(name);
    if (!path.empty()) return path;
  }
  // `pip install --user z3-solver` puts the binary here without touching PATH.
  if (const char* home = std::getenv("HOME"); home && *home)
  {
    for (const char* name : {"z3", "cvc5"})
    {
      std::string path = find_on_path(std::string(home) + "/.local/bin/" + name);
      if (!path.empty()) return path;
    }
  }
  throw SolverError(
      "no SMT-LIB2 solver found; install z3 (for example `pip install z3-solver`) or cvc5, "
      "then put it on PATH, set MAD_SOLVER, or pass --solver PATH");
}

/* -------------------------------------------------------------------------- */

struct SolverSession::Impl
{
  Subprocess process;
  SexprReader reader;
  Clock::time_point deadline;
  std::string transcript_tail;

  Impl(const SolverConfig& config, Clock::time_point d)
      : process(solver_argv(config.executable)), deadline(d)
  {
  }

  void send(const std::string& text)
  {
    if (!process.write(text)) throw SolverError("solver closed its input" + tail());
  }

  std::string tail() const
  {
    return transcript_tail.empty() ? "" : ": " + transcript_tail;
  }

  Sexpr read()
  {
    for (;;)
    {
      if (auto e = reader.next()) return *e;
      std::string chunk;
      bool eof = false;
      if (!process.read_some(chunk, deadline, eof))
      {
        process.kill();
        throw DeadlineExpired{};
      }
      if (eof) throw SolverError("solver exited unexpectedly" + tail());
      transcript_tail = (transcript_tail + chunk);
      if (transcript_tail.size() > 400) transcript_tail.erase(0, transcript_tail.size() - 400);
      reader.feed(chunk);
    }
  }
};

SolverSession::SolverSession(const SolverConfig& config, Clock::time_point deadline)
{
  try
  {
    d_impl = new Impl(config, deadline);
  }
  catch (const SpawnError& e)
  {
    throw SolverError(std::string("cannot start solver: ") + e.what());
  }
  d_impl->send("(set-option :print-success false)\n");
}

SolverSession::~SolverSession()
{
  delete d_impl;
}

void
SolverSession::assert_text(const std::string& smt)
{
  d_impl->send(smt);
  if (!smt.empty() && smt.back() != '\n') d_impl->send("\n");
}

SolverVerdict
SolverSession::check_sat()
{
  if (Clock::now() >= d_impl->deadline) return {Verdict::Unknown, "timeout"};
  try
  {
    d_impl->send("(check-sat)\n");
    std::vector<std::string> errors;
    for (;;)
    {
      Sexpr e = d_impl->read();
      if (e.is_list && !e.list.empty() && e.list[0].is_atom("error"))
      {
        errors.push_back(e.list.size() > 1 ? e.list[1].atom : e.to_string());
        continue;
      }
      if (!errors.empty()) throw SolverError("solver rejected the problem: " + errors.front());
      if (e.is_atom("sat")) return {Verdict::Sat, ""};
      if (e.is_atom("unsat")) return {Verdict::Unsat, ""};
      if (e.is_atom("unknown"))
      {
        d_impl->send("(get-info :reason-unknown)\n");
        Sexpr why = d_impl->read();
        std::string reason = why.is_list && why.list.size() == 2 ? why.list[1].to_string() : why.to_string();
        return {Verdict::Unknown, reason};
      }
      throw SolverError("unexpected solver output: " + e.to_string());
    }
  }
  catch (const DeadlineExpired&)
  {
    return {Verdict::Unknown, "timeout"};
  }
}

Model
SolverSession::get_values(const std::vector<std::string>& terms)
{
  std::string q = "(get-value (";
  for (const auto& t : terms) q += t + " ";
  q += "))\n";
  d_impl->send(q);
  Sexpr e = d_impl->read();
  if (!e.is_list || (!e.list.empty() && e.list[0].is_atom("error")))
  {
    throw SolverError("get-value failed: " + e.to_string());
  }
  if (e.list.size() != terms.size()) throw SolverError("get-value returned the wrong number of values");
  Model m;
  for (std::size_t i = 0; i < terms.size(); ++i)
  {
    const Sexpr& pair = e.list[i];
    if (!pair.is_list || pair.list.size() != 2) throw SolverError("malformed get-value pair");
    m[terms[i]] = pair.list[1];
  }
  return m;
}

SolverVerdict
check(const CombinationProblem& p, const SolverConfig& config)
{
  auto deadline = std::chrono::steady_clock::now() + config.timeout;
  if (config.timeout.count() <= 0) return {Verdict::Unknown, "timeout"};
  SolverSession s(config, deadline);
  s.assert_text(p.script);
  return s.check_sat();
}

/* -------------------------------------------------------------------------- */

namespace {

std::string
o(int i)
{
  return smt::op_constant(i);
}

std::string
eq_term(const char* f, int i, int j)
{
  return "(= (" + std::string(f) + " " + o(i) + ") (" + f + " " + o(j) + "))";
}

std::string
rel_term(const char* r, int i, int j)
{
  return "(" + std::string(r) + " " + o(i) + " " + o(j) + ")";
}

}  // namespace

std::vector<std::string>
model_queries(const CombinationProblem& p)
{
  std::vector<std::string> q = {"len"};
  for (int i = 1; i <= p.mcl; ++i)
  {
    q.push_back("(oname " + o(i) + ")");
    q.push_back("(tname (parent " + o(i) + "))");
    q.push_back("(fname (origtx " + o(i) + "))");
    q.push_back("(mname " + o(i) + ")");
    q.push_back("(otime " + o(i) + ")");
  }
  for (int i = 1; i <= p.mcl; ++i)
  {
    for (int j = i + 1; j <= p.mcl; ++j)
    {
      q.push_back(eq_term("parent", i, j));
      q.push_back(eq_term("origtx", i, j));
    }
  }
  for (int i = 1; i <= p.mcl; ++i)
  {
    for (int j = 1; j <= p.mcl; ++j)
    {
      if (i == j) continue;
      for (const char* r : {"WR", "RW", "WW"}) q.push_back(rel_term(r, i, j));
    }
  }
  return q;
}

CycleWitness
extract_cycle(const Model& model, const CombinationProblem& p)
{
  auto value = [&](const std::string& term) -> const Sexpr& {
    auto it = model.find(term);
    if (it == model.end()) throw InternalConsistencyError("model lacks a value for " + term);
    return it->second;
  };
  auto boolean = [&](const std::string& term) {
    auto b = value(term).as_bool();
    if (!b) throw InternalConsistencyError("non-boolean value for " + term);
    return *b;
  };
  auto strip = [&](const std::string& term, const std::string& prefix) {
    const Sexpr& v = value(term);
    if (v.is_list || v.atom.rfind(prefix, 0) != 0)
    {
      throw InternalConsistencyError("unexpected value " + v.to_string() + " for " + term);
    }
    return v.atom.substr(prefix.size());
  };

  auto len = value("len").as_int();
  if (!len || *len < 3 || *len > p.mcl) throw InternalConsistencyError("cycle length out of range");
  int n = static_cast<int>(*len);

  CycleWitness w;
  w.subset = p.subset;
  for (int i = 1; i <= n; ++i)
  {
    std::string name = strip("(oname " + o(i) + ")", "op_");
    const OpInfo* op = p.find_op(name);
    if (!op) throw InternalConsistencyError("model names unknown operation " + name);
    if (strip("(tname (parent " + o(i) + "))", "tx_") != op->sub_transaction
        || strip("(fname (origtx " + o(i) + "))", "fn_") != op->functionality)
    {
      throw InternalConsistencyError("name bindings of " + name + " do not match the program");
    }
    std::string ms = strip("(mname " + o(i) + ")", "ms_");
    if (ms.empty() || static_cast<std::size_t>(std::stoul(ms)) >= p.microservices.size()
        || p.microservices[std::stoul(ms)] != op->microservice)
    {
      throw InternalConsistencyError("microservice of " + name + " does not match the program");
    }
    auto t = value("(otime " + o(i) + ")").as_int();
    if (!t) throw InternalConsistencyError("non-integer otime");

    WitnessNode node;
    node.oname = op->name;
    node.functionality = op->functionality;
    node.sub_transaction = op->sub_transaction;
    node.microservice = op->microservice;
    node.table = op->table;
    node.kind = op->kind;
    node.index = op->index;
    node.otime = *t;
    w.nodes.push_back(node);
  }

  auto same = [&](const char* f, int i, int j) {
    if (i == j) return true;
    return boolean(eq_term(f, std::min(i, j), std::max(i, j)));
  };
  for (int i = 1; i <= n; ++i)
  {
    int tx = i, parent = i;
    for (int k = 1; k < i; ++k)
    {
      if (tx == i && same("origtx", k, i)) tx = k;
      if (parent == i && same("parent", k, i)) parent = k;
    }
    w.nodes[i - 1].origtx = tx;
    w.nodes[i - 1].parent = parent;
  }
  for (int i = 1; i <= n; ++i)
  {
    for (int j = 1; j <= n; ++j)
    {
      bool by_id = w.nodes[i - 1].origtx == w.nodes[j - 1].origtx;
      if (by_id != same("origtx", i, j)) throw InternalConsistencyError("origtx equality is not transitive");
      bool by_parent = w.nodes[i - 1].parent == w.nodes[j - 1].parent;
      if (by_parent != same("parent", i, j)) throw InternalConsistencyError("parent equality is not transitive");
    }
  }

  for (int i = 1; i <= n; ++i)
  {
    int j = i % n + 1;
    const WitnessNode& a = w.nodes[i - 1];
    const WitnessNode& b = w.nodes[j - 1];
    EdgeKind e;
    if (a.origtx == b.origtx)
    {
      e = a.parent == b.parent ? EdgeKind::ST : EdgeKind::SOT;
    }
    else
    {
      bool au = a.kind != StatementKind::Select, bu = b.kind != StatementKind::Select;
      if (au && bu) e = EdgeKind::WW;
      else if (au) e = EdgeKind::WR;
      else if (bu) e = EdgeKind::RW;
      else throw InternalConsistencyError("dependency edge between two reads");
      if (!boolean(rel_term(to_string(e), i, j)))
      {
        throw InternalConsistencyError(std::string("model lacks the ") + to_string(e) + " edge from "
                                       + a.oname + " to " + b.oname);
      }
    }
    w.edges.push_back(e);
  }

  w = canonicalize(std::move(w));
  validate_witness(w, p.mcl);
  return w;
}

std::string
blocking_clause(const CycleWitness& w, const CombinationProblem&)
{
  const std::size_t n = w.nodes.size();
  std::vector<std::string> options;
  for (std::size_t r = 0; r < n; ++r)
  {
    if (is_dependency(w.edges[r])) continue;
    std::string s = "(and (= len " + std::to_string(n) + ")";
    for (std::size_t k = 0; k < n; ++k)
    {
      const WitnessNode& node = w.nodes[(r + k) % n];
      int i = static_cast<int>(k) + 1;
      int j = static_cast<int>((k + 1) % n) + 1;
      s += " (= (oname " + o(i) + ") " + smt::oname_ctor(node.oname) + ")";
      std::string together = "(= (origtx " + o(i) + ") (origtx " + o(j) + "))";
      s += is_dependency(w.edges[(r + k) % n]) ? " (not " + together + ")" : " " + together;
    }
    options.push_back(s + ")");
  }
  std::string out = "(assert (not (or";
  for (const auto& opt : options) out += "\n  " + opt;
  return out + ")))\n";
}

EnumerationResult
enumerate(const CombinationProblem& p,
          const SolverConfig& config,
          std::size_t cap,
          std::optional<std::chrono::steady_clock::time_point> deadline)
{
  using Clock = std::chrono::steady_clock;
  auto start = Clock::now();
  auto limit = start + config.timeout;
  if (deadline && *deadline < limit) limit = *deadline;

  EnumerationResult result;
  auto finish = [&](std::string status, bool complete, std::string message = "") {
    result.status = std::move(status);
    result.complete = complete;
    result.message = std::move(message);
    result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
  };
  if (cap == 0) return finish("cap", false);
  try
  {
    SolverSession s(SolverConfig{config.executable, config.timeout}, limit);
    s.assert_text(p.script);
    auto queries = model_queries(p);
    std::set<std::string> seen;
    for (;;)
    {
      SolverVerdict v = s.check_sat();
      if (v.verdict == Verdict::Unsat) return finish("complete", true);
      if (v.verdict == Verdict::Unknown)
      {
        return v.reason == "timeout" ? finish("timeout", false) : finish("unknown", false, v.reason);
      }
      if (result.witnesses.size() >= cap) return finish("cap", false);
      CycleWitness w = extract_cycle(s.get_values(queries), p);
      if (!seen.insert(w.key()).second)
      {
        throw InternalConsistencyError("blocked cycle returned again: " + w.key());
      }
      s.assert_text(blocking_clause(w, p));
      result.witnesses.push_back(std::move(w));
    }
  }
  catch (const DeadlineExpired&)
  {
    return finish("timeout", false);
  }
  catch (const SolverError& e)
  {
    return finish("error", false, e.what());
  }
  catch (const InternalConsistencyError& e)
  {
    return finish("error", false, e.what());
  }
}

}  // namespace mad
