// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.
//
//   mad_acceptance [FIXTURES_DIR] [--solver PATH]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mad/classifier.hpp"
#include "mad/frontend.hpp"
#include "mad/oracle.hpp"
#include "mad/orchestrator.hpp"

using namespace mad;

namespace {

std::string g_fixtures = MAD_FIXTURES;
std::string g_solver;

const std::vector<std::string> k_fixtures = {"bank",    "core_ext",  "dirty_read", "dirty_write", "lost_update",
                                             "nrr",     "phantom",   "read_only",  "shop",        "write_skew"};

/// Failure details of the current criterion.
class Log
{
 public:
  void fail(const std::string& msg) { d_failures.push_back(msg); }
  void note(const std::string& msg) { d_notes.push_back(msg); }
  bool ok() const { return d_failures.empty(); }
  const std::vector<std::string>& failures() const { return d_failures; }
  const std::vector<std::string>& notes() const { return d_notes; }

 private:
  std::vector<std::string> d_failures;
  std::vector<std::string> d_notes;
};

MicroservicesAR
load(const std::string& app, const std::string& decomposition = "decomposition.json")
{
  std::string dir = g_fixtures + "/" + app + "/";
  return load_application(dir + "schema.sql", dir + "functionalities.json", dir + decomposition);
}

int
mcl_of(const std::string& app)
{
  return app == "core_ext" ? 5 : 4;
}

AnalysisConfig
config(int mcl, int workers, bool dc)
{
  AnalysisConfig cfg;
  cfg.mcl = mcl;
  cfg.workers = workers;
  cfg.divide_and_conquer = dc;
  cfg.solver = SolverConfig{g_solver, std::chrono::milliseconds(300'000)};
  return cfg;
}

std::string
join(const std::vector<std::string>& v, const char* sep = ",")
{
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

std::set<std::string>
keys(const AnalysisResult& r)
{
  std::set<std::string> out;
  for (const auto& w : r.witnesses) out.insert(w.key());
  return out;
}

std::multiset<std::string>
edge_multiset(const CycleWitness& w)
{
  std::multiset<std::string> out;
  for (EdgeKind e : w.edges) out.insert(to_string(e));
  return out;
}

double
seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Worked bank example.
void
bank_example(Log& log)
{
  auto t0 = std::chrono::steady_clock::now();
  auto r = run_analysis(load("bank"), config(4, 1, true));
  double elapsed = seconds_since(t0);
  if (!r.complete()) log.fail("bank analysis incomplete");
  auto anomalies = build_anomalies(r.witnesses);
  const std::multiset<std::string> want = {"SOT", "SOT", "RW", "WR"};
  const std::vector<std::string> fns = {"Total", "Transfer"};
  std::size_t hits = 0;
  for (const auto& a : anomalies)
  {
    if (a.core && edge_multiset(a.witness) == want && a.witness.functionalities() == fns) ++hits;
  }
  if (hits == 0) log.fail("no core {SOT,SOT,RW,WR} cycle over Total and Transfer");
  auto mono = run_analysis(load("bank", "mono.json"), config(4, 1, true));
  if (!mono.complete() || !mono.witnesses.empty()) log.fail("mono bank reports cycles");
  if (elapsed >= 30) log.fail("took " + std::to_string(elapsed) + " s");
  std::ostringstream n;
  n << hits << " matching core cycle(s), " << anomalies.size() << " anomalies, " << elapsed << " s";
  log.note(n.str());
}

// 2. Solver verdicts agree with the exhaustive oracle per subset.
void
oracle_equivalence(Log& log)
{
  std::size_t compared = 0;
  for (const std::string app : {"bank", "dirty_write", "lost_update", "read_only", "dirty_read", "nrr", "write_skew", "phantom"})
  {
    for (const std::string dec : {"decomposition.json", "mono.json"})
    {
      auto m = load(app, dec);
      auto r = run_analysis(m, config(4, 1, true));
      for (const auto& c : r.combinations)
      {
        if (c.status != "complete")
        {
          log.fail(app + "/" + dec + " [" + join(c.subset) + "]: solver " + c.status);
          continue;
        }
        OracleVerdict v = oracle_has_anomaly(m, c.subset);
        ++compared;
        if (v.partial) log.fail(app + "/" + dec + " [" + join(c.subset) + "]: oracle hit the state bound");
        if (v.anomaly != (c.witnesses > 0))
        {
          log.fail(app + "/" + dec + " [" + join(c.subset) + "]: solver " + std::to_string(c.witnesses) +
                   " cycle(s), oracle " + (v.anomaly ? "anomalous" : "serializable"));
        }
      }
    }
  }
  log.note(std::to_string(compared) + " subsets compared");
}

// 3. Divide and conquer vs one problem; parallel vs sequential wall-clock.
void
decomposition_and_parallelism(Log& log)
{
  for (const auto& app : k_fixtures)
  {
    auto m = load(app);
    auto dc = run_analysis(m, config(mcl_of(app), 2, true));
    auto whole = run_analysis(m, config(mcl_of(app), 1, false));
    if (!dc.complete() || !whole.complete()) log.fail(app + ": incomplete run");
    else if (keys(dc) != keys(whole))
    {
      log.fail(app + ": " + std::to_string(dc.witnesses.size()) + " cycles divided, " +
               std::to_string(whole.witnesses.size()) + " undivided");
    }
  }

  // shop has the most combinations; best of three runs each.
  auto m = load("shop");
  int workers = static_cast<int>(std::max(4u, std::thread::hardware_concurrency()));
  auto best = [&](int w) {
    double t = 1e9;
    for (int i = 0; i < 3; ++i)
    {
      auto t0 = std::chrono::steady_clock::now();
      run_analysis(m, config(4, w, true));
      t = std::min(t, seconds_since(t0));
    }
    return t;
  };
  double seq = best(1);
  double par = best(workers);
  std::ostringstream n;
  n << "shop: sequential " << seq << " s, " << workers << " workers " << par << " s on "
    << std::thread::hardware_concurrency() << " hardware thread(s)";
  log.note(n.str());
  if (par > seq) log.fail("parallel run slower than sequential");
}

// 4. One microservice never yields an anomaly.
void
mono_is_clean(Log& log)
{
  for (const auto& app : k_fixtures)
  {
    auto r = run_analysis(load(app, "mono.json"), config(mcl_of(app), 2, true));
    if (!r.complete()) log.fail(app + ": incomplete");
    if (!r.witnesses.empty()) log.fail(app + ": " + std::to_string(r.witnesses.size()) + " cycle(s)");
  }
}

// 5. Combination counts.
void
combination_counts(Log& log)
{
  for (auto [n, want] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 3}, {5, 25}, {9, 129}, {23, 2047}})
  {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("F" + std::to_string(i));
    std::size_t got = generate_combinations(names, 4).size();
    if (got != want || combination_count(n, 4) != want)
    {
      log.fail("n=" + std::to_string(n) + ": " + std::to_string(got) + " != " + std::to_string(want));
    }
  }
}

// 6. Core/extension accounting.
void
core_and_extensions(Log& log)
{
  auto r = run_analysis(load("core_ext"), config(5, 2, true));
  if (!r.complete()) log.fail("incomplete");
  auto anomalies = build_anomalies(r.witnesses);
  Metrics mt = group_metrics(anomalies);
  if (mt.total != mt.core + mt.extensions) log.fail("#TA != #CA + #Ext");
  if (mt.core == 0 || mt.extensions == 0) log.fail("need both core anomalies and extensions");

  std::vector<CycleWitness> kept;
  for (const auto& a : anomalies)
  {
    bool embeds_core = false;
    for (const auto& b : anomalies)
    {
      if (b.core && b.witness.size() < a.witness.size() && embeds(b.witness, a.witness)) embeds_core = true;
    }
    if (!embeds_core) kept.push_back(a.witness);
  }
  Metrics pruned = group_metrics(build_anomalies(kept));
  if (pruned.extensions != 0) log.fail(std::to_string(pruned.extensions) + " extension(s) after pruning");
  log.note(std::to_string(mt.core) + " core, " + std::to_string(mt.extensions) + " extensions, " +
           std::to_string(mt.total) + " total");
}

// 7. Each fixture yields its anomaly type, and every anomaly found is
// reproduced by a concrete execution.
void
classification(Log& log)
{
  const std::vector<std::pair<std::string, std::string>> expect = {
      {"bank", "RS"},  {"dirty_write", "DW"}, {"dirty_read", "DR"}, {"lost_update", "LU"},
      {"nrr", "NRR"},  {"write_skew", "LU/WS"}, {"phantom", "PR"}};
  std::size_t realized = 0;
  for (const auto& [app, type] : expect)
  {
    auto m = load(app);
    auto r = run_analysis(m, config(4, 2, true));
    auto anomalies = build_anomalies(r.witnesses);
    std::set<std::string> types;
    for (const auto& a : anomalies)
    {
      if (a.core) types.insert(short_name(a.type));
      OracleVerdict v = realize_witness(m, a.witness);
      ++realized;
      if (!v.anomaly) log.fail(app + ": " + a.id + " (" + short_name(a.type) + ") not realized by the oracle");
    }
    if (!types.count(type)) log.fail(app + ": no " + type + " among [" + join({types.begin(), types.end()}) + "]");
    if (app == "nrr" && types.count("RS")) log.fail("nrr: single-table re-read classified RS");
    if (app == "bank" && types.count("NRR")) log.fail("bank: two-table read classified NRR");
  }
  log.note(std::to_string(realized) + " anomalies realized");
}

CycleWitness
rotate(const CycleWitness& w, std::size_t k)
{
  CycleWitness out = w;
  std::rotate(out.nodes.begin(), out.nodes.begin() + static_cast<long>(k), out.nodes.end());
  std::rotate(out.edges.begin(), out.edges.begin() + static_cast<long>(k), out.edges.end());
  return out;
}

// 8. Structural invariants of chopping and of every decoded cycle.
void
invariants(Log& log)
{
  std::size_t checked = 0;
  for (const auto& app : k_fixtures)
  {
    for (const std::string dec : {"decomposition.json", "mono.json"})
    {
      auto m = load(app, dec);
      for (const auto& f : m.monolith.functionalities)
      {
        std::vector<std::size_t> covered;
        std::string prev_service;
        for (const auto* t : m.sub_transactions_of(f.name))
        {
          if (t->statements.empty()) log.fail(t->name + ": empty sub-transaction");
          if (t->microservice == prev_service) log.fail(t->name + ": not maximal");
          prev_service = t->microservice;
          for (std::size_t i : t->statements)
          {
            covered.push_back(i);
            if (m.decomposition.microservice_of(f.statements[i].table) != t->microservice)
            {
              log.fail(t->name + ": statement on a foreign table");
            }
          }
        }
        std::vector<std::size_t> all(f.statements.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        if (covered != all) log.fail(app + "/" + f.name + ": chop is not an order-preserving partition");
      }

      auto r = run_analysis(m, config(mcl_of(app), 2, true));
      for (const auto& w : r.witnesses)
      {
        ++checked;
        try
        {
          validate_witness(w, mcl_of(app));
        }
        catch (const std::exception& e)
        {
          log.fail(w.key() + ": " + e.what());
        }
        for (std::size_t i = 0; i < w.size(); ++i)
        {
          const auto& a = w.nodes[i];
          const auto& b = w.nodes[(i + 1) % w.size()];
          if (is_dependency(w.edges[i]) && !(a.otime < b.otime)) log.fail(w.key() + ": otime not increasing");
          if (w.edges[i] == EdgeKind::ST && !(a.index < b.index)) log.fail(w.key() + ": program order violated");
        }
        AnomalyType t = classify(w);
        for (std::size_t k = 1; k < w.size(); ++k)
        {
          if (classify(rotate(w, k)) != t || canonicalize(rotate(w, k)).key() != w.key())
          {
            log.fail(w.key() + ": rotation changes the result");
          }
        }
      }
    }
  }
  log.note(std::to_string(checked) + " cycles checked");
}

}  // namespace

int
main(int argc, char** argv)
{
  for (int i = 1; i < argc; ++i)
  {
    std::string a = argv[i];
    if (a == "--solver" && i + 1 < argc) g_solver = argv[++i];
    else g_fixtures = a;
  }
  try
  {
    g_solver = find_solver(g_solver);
  }
  catch (const std::exception& e)
  {
    std::cerr << "mad_acceptance: " << e.what() << "\n";
    return 1;
  }

  const std::vector<std::pair<std::string, std::function<void(Log&)>>> criteria = {
      {"1 bank example: core RS cycle, mono clean, under 30 s", bank_example},
      {"2 solver agrees with the exhaustive oracle", oracle_equivalence},
      {"3 divide and conquer equals one problem; parallel not slower", decomposition_and_parallelism},
      {"4 mono decomposition has no anomalies", mono_is_clean},
      {"5 combination counts 3/25/129/2047", combination_counts},
      {"6 core and extension accounting", core_and_extensions},
      {"7 classification confirmed by execution", classification},
      {"8 chop and cycle invariants", invariants},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria)
  {
    Log log;
    auto t0 = std::chrono::steady_clock::now();
    try
    {
      run(log);
    }
    catch (const std::exception& e)
    {
      log.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s  %s  (%.1f s)\n", log.ok() ? "PASS" : "FAIL", name.c_str(), seconds_since(t0));
    for (const auto& n : log.notes()) std::printf("      %s\n", n.c_str());
    std::size_t shown = 0;
    for (const auto& f : log.failures())
    {
      if (shown++ == 20)
      {
        std::printf("      ... %zu more\n", log.failures().size() - 20);
        break;
      }
      std::printf("      - %s\n", f.c_str());
    }
    std::fflush(stdout);
    failed += !log.ok();
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
