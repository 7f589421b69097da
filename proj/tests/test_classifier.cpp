#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "mad/classifier.hpp"

using namespace mad;

namespace {

struct Op
{
  const char* name;
  const char* fn;
  const char* table;
  StatementKind kind;
  int tx;
};

/// Builds a witness from nodes and edges; sub-transactions are per node.
CycleWitness
cycle(std::vector<Op> ops, std::vector<EdgeKind> edges)
{
  CycleWitness w;
  long long t = 0;
  for (std::size_t i = 0; i < ops.size(); ++i)
  {
    WitnessNode n;
    n.oname = ops[i].name;
    n.functionality = ops[i].fn;
    n.sub_transaction = std::string(ops[i].name) + "_tx";
    n.microservice = "M";
    n.table = ops[i].table;
    n.kind = ops[i].kind;
    n.index = i;
    n.origtx = ops[i].tx;
    n.parent = static_cast<int>(i);
    n.otime = ++t;
    w.nodes.push_back(n);
  }
  w.edges = std::move(edges);
  return canonicalize(w);
}

constexpr auto S = StatementKind::Select;
constexpr auto U = StatementKind::Update;
constexpr auto I = StatementKind::Insert;
using E = EdgeKind;

CycleWitness
read_skew()
{
  return cycle({{"T_s0", "T", "A", S, 0}, {"X_s0", "X", "A", U, 1}, {"X_s1", "X", "B", U, 1}, {"T_s1", "T", "B", S, 0}},
               {E::RW, E::SOT, E::WR, E::SOT});
}

CycleWitness
rotated(CycleWitness w, std::size_t r)
{
  std::rotate(w.nodes.begin(), w.nodes.begin() + static_cast<long>(r), w.nodes.end());
  std::rotate(w.edges.begin(), w.edges.begin() + static_cast<long>(r), w.edges.end());
  return w;
}

}  // namespace

TEST_CASE("pattern table")
{
  CHECK(classify(read_skew()) == AnomalyType::ReadSkew);
  // both reads on A
  CHECK(classify(cycle({{"T_s0", "T", "A", S, 0}, {"X_s0", "X", "A", U, 1}, {"T_s2", "T", "A", S, 0}},
                       {E::RW, E::WR, E::SOT}))
        == AnomalyType::NonRepeatableRead);
  CHECK(classify(cycle({{"X_s0", "X", "A", U, 0}, {"X_s1", "X", "B", U, 0}, {"Y_s0", "Y", "B", U, 1}, {"Y_s1", "Y", "A", U, 1}},
                       {E::SOT, E::WW, E::SOT, E::WW}))
        == AnomalyType::DirtyWrite);
  CHECK(classify(cycle({{"D_s0", "D", "A", S, 0}, {"N_s2", "N", "A", U, 1}, {"N_s0", "N", "B", S, 1}, {"D_s2", "D", "B", U, 0}},
                       {E::RW, E::ST, E::RW, E::ST}))
        == AnomalyType::LostUpdateOrWriteSkew);
  // reader of the RW edge later overwrites through the WW edge
  CHECK(classify(cycle({{"W_s0", "W", "A", S, 0}, {"V_s2", "V", "A", U, 1}, {"W_s2", "W", "A", U, 0}},
                       {E::RW, E::WW, E::SOT}))
        == AnomalyType::LostUpdate);
  CHECK(classify(cycle({{"C_s0", "C", "A", S, 0}, {"C_s1", "C", "B", U, 0}, {"P_s1", "P", "B", U, 1}, {"P_s0", "P", "A", U, 1}},
                       {E::SOT, E::WW, E::SOT, E::WR}))
        == AnomalyType::DirtyRead);
  CHECK(classify(cycle({{"B_s0", "B", "O", S, 0}, {"P_s0", "P", "O", I, 1}, {"B_s2", "B", "O", S, 0}},
                       {E::RW, E::WR, E::SOT}))
        == AnomalyType::PhantomRead);
}

TEST_CASE("classification is rotation invariant")
{
  CycleWitness w = read_skew();
  for (std::size_t r = 0; r < w.size(); ++r)
  {
    CycleWitness x = rotated(w, r);
    CHECK(classify(x) == classify(w));
    CHECK(classify(canonicalize(x)) == classify(w));
  }
}

TEST_CASE("core and extension marking")
{
  CycleWitness core = read_skew();
  CycleWitness ext = cycle({{"T_s0", "T", "A", S, 0},
                            {"X_s0", "X", "A", U, 1},
                            {"X_s1", "X", "B", U, 1},
                            {"T_s1", "T", "B", S, 0},
                            {"T_s2", "T", "C", S, 0}},
                           {E::RW, E::SOT, E::WR, E::SOT, E::SOT});
  CHECK(embeds(core, ext));
  CHECK_FALSE(embeds(ext, core));
  CHECK(embeds(core, core));

  auto anomalies = build_anomalies({ext, core});
  REQUIRE(anomalies.size() == 2);
  CHECK(anomalies[0].core);
  CHECK(anomalies[0].witness.key() == core.key());
  CHECK_FALSE(anomalies[1].core);
  CHECK(anomalies[1].extends == anomalies[0].id);

  Metrics m = group_metrics(anomalies);
  CHECK(m.core == 1);
  CHECK(m.extensions == 1);
  CHECK(m.total == 2);
  CHECK(m.core_by_type[AnomalyType::ReadSkew] == 1);
  CHECK(m.all_by_type[AnomalyType::ReadSkew] == 2);
}

TEST_CASE("lone cycle is core; empty list has no rows")
{
  auto a = build_anomalies({read_skew()});
  REQUIRE(a.size() == 1);
  CHECK(a[0].core);
  Metrics empty = group_metrics({});
  CHECK(empty.total == 0);
  CHECK(empty.core == 0);
  CHECK(empty.by_entities.empty());
  CHECK(empty.by_functionalities.empty());
  CHECK(empty.by_sub_transactions.empty());
}

TEST_CASE("random witness sets: totals reconcile and removing core-embedding cycles leaves no extension")
{
  std::mt19937 rng(20261015);
  const char* ops[] = {"a", "b", "c", "d", "e"};
  auto random_cycle = [&](std::size_t n) {
    std::vector<Op> nodes;
    std::vector<EdgeKind> edges;
    for (std::size_t i = 0; i < n; ++i)
    {
      nodes.push_back({ops[rng() % 5], "F", rng() % 2 ? "A" : "B", rng() % 2 ? S : U, static_cast<int>(i / 2)});
      edges.push_back(i % 2 == 0 ? E::SOT : static_cast<E>(2 + rng() % 3));
    }
    return cycle(nodes, edges);
  };
  for (int round = 0; round < 200; ++round)
  {
    std::vector<CycleWitness> ws;
    std::set<std::string> keys;
    std::size_t count = 1 + rng() % 8;
    while (ws.size() < count)
    {
      CycleWitness w = random_cycle(4 + rng() % 2 * 2);
      if (keys.insert(w.key()).second) ws.push_back(w);
    }
    auto anomalies = build_anomalies(ws);
    Metrics m = group_metrics(anomalies);
    CHECK(m.total == m.core + m.extensions);
    std::size_t by_type = 0;
    for (const auto& [t, n] : m.all_by_type) by_type += n;
    CHECK(by_type == m.total);
    for (const auto* rows : {&m.by_entities, &m.by_functionalities, &m.by_sub_transactions})
    {
      std::size_t sum = 0;
      for (const auto& r : *rows) sum += r.count;
      CHECK(sum == m.total);
      for (std::size_t i = 1; i < rows->size(); ++i) CHECK((*rows)[i - 1].count >= (*rows)[i].count);
    }

    std::vector<CycleWitness> kept;
    for (const auto& a : anomalies)
    {
      bool embeds_core = false;
      for (const auto& c : anomalies)
      {
        if (c.core && c.witness.size() < a.witness.size() && embeds(c.witness, a.witness)) embeds_core = true;
      }
      if (!embeds_core) kept.push_back(a.witness);
    }
    Metrics after = group_metrics(build_anomalies(kept));
    CHECK(after.extensions == 0);
    CHECK(after.core == m.core);
  }
}
