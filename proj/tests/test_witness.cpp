#include <doctest.h>

#include <algorithm>

#include "mad/witness.hpp"

using namespace mad;

namespace {

WitnessNode
node(std::string op, std::string fn, std::string st, std::string table, StatementKind kind,
     std::size_t index, int tx, int parent, long long t)
{
  WitnessNode n;
  n.oname = op;
  n.functionality = fn;
  n.sub_transaction = st;
  n.microservice = table == "Account" ? "M1" : "M2";
  n.table = table;
  n.kind = kind;
  n.index = index;
  n.origtx = tx;
  n.parent = parent;
  n.otime = t;
  return n;
}

CycleWitness
read_skew()
{
  CycleWitness w;
  w.nodes = {
      node("Total_s0", "Total", "Total_0", "Account", StatementKind::Select, 0, 0, 0, 1),
      node("Transfer_s0", "Transfer", "Transfer_0", "Account", StatementKind::Update, 0, 1, 1, 2),
      node("Transfer_s1", "Transfer", "Transfer_1", "Wallet", StatementKind::Update, 1, 1, 2, 3),
      node("Total_s1", "Total", "Total_1", "Wallet", StatementKind::Select, 1, 0, 3, 4),
  };
  w.edges = {EdgeKind::RW, EdgeKind::SOT, EdgeKind::WR, EdgeKind::SOT};
  return w;
}

}  // namespace

TEST_CASE("canonical form does not depend on the starting node")
{
  CycleWitness base = canonicalize(read_skew());
  CHECK(base.key() == "Total_s0 -RW-> Transfer_s0 -SOT-> Transfer_s1 -WR-> Total_s1 -SOT->");
  for (int r = 1; r < 4; ++r)
  {
    CycleWitness w = read_skew();
    std::rotate(w.nodes.begin(), w.nodes.begin() + r, w.nodes.end());
    std::rotate(w.edges.begin(), w.edges.begin() + r, w.edges.end());
    for (auto& n : w.nodes) n.origtx += 7;
    CycleWitness c = canonicalize(w);
    CHECK(c.key() == base.key());
    CHECK(c.nodes == base.nodes);
  }
  CHECK_NOTHROW(validate_witness(base, 4));
  CHECK(base.dependency_count() == 2);
  CHECK(base.tables() == std::vector<std::string>{"Account", "Wallet"});
  CHECK(base.functionalities() == std::vector<std::string>{"Total", "Transfer"});
}

TEST_CASE("invalid cycles are rejected")
{
  SUBCASE("one dependency edge")
  {
    CycleWitness w = read_skew();
    w.edges[2] = EdgeKind::SOT;
    w.nodes[3].origtx = 1;
    CHECK_THROWS_AS(validate_witness(w, 4), InternalConsistencyError);
  }
  SUBCASE("too long for the bound")
  {
    CHECK_THROWS_AS(validate_witness(read_skew(), 3), InternalConsistencyError);
  }
  SUBCASE("dependency edge against time")
  {
    CycleWitness w = read_skew();
    w.nodes[1].otime = 0;
    CHECK_THROWS_AS(validate_witness(w, 4), InternalConsistencyError);
  }
  SUBCASE("wrong roles")
  {
    CycleWitness w = read_skew();
    w.edges[0] = EdgeKind::WR;
    CHECK_THROWS_AS(validate_witness(w, 4), InternalConsistencyError);
  }
  SUBCASE("SOT edge across instances")
  {
    CycleWitness w = read_skew();
    w.nodes[2].origtx = 2;
    CHECK_THROWS_AS(validate_witness(w, 4), InternalConsistencyError);
  }
}
