#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace mad;

TEST_CASE("chop: worked example")
{
  MicroservicesAR m = test::load_app("bank");
  REQUIRE(m.sub_transactions.size() == 4);
  CHECK(m.sub_transactions[0] == SubTransaction{"Total_0", "Total", "M1", {0}});
  CHECK(m.sub_transactions[1] == SubTransaction{"Total_1", "Total", "M2", {1}});
  CHECK(m.sub_transactions[2] == SubTransaction{"Transfer_0", "Transfer", "M1", {0}});
  CHECK(m.sub_transactions[3] == SubTransaction{"Transfer_1", "Transfer", "M2", {1}});
  CHECK(m.op("Transfer_s1").sub_transaction == 3);
  CHECK(m.statement(m.op("Total_s1")).table == "Wallet");
}

TEST_CASE("chop: mono gives one sub-transaction per functionality")
{
  MicroservicesAR m = test::load_app("bank", "mono.json");
  REQUIRE(m.sub_transactions.size() == 2);
  CHECK(m.sub_transactions[0] == SubTransaction{"Total_0", "Total", "mono", {0, 1}});
  CHECK(m.sub_transactions[1] == SubTransaction{"Transfer_0", "Transfer", "mono", {0, 1}});
}

TEST_CASE("chop: A, B, A across two services gives three sub-transactions")
{
  Schema s = parse_schema("CREATE TABLE A (k INT PRIMARY KEY, v INT); CREATE TABLE B (k INT PRIMARY KEY, v INT);");
  MonolithAR ar = parse_functionalities(R"({"functionalities":[{"name":"F","statements":[
      {"sql":"SELECT v FROM A"},{"sql":"SELECT v FROM B"},{"sql":"SELECT v FROM A"}]}]})",
                                        s);
  MicroservicesAR m = chop(ar, parse_decomposition(R"({"X":["A"],"Y":["B"]})", s));
  REQUIRE(m.sub_transactions.size() == 3);
  CHECK(m.sub_transactions[0].name == "F_0");
  CHECK(m.sub_transactions[1].name == "F_1");
  CHECK(m.sub_transactions[2].name == "F_2");
  CHECK(m.sub_transactions[2].microservice == "X");
}

TEST_CASE("property: chopping is an order-preserving partition")
{
  std::mt19937 rng(11);
  for (int n = 0; n < 200; ++n)
  {
    int tables = 1 + static_cast<int>(rng() % 5);
    Schema schema;
    for (int i = 0; i < tables; ++i)
    {
      schema.tables.push_back({"t" + std::to_string(i), {{"id", ValueType::Int}}, {"id"}});
    }
    MonolithAR ar;
    ar.schema = schema;
    int fns = 1 + static_cast<int>(rng() % 4);
    for (int f = 0; f < fns; ++f)
    {
      Functionality fn;
      fn.name = "f" + std::to_string(f);
      int len = static_cast<int>(rng() % 7);
      for (int i = 0; i < len; ++i)
      {
        Statement st;
        st.name = fn.name + "_s" + std::to_string(i);
        st.kind = StatementKind::Select;
        st.table = "t" + std::to_string(rng() % tables);
        st.read_columns = {"id"};
        st.path_condition = Expr::truth();
        fn.statements.push_back(st);
      }
      ar.functionalities.push_back(fn);
    }
    Decomposition d;
    int services = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < services; ++i) d.clusters.push_back({"m" + std::to_string(i), {}});
    for (const auto& t : schema.tables) d.clusters[rng() % services].tables.push_back(t.name);

    MicroservicesAR m = chop(ar, d);
    for (const auto& fn : ar.functionalities)
    {
      auto subs = m.sub_transactions_of(fn.name);
      std::vector<std::size_t> concat;
      for (std::size_t k = 0; k < subs.size(); ++k)
      {
        CHECK(subs[k]->name == fn.name + "_" + std::to_string(k));
        for (std::size_t si : subs[k]->statements)
        {
          concat.push_back(si);
          CHECK(d.microservice_of(fn.statements[si].table) == subs[k]->microservice);
        }
        if (k > 0) CHECK(subs[k]->microservice != subs[k - 1]->microservice);
      }
      std::vector<std::size_t> expected(fn.statements.size());
      for (std::size_t i = 0; i < expected.size(); ++i) expected[i] = i;
      CHECK(concat == expected);
      CHECK(subs.size() <= fn.statements.size());
      if (services == 1 && !fn.statements.empty()) CHECK(subs.size() == 1);
    }
    MicroservicesAR again = chop(ar, d);
    CHECK(again.sub_transactions == m.sub_transactions);
  }
}

TEST_CASE("chop json lists sub-transactions")
{
  MicroservicesAR m = test::load_app("bank");
  std::string j = chop_to_json(m);
  CHECK(j.find("\"Transfer_1\"") != std::string::npos);
  CHECK(j.find("UPDATE Wallet SET balance = :walletBalance + :amount WHERE clientId = :clientId")
        != std::string::npos);
}
