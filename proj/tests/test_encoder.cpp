#include <doctest.h>

#include <regex>
#include <set>

#include "mad/encoder.hpp"
#include "support.hpp"

using namespace mad;

TEST_CASE("conflict table of the bank example")
{
  auto m = test::load_app("bank");
  auto ct = ConflictTable::build(m);
  CHECK(ct.feasible("Transfer_s0", "Total_s0", DepKind::WR));
  CHECK(ct.feasible("Total_s0", "Transfer_s0", DepKind::RW));
  CHECK(ct.feasible("Transfer_s0", "Transfer_s0", DepKind::WW));
  CHECK(ct.feasible("Transfer_s1", "Total_s1", DepKind::WR));
  CHECK_FALSE(ct.feasible("Transfer_s0", "Total_s1", DepKind::WR));
  CHECK_FALSE(ct.feasible("Total_s0", "Total_s0", DepKind::RW));
  CHECK_FALSE(ct.feasible("Total_s0", "Transfer_s0", DepKind::WR));
  CHECK_FALSE(ct.phantom_capable("Total_s0", "Transfer_s0"));
  CHECK(ct.pairs(DepKind::WW).size() == 2);
}

TEST_CASE("script declares each symbol once and has no check-sat")
{
  auto m = test::load_app("bank");
  auto ct = ConflictTable::build(m);
  auto p = encode_combination(m, ct, {"Transfer", "Total"}, 4);
  CHECK(p.subset == std::vector<std::string>{"Total", "Transfer"});
  CHECK(p.ops.size() == 4);
  CHECK(p.sub_transactions.size() == 4);
  CHECK(p.microservices == std::vector<std::string>{"M1", "M2"});
  CHECK(p.script.find("(check-sat)") == std::string::npos);
  CHECK(p.script.find("(set-logic ALL)") != std::string::npos);

  std::regex decl(R"(\((?:declare-fun|declare-const|declare-sort) (\|[^|]*\||[^\s()]+))");
  std::set<std::string> seen;
  for (auto it = std::sregex_iterator(p.script.begin(), p.script.end(), decl); it != std::sregex_iterator(); ++it)
  {
    std::string name = (*it)[1];
    CHECK_MESSAGE(seen.insert(name).second, "declared twice: " << name);
  }
  for (const char* needed : {"len", "otime", "oname", "parent", "origtx", "WR", "RW", "WW", "vis", "ar", "o_1", "o_4"})
  {
    CHECK_MESSAGE(seen.count(needed), "missing declaration: " << needed);
  }
}

TEST_CASE("encoding is deterministic and independent of subset order")
{
  auto m = test::load_app("bank");
  auto ct = ConflictTable::build(m);
  CHECK(encode_combination(m, ct, {"Total", "Transfer"}, 4).script
        == encode_combination(m, ct, {"Transfer", "Total"}, 4).script);
  CHECK(smt_file_name({"Transfer", "Total"}) == "comb_Total_Transfer.smt2");
}

TEST_CASE("invalid combinations are rejected")
{
  auto m = test::load_app("bank");
  auto ct = ConflictTable::build(m);
  CHECK_THROWS_AS(encode_combination(m, ct, {"Nope"}, 4), std::invalid_argument);
  CHECK_THROWS_AS(encode_combination(m, ct, {"Total"}, 2), std::invalid_argument);
}
