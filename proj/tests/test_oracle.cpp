#include <doctest.h>

#include <random>

#include "mad/oracle.hpp"
#include "support.hpp"

using namespace mad;

namespace {

std::size_t
binomial(std::size_t n, std::size_t k)
{
  std::size_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

TEST_CASE("interleaving counts")
{
  for (std::size_t a = 0; a <= 4; ++a)
  {
    for (std::size_t b = 0; b <= 4; ++b)
    {
      CHECK(for_each_interleaving({a, b}, {}) == binomial(a + b, a));
    }
  }
  CHECK(for_each_interleaving({}, {}) == 1);
  CHECK(for_each_interleaving({2, 2, 2}, {}) == 90);
}

TEST_CASE("bank: the interleaving of the example is not serializable")
{
  auto m = test::load_app("bank");
  std::vector<ScheduleInstance> inst = {{"Total", {}}, {"Transfer", {{"amount", Value{std::int64_t{1}}}}}};
  // Total_0, Transfer_0, Transfer_1, Total_1
  ExecutedSchedule s = execute_schedule(m, inst, {0, 1, 1, 0});
  CHECK_FALSE(is_serializable(s));
  CHECK(s.steps == std::vector<std::string>{"Total#1:Total_0", "Transfer#1:Transfer_0", "Transfer#1:Transfer_1",
                                            "Total#1:Total_1"});
  bool rw = false, wr = false;
  for (const auto& e : s.edges)
  {
    if (e.kind == "RW" && e.from == "Total#1" && e.cell == "Account[0].balance") rw = true;
    if (e.kind == "WR" && e.from == "Transfer#1" && e.cell == "Wallet[0].balance") wr = true;
  }
  CHECK(rw);
  CHECK(wr);

  // the schedule enumeration includes it
  bool found = false;
  for_each_interleaving({2, 2}, [&](const std::vector<std::size_t>& o) {
    if (o == std::vector<std::size_t>{0, 1, 1, 0}) found = true;
  });
  CHECK(found);
}

TEST_CASE("serial schedules are serializable")
{
  for (const char* app : {"bank", "lost_update", "dirty_write", "write_skew", "phantom"})
  {
    auto m = test::load_app(app);
    std::vector<ScheduleInstance> inst;
    std::vector<std::size_t> order;
    for (const auto& f : m.monolith.functionalities)
    {
      for (int k = 0; k < 2; ++k)
      {
        inst.push_back({f.name, {}});
        for (std::size_t s = 0; s < m.sub_transactions_of(f.name).size(); ++s) order.push_back(inst.size() - 1);
      }
    }
    CHECK_MESSAGE(is_serializable(execute_schedule(m, inst, order)), app);
  }
}

TEST_CASE("read-only functionalities never conflict")
{
  auto m = test::load_app("read_only");
  std::vector<ScheduleInstance> inst = {{"ShowCustomer", {}}, {"ShowOrder", {}}, {"ShowCustomer", {}}};
  std::size_t n = for_each_interleaving({2, 2, 2}, [&](const std::vector<std::size_t>& o) {
    auto s = execute_schedule(m, inst, o);
    CHECK(s.edges.empty());
    CHECK(is_serializable(s));
  });
  CHECK(n == 90);
}

TEST_CASE("oracle verdicts")
{
  auto bank = test::load_app("bank");
  auto mono = test::load_app("bank", "mono.json");
  CHECK(oracle_has_anomaly(bank, {"Total", "Transfer"}).anomaly);
  CHECK_FALSE(oracle_has_anomaly(mono, {"Total", "Transfer"}).anomaly);
  CHECK_FALSE(oracle_has_anomaly(bank, {"Total"}).anomaly);
  // Two Transfer instances overwrite Account and Wallet in opposite orders.
  auto transfer = oracle_has_anomaly(bank, {"Transfer"});
  CHECK(transfer.anomaly);
  CHECK_FALSE(transfer.partial);

  auto none = oracle_has_anomaly(bank, {"Total", "Transfer"}, OracleConfig{0, 0});
  CHECK_FALSE(none.anomaly);
  CHECK(none.instances == 0);
}

TEST_CASE("a verdict reports the schedule and its conflict edges")
{
  auto m = test::load_app("nrr");
  auto v = oracle_has_anomaly(m, {"Report", "Sell"});
  REQUIRE(v.anomaly);
  CHECK_FALSE(v.schedule.empty());
  CHECK_FALSE(v.edges.empty());
}

TEST_CASE("mono decompositions: random schedules are serializable")
{
  std::mt19937 rng(7);
  for (const char* app : {"bank", "lost_update", "dirty_write", "dirty_read", "nrr", "write_skew", "phantom", "core_ext"})
  {
    auto m = test::load_app(app, "mono.json");
    for (int round = 0; round < 50; ++round)
    {
      std::vector<ScheduleInstance> inst;
      std::vector<std::size_t> order;
      for (int k = 0; k < 3; ++k)
      {
        const auto& f = m.monolith.functionalities[rng() % m.monolith.functionalities.size()];
        ScheduleInstance si{f.name, {}};
        for (const auto& p : f.params)
        {
          if (p.type == ValueType::Int) si.params[p.name] = Value{std::int64_t(rng() % 2)};
        }
        inst.push_back(si);
        order.push_back(inst.size() - 1);
      }
      std::shuffle(order.begin(), order.end(), rng);
      CHECK_MESSAGE(is_serializable(execute_schedule(m, inst, order)), app);
    }
    for (const auto& f : m.monolith.functionalities)
    {
      CHECK_FALSE(oracle_has_anomaly(m, {f.name}).anomaly);
    }
  }
}

TEST_CASE("invalid schedules are rejected")
{
  auto m = test::load_app("bank");
  CHECK_THROWS_AS(execute_schedule(m, {{"Total", {}}}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(execute_schedule(m, {{"Total", {}}}, {0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(execute_schedule(m, {{"Nope", {}}}, {}), std::invalid_argument);
}
