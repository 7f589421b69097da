#include <doctest.h>

#include <set>

#include "mad/orchestrator.hpp"
#include "support.hpp"

using namespace mad;

namespace {

std::vector<std::string>
names(std::size_t n)
{
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("f" + std::to_string(100 + i));
  return v;
}

std::set<std::string>
keys(const AnalysisResult& r)
{
  std::set<std::string> out;
  for (const auto& w : r.witnesses) out.insert(w.key());
  return out;
}

AnalysisConfig
config(int workers, bool dc, int mcl = 4)
{
  AnalysisConfig cfg;
  cfg.mcl = mcl;
  cfg.workers = workers;
  cfg.divide_and_conquer = dc;
  cfg.solver = SolverConfig{test::solver(), std::chrono::milliseconds(120'000)};
  return cfg;
}

}  // namespace

TEST_CASE("combination counts follow the binomial sum")
{
  CHECK(generate_combinations(names(2), 4).size() == 3);
  CHECK(generate_combinations(names(5), 4).size() == 25);
  CHECK(generate_combinations(names(9), 4).size() == 129);
  CHECK(generate_combinations(names(23), 4).size() == 2047);
  CHECK(generate_combinations(names(3), 3).size() == 6);
  for (std::size_t n : {2u, 5u, 9u, 23u}) CHECK(combination_count(n, 4) == generate_combinations(names(n), 4).size());
  CHECK_THROWS_AS(generate_combinations(names(3), 2), std::invalid_argument);
}

TEST_CASE("combinations are ordered by size, then lexicographically, without repeats")
{
  auto c = generate_combinations({"c", "a", "b", "d"}, 4);
  REQUIRE(c.size() == 14);
  CHECK(c.front() == std::vector<std::string>{"a"});
  CHECK(c[4] == std::vector<std::string>{"a", "b"});
  CHECK(c.back() == std::vector<std::string>{"b", "c", "d"});
  std::set<std::vector<std::string>> seen(c.begin(), c.end());
  CHECK(seen.size() == c.size());
  for (std::size_t i = 1; i < c.size(); ++i)
  {
    CHECK(c[i - 1].size() <= c[i].size());
    if (c[i - 1].size() == c[i].size()) CHECK(c[i - 1] < c[i]);
    CHECK(std::is_sorted(c[i].begin(), c[i].end()));
  }
}

TEST_CASE("orchestrated analysis" * doctest::skip(test::solver().empty()))
{
  SUBCASE("phases are separated by a barrier")
  {
    auto m = test::load_app("lost_update");
    auto r = run_analysis(m, config(4, true));
    REQUIRE(r.combinations.size() == 3);
    CHECK(r.complete());
    for (const auto& later : r.combinations)
    {
      for (const auto& earlier : r.combinations)
      {
        if (earlier.subset.size() < later.subset.size()) CHECK(earlier.finished_at < later.dispatched_at);
      }
    }
    REQUIRE(r.phases.size() == 2);
    CHECK(r.phases[0].size == 1);
    CHECK(r.phases[1].size == 2);
  }

  SUBCASE("witnesses of a subset involve all of its functionalities")
  {
    auto m = test::load_app("bank");
    auto r = run_analysis(m, config(2, true));
    for (const auto& w : r.witnesses) CHECK(w.functionalities() == w.subset);
    std::set<std::string> fns;
    for (const auto& w : r.witnesses)
    {
      if (w.functionalities() == std::vector<std::string>{"Total", "Transfer"}) fns.insert(w.key());
    }
    CHECK(fns.size() == 2);
  }

  SUBCASE("divide and conquer finds the same cycles as one undivided problem")
  {
    for (const char* app : {"bank", "dirty_write", "lost_update", "dirty_read", "nrr", "write_skew", "phantom"})
    {
      auto m = test::load_app(app);
      auto dc = run_analysis(m, config(2, true));
      auto whole = run_analysis(m, config(1, false));
      CHECK(dc.complete());
      CHECK(whole.complete());
      CHECK_MESSAGE(keys(dc) == keys(whole), app);
    }
  }

  SUBCASE("read-only application has no cycles in any phase")
  {
    auto m = test::load_app("read_only");
    auto r = run_analysis(m, config(2, true));
    CHECK(r.witnesses.empty());
    CHECK(r.combinations.size() == 7);
    CHECK(r.complete());
  }

  SUBCASE("global timeout skips remaining combinations")
  {
    auto m = test::load_app("bank");
    auto cfg = config(1, true);
    cfg.global_timeout = std::chrono::milliseconds(0);
    auto r = run_analysis(m, cfg);
    CHECK_FALSE(r.complete());
    for (const auto& c : r.combinations) CHECK(c.status == "skipped");
  }
}
