#include "mad/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mad {

bool
AnalysisResult::complete() const
{
  return std::all_of(combinations.begin(), combinations.end(),
                     [](const CombinationRun& c) { return c.status == "complete"; });
}

std::vector<std::vector<std::string>>
generate_combinations(std::vector<std::string> names, int mcl)
{
  if (mcl < 3) throw std::invalid_argument("MCL must be at least 3");
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  const std::size_t n = names.size();
  std::vector<std::vector<std::string>> out;
  for (std::size_t k = 1; k < static_cast<std::size_t>(mcl) && k <= n; ++k)
  {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;)
    {
      std::vector<std::string> subset;
      for (auto i : idx) subset.push_back(names[i]);
      out.push_back(std::move(subset));
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

std::size_t
combination_count(std::size_t n, int mcl)
{
  std::size_t total = 0, c = 1;
  for (std::size_t x = 1; x < static_cast<std::size_t>(mcl) && x <= n; ++x)
  {
    c = c * (n - x + 1) / x;
    total += c;
  }
  return total;
}

namespace {

using Clock = std::chrono::steady_clock;

double
since(Clock::time_point t)
{
  return std::chrono::duration<double>(Clock::now() - t).count();
}

class Runner
{
 public:
  Runner(const MicroservicesAR& m, const AnalysisConfig& cfg, ProgressCallback progress)
      : d_m(m), d_cfg(cfg), d_progress(std::move(progress)), d_ct(ConflictTable::build(m)),
        d_deadline(Clock::now() + cfg.global_timeout)
  {
  }

  /// Runs one phase to completion; returns when every job has finished.
  void phase(const std::vector<std::vector<std::string>>& subsets, bool participation)
  {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (;;)
      {
        std::size_t i = next++;
        if (i >= subsets.size()) return;
        run_one(subsets[i], participation);
      }
    };
    std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, d_cfg.workers)), subsets.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
  }

  AnalysisResult take()
  {
    AnalysisResult r;
    for (auto& [key, w] : d_witnesses) r.witnesses.push_back(std::move(w));
    r.combinations = std::move(d_runs);
    std::sort(r.combinations.begin(), r.combinations.end(), [](const auto& a, const auto& b) {
      return a.dispatched_at < b.dispatched_at;
    });
    return r;
  }

 private:
  void run_one(const std::vector<std::string>& subset, bool participation)
  {
    CombinationRun run;
    run.subset = subset;
    {
      std::lock_guard lock(d_mutex);
      run.dispatched_at = d_events++;
    }
    auto start = Clock::now();
    std::vector<CycleWitness> found;
    if (Clock::now() >= d_deadline)
    {
      run.status = "skipped";
      run.message = "global timeout reached before dispatch";
    }
    else
    {
      try
      {
        CombinationProblem p = encode_combination(d_m, d_ct, subset, d_cfg.mcl, participation);
        if (!d_cfg.dump_dir.empty()) dump(p);
        EnumerationResult e = enumerate(p, d_cfg.solver, d_cfg.max_models, d_deadline);
        run.status = e.status;
        run.message = e.message;
        found = std::move(e.witnesses);
      }
      catch (const std::exception& e)
      {
        run.status = "error";
        run.message = e.what();
      }
    }
    run.witnesses = found.size();
    run.seconds = since(start);

    std::lock_guard lock(d_mutex);
    run.finished_at = d_events++;
    for (auto& w : found) d_witnesses.emplace(w.key(), std::move(w));
    if (d_progress) d_progress(run);
    d_runs.push_back(std::move(run));
  }

  void dump(const CombinationProblem& p)
  {
    std::filesystem::create_directories(d_cfg.dump_dir);
    std::ofstream out(std::filesystem::path(d_cfg.dump_dir) / smt_file_name(p.subset));
    out << p.script << "(check-sat)\n";
    if (!out) throw std::runtime_error("cannot write SMT dump into " + d_cfg.dump_dir);
  }

  const MicroservicesAR& d_m;
  const AnalysisConfig& d_cfg;
  ProgressCallback d_progress;
  ConflictTable d_ct;
  Clock::time_point d_deadline;

  std::mutex d_mutex;
  std::size_t d_events = 0;
  std::map<std::string, CycleWitness> d_witnesses;
  std::vector<CombinationRun> d_runs;
};

}  // namespace

AnalysisResult
run_analysis(const MicroservicesAR& m, const AnalysisConfig& cfg, ProgressCallback progress)
{
  if (cfg.mcl < 3) throw std::invalid_argument("MCL must be at least 3");
  auto start = Clock::now();
  std::vector<std::string> names;
  for (const auto& f : m.monolith.functionalities) names.push_back(f.name);

  Runner runner(m, cfg, std::move(progress));
  std::vector<PhaseRun> phases;
  if (names.empty())
  {
    // nothing to analyze
  }
  else if (cfg.divide_and_conquer)
  {
    auto all = generate_combinations(names, cfg.mcl);
    for (std::size_t k = 1; k < static_cast<std::size_t>(cfg.mcl); ++k)
    {
      std::vector<std::vector<std::string>> batch;
      for (const auto& s : all)
      {
        if (s.size() == k) batch.push_back(s);
      }
      if (batch.empty()) break;
      auto t = Clock::now();
      runner.phase(batch, true);
      phases.push_back({k, batch.size(), since(t)});
    }
  }
  else
  {
    std::sort(names.begin(), names.end());
    auto t = Clock::now();
    runner.phase({names}, false);
    phases.push_back({0, 1, since(t)});
  }
  AnalysisResult r = runner.take();
  r.phases = std::move(phases);
  r.seconds = since(start);
  return r;
}

}  // namespace mad
