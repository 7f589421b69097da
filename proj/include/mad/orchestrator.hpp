#pragma once

// Divide-and-conquer search over functionality subsets.

#include <chrono>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "mad/solver.hpp"

namespace mad {

struct AnalysisConfig
{
  int mcl = 4;
  int workers = 1;
  SolverConfig solver;
  /// Witness cap per combination.
  std::size_t max_models = 10'000;
  bool divide_and_conquer = true;
  std::chrono::milliseconds global_timeout{14'400'000};
  /// When non-empty, each problem is written there as comb_<names>.smt2.
  std::string dump_dir;
};

struct CombinationRun
{
  std::vector<std::string> subset;
  /// "complete", "timeout", "cap", "unknown", "error" or "skipped" (global
  /// deadline passed before dispatch).
  std::string status;
  std::string message;
  std::size_t witnesses = 0;
  double seconds = 0;
  /// Global event sequence numbers of dispatch and completion.
  std::size_t dispatched_at = 0;
  std::size_t finished_at = 0;
};

struct PhaseRun
{
  std::size_t size = 0;  // subset size; 0 for the single undivided problem
  std::size_t combinations = 0;
  double seconds = 0;
};

struct AnalysisResult
{
  /// Canonical, unique, sorted by key.
  std::vector<CycleWitness> witnesses;
  std::vector<CombinationRun> combinations;
  std::vector<PhaseRun> phases;
  /// Wall-clock of conflict table, encoding and solving.
  double seconds = 0;

  bool complete() const;
};

/// Subsets of size 1..mcl-1, by size then lexicographically. Names are sorted
/// first. Throws std::invalid_argument for mcl < 3.
std::vector<std::vector<std::string>> generate_combinations(std::vector<std::string> names, int mcl);

/// Sum over x = 1..mcl-1 of C(n, x).
std::size_t combination_count(std::size_t n, int mcl);

using ProgressCallback = std::function<void(const CombinationRun&)>;

AnalysisResult run_analysis(const MicroservicesAR& m, const AnalysisConfig& cfg, ProgressCallback progress = {});

}  // namespace mad
