#pragma once

// Runs an external SMT-LIB2 solver on combination problems, decodes models into
// cycle witnesses and enumerates distinct cycles.

#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mad/encoder.hpp"
#include "mad/sexpr.hpp"
#include "mad/witness.hpp"

namespace mad {

/// The solver process failed or answered something unexpected.
class SolverError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig
{
  std::string executable;
  std::chrono::milliseconds timeout{300'000};
};

/// Resolves the solver executable: `flag` if set, then $MAD_SOLVER, then z3 or
/// cvc5 on PATH. Throws SolverError with a remediation hint if none is found.
std::string find_solver(const std::string& flag = "");

enum class Verdict
{
  Sat,
  Unsat,
  Unknown,
};

struct SolverVerdict
{
  Verdict verdict = Verdict::Unknown;
  /// For unknown: "timeout", or the solver's reason.
  std::string reason;
};

/// Values of the queried terms of one model, keyed by term text.
using Model = std::map<std::string, Sexpr>;

/// One solver process holding one problem.
class SolverSession
{
 public:
  using Clock = std::chrono::steady_clock;

  SolverSession(const SolverConfig& config, Clock::time_point deadline);
  ~SolverSession();

  void assert_text(const std::string& smt);
  SolverVerdict check_sat();
  Model get_values(const std::vector<std::string>& terms);

 private:
  struct Impl;
  Impl* d_impl;
};

/// Runs check-sat once on `p`.
SolverVerdict check(const CombinationProblem& p, const SolverConfig& config);

/// Terms whose values extract_cycle needs.
std::vector<std::string> model_queries(const CombinationProblem& p);

/// Decodes the cycle o_1 .. o_len of a model, canonicalizes and validates it.
/// Throws InternalConsistencyError on a model that breaks the cycle invariants.
CycleWitness extract_cycle(const Model& model, const CombinationProblem& p);

/// Assertion excluding every rotation of `w`'s labeled cycle.
std::string blocking_clause(const CycleWitness& w, const CombinationProblem& p);

struct EnumerationResult
{
  std::vector<CycleWitness> witnesses;
  bool complete = false;
  /// "complete", "timeout", "cap", "unknown" or "error".
  std::string status;
  std::string message;
  double seconds = 0;
};

/// Enumerates cycles until unsat, the deadline, or `cap` witnesses. Never
/// throws for solver failures; they are reported as status "error".
EnumerationResult enumerate(const CombinationProblem& p,
                            const SolverConfig& config,
                            std::size_t cap,
                            std::optional<std::chrono::steady_clock::time_point> deadline = {});

}  // namespace mad
