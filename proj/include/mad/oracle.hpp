#pragma once

// Brute-force ground truth: runs every interleaving of chopped
// sub-transactions over a tiny database and checks conflict serializability.
//
// Execution model: each sub-transaction runs atomically; statements act on the
// current database state. A statement's footprint is the set of cells it reads
// or writes, where a cell is a (row slot, column) pair or a row's presence
// flag. Selects read the presence of every slot and the selected and WHERE
// columns of matching rows; updates write their SET columns of matching rows;
// deletes write every column and the presence of matching rows; inserts write
// every column and the presence of the slot carrying their key (an insert whose
// key matches no slot is ignored). Instances conflict when they touch a common
// cell and at least one of them writes it.

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mad/chopper.hpp"
#include "mad/witness.hpp"

namespace mad {

struct OracleConfig
{
  /// Instances per functionality; subsets of one functionality use
  /// `singleton_instances` so that three-instance cycles are reachable.
  int instances = 2;
  int singleton_instances = 3;
  /// Overrides per functionality name.
  std::map<std::string, int> multiplicity;
  /// Row slots per table, keyed by the first values of the key domain.
  int rows = 1;
  /// Integer and real domain; strings are "s0", "s1"; both booleans.
  int int_min = 0;
  int int_max = 3;
  int strings = 2;
  /// Count only cycles whose instances span every functionality of the
  /// subset (a strongly connected component touching each of them).
  bool participation = true;
  /// Search states explored before giving up with a partial verdict.
  std::size_t state_bound = 5'000'000;
};

/// An edge of the concrete instance conflict graph.
struct InstanceEdge
{
  std::string from;
  std::string to;
  /// "WR", "RW" or "WW".
  std::string kind;
  /// Cell, as `Table[slot].column` or `Table[slot].<present>`.
  std::string cell;
};

struct OracleVerdict
{
  bool anomaly = false;
  /// The state bound was hit before the search finished.
  bool partial = false;
  std::size_t states = 0;
  std::size_t instances = 0;
  /// For an anomaly: the executed steps (`Transfer#1:Transfer_0 {amount=1}`),
  /// and the conflict edges among them.
  std::vector<std::string> schedule;
  std::vector<InstanceEdge> edges;
  std::vector<std::string> notes;
};

/// True iff some schedule of `subset` over the configured domain is not
/// conflict serializable, with a conflict cycle spanning the whole subset when
/// `participation` is set.
OracleVerdict oracle_has_anomaly(const MicroservicesAR& m,
                                 const std::vector<std::string>& subset,
                                 const OracleConfig& cfg = {});

/// Runs the oracle with the functionalities and instance counts of `w`.
OracleVerdict realize_witness(const MicroservicesAR& m, const CycleWitness& w, OracleConfig cfg = {});

/// One functionality instance of an explicit schedule.
struct ScheduleInstance
{
  std::string functionality;
  /// Missing parameters take the first value of their domain.
  std::map<std::string, Value> params;
};

struct ExecutedSchedule
{
  /// `<fn>#<k>:<sub-transaction>` per step.
  std::vector<std::string> steps;
  /// Cells read and written per step.
  std::vector<std::vector<std::string>> reads;
  std::vector<std::vector<std::string>> writes;
  std::vector<InstanceEdge> edges;
  std::vector<std::string> instances;
};

/// Executes `order` (instance index per step; each instance's sub-transactions
/// run in program order) on the initial database in which every slot is
/// present and holds the first domain value in each non-key column, and
/// optionally `initial` values (`Table.column` -> value, applied to all slots).
/// Throws std::invalid_argument for an order that is not a valid interleaving.
ExecutedSchedule execute_schedule(const MicroservicesAR& m,
                                  const std::vector<ScheduleInstance>& instances,
                                  const std::vector<std::size_t>& order,
                                  const OracleConfig& cfg = {},
                                  const std::map<std::string, Value>& initial = {});

/// True iff the instance conflict graph is acyclic.
bool is_serializable(const ExecutedSchedule& s);

/// Calls `visit` with every interleaving (instance index per step) of
/// instances with the given step counts, preserving each instance's order.
/// Returns the number of interleavings.
std::size_t for_each_interleaving(const std::vector<std::size_t>& steps,
                                  const std::function<void(const std::vector<std::size_t>&)>& visit);

}  // namespace mad
