#pragma once

// Decoded anomalous cycles.

#include <stdexcept>
#include <string>
#include <vector>

#include "mad/ar.hpp"

namespace mad {

/// Declaration order is the canonical ordering of edge labels.
enum class EdgeKind
{
  ST,
  SOT,
  WR,
  RW,
  WW,
};

const char* to_string(EdgeKind kind);
bool is_dependency(EdgeKind kind);

/// A decoded model broke an invariant the encoding guarantees.
class InternalConsistencyError : public std::logic_error
{
 public:
  using std::logic_error::logic_error;
};

struct WitnessNode
{
  std::string oname;
  std::string functionality;
  std::string sub_transaction;
  std::string microservice;
  std::string table;
  StatementKind kind = StatementKind::Select;
  /// Position in the functionality's statement list.
  std::size_t index = 0;
  /// Instance ids, numbered by first appearance along the cycle.
  int origtx = 0;
  int parent = 0;
  long long otime = 0;

  bool operator==(const WitnessNode&) const = default;
};

struct CycleWitness
{
  std::vector<WitnessNode> nodes;
  /// edges[i] leads from nodes[i] to nodes[(i + 1) % size].
  std::vector<EdgeKind> edges;
  /// Functionality subset of the problem that produced it.
  std::vector<std::string> subset;

  std::size_t size() const { return nodes.size(); }
  std::size_t dependency_count() const;

  /// Canonical text such as `A -RW-> B -SOT-> C -WR-> D -SOT->`.
  std::string key() const;
  /// Sorted, de-duplicated names.
  std::vector<std::string> functionalities() const;
  std::vector<std::string> sub_transactions() const;
  std::vector<std::string> tables() const;
};

/// Rotates to the lexicographically least (oname, edge) sequence and renumbers
/// instance ids by first appearance.
CycleWitness canonicalize(CycleWitness w);

/// Checks the decoded cycle invariants: 3..mcl edges, at least one ST/SOT
/// edge, at least two dependency edges, edge labels consistent with instance
/// ids and operation roles, otime increasing along dependency edges and along
/// program order. Throws InternalConsistencyError.
void validate_witness(const CycleWitness& w, int mcl);

}  // namespace mad
