#pragma once

// Ground SMT-LIB2 encoding of bounded anomalous cycles for one subset of
// functionalities.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "mad/chopper.hpp"

namespace mad {

enum class DepKind
{
  WR,  // write then read of the written value
  RW,  // read then overwrite (anti-dependency)
  WW,  // write then overwrite
};

const char* to_string(DepKind kind);

/// Per ordered pair of operation names, which dependency kinds are
/// structurally possible: same table, compatible reader/writer roles and
/// intersecting written/observed columns.
class ConflictTable
{
 public:
  static ConflictTable build(const MicroservicesAR& m);

  bool feasible(const std::string& from, const std::string& to, DepKind kind) const;
  /// All feasible (from, to) pairs of `kind`, sorted.
  std::vector<std::pair<std::string, std::string>> pairs(DepKind kind) const;
  /// A select against an insert or delete: the conflict may be a phantom.
  bool phantom_capable(const std::string& a, const std::string& b) const;

 private:
  std::map<std::pair<std::string, std::string>, std::array<bool, 3>> d_table;
  std::map<std::pair<std::string, std::string>, bool> d_phantom;
};

/// One operation name of the problem's universe.
struct OpInfo
{
  std::string name;
  std::string functionality;
  std::string sub_transaction;
  std::string microservice;
  std::string table;
  StatementKind kind;
  /// Position in the functionality's statement list.
  std::size_t index;
  bool is_update() const { return kind != StatementKind::Select; }
};

struct CombinationProblem
{
  /// Sorted functionality names.
  std::vector<std::string> subset;
  int mcl = 4;
  /// Every subset functionality must take part in the cycle.
  bool participation = true;
  std::vector<OpInfo> ops;
  std::vector<std::string> sub_transactions;
  /// All microservices of the decomposition, in file order.
  std::vector<std::string> microservices;
  /// Declarations and assertions; no check-sat.
  std::string script;

  const OpInfo& op(const std::string& name) const;
  const OpInfo* find_op(const std::string& name) const;
};

/// Builds the problem for `subset`. Throws std::invalid_argument for unknown
/// functionalities or mcl < 3.
CombinationProblem encode_combination(const MicroservicesAR& m,
                                      const ConflictTable& ct,
                                      std::vector<std::string> subset,
                                      int mcl,
                                      bool participation = true);

/// `comb_<sorted names>.smt2`
std::string smt_file_name(const std::vector<std::string>& subset);

/// SMT-LIB2 symbol names used by the encoding.
namespace smt {
std::string op_constant(int i);  // o_<i>, 1-based
std::string oname_ctor(const std::string& op);
std::string tname_ctor(const std::string& sub_transaction);
std::string fname_ctor(const std::string& functionality);
std::string mname_ctor(std::size_t index);
}  // namespace smt

}  // namespace mad
