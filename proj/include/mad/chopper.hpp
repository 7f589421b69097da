#pragma once

// Transaction chopping: each functionality is split into maximal runs of
// statements whose tables belong to the same microservice.

#include <map>
#include <string>
#include <vector>

#include "mad/ar.hpp"

namespace mad {

struct SubTransaction
{
  /// `<functionality>_<k>`, k being the 0-based split index.
  std::string name;
  std::string functionality;
  std::string microservice;
  /// Indices into the parent functionality's statement list, ascending.
  std::vector<std::size_t> statements;

  bool operator==(const SubTransaction&) const = default;
};

/// Where a statement (operation name) lives in the chopped program.
struct OpRef
{
  std::size_t functionality;  // index into monolith.functionalities
  std::size_t statement;      // index into that functionality's statements
  std::size_t sub_transaction;  // index into sub_transactions
};

struct MicroservicesAR
{
  MonolithAR monolith;
  Decomposition decomposition;
  /// Grouped per functionality, in functionality then split order.
  std::vector<SubTransaction> sub_transactions;

  const Functionality& functionality_of(const SubTransaction& t) const;
  const Statement& statement(const OpRef& ref) const;
  const OpRef& op(const std::string& statement_name) const;
  const std::map<std::string, OpRef>& ops() const { return d_ops; }
  /// Sub-transactions of one functionality, in split order.
  std::vector<const SubTransaction*> sub_transactions_of(const std::string& functionality) const;

  void index();

 private:
  std::map<std::string, OpRef> d_ops;
};

MicroservicesAR chop(const MonolithAR& ar, const Decomposition& d);

/// JSON rendering of the chopped program, for programmer review.
std::string chop_to_json(const MicroservicesAR& m);

}  // namespace mad
