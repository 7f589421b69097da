#pragma once

// Anomaly types, core/extension split and grouped metrics.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mad/witness.hpp"

namespace mad {

enum class AnomalyType
{
  DirtyRead,
  DirtyWrite,
  LostUpdate,
  LostUpdateOrWriteSkew,
  NonRepeatableRead,
  PhantomRead,
  ReadSkew,
  Unknown,
};

/// DR, DW, LU, LU/WS, NRR, PR, RS, or "Unknown".
const char* short_name(AnomalyType type);
/// The seven table columns, in order.
const std::vector<AnomalyType>& anomaly_columns();

AnomalyType classify(const CycleWitness& w);

/// `small` maps onto a cyclic, order-preserving subsequence of `big`'s nodes
/// with equal operation names, and each dependency edge of `small` is an edge
/// of `big` with the same label between the mapped nodes. ST/SOT edges may
/// stretch over several edges of `big`.
bool embeds(const CycleWitness& small, const CycleWitness& big);

struct Anomaly
{
  /// `A<n>`, numbered in report order.
  std::string id;
  CycleWitness witness;
  AnomalyType type = AnomalyType::Unknown;
  bool core = true;
  /// Id of an embedded core anomaly, for extensions.
  std::string extends;
};

/// Classifies, sorts by (size, key) and marks cores and extensions. A witness
/// is core iff no strictly shorter witness of the list embeds into it; an
/// extension refers to the shortest, then lexicographically least, embedded
/// core.
std::vector<Anomaly> build_anomalies(std::vector<CycleWitness> witnesses);

struct GroupRow
{
  std::vector<std::string> key;
  std::size_t count = 0;
  /// Short type names, sorted.
  std::vector<std::string> types;
};

struct Metrics
{
  std::size_t core = 0;
  std::size_t total = 0;
  std::size_t extensions = 0;
  /// Core anomalies per type.
  std::map<AnomalyType, std::size_t> core_by_type;
  /// All anomalies per type.
  std::map<AnomalyType, std::size_t> all_by_type;
  std::vector<GroupRow> by_entities;
  std::vector<GroupRow> by_functionalities;
  std::vector<GroupRow> by_sub_transactions;
  std::vector<std::string> warnings;
};

Metrics group_metrics(const std::vector<Anomaly>& anomalies);

}  // namespace mad
