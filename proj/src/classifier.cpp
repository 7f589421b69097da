#include "mad/classifier.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace mad {

const char*
short_name(AnomalyType type)
{
  switch (type)
  {
    case AnomalyType::DirtyRead: return "DR";
    case AnomalyType::DirtyWrite: return "DW";
    case AnomalyType::LostUpdate: return "LU";
    case AnomalyType::LostUpdateOrWriteSkew: return "LU/WS";
    case AnomalyType::NonRepeatableRead: return "NRR";
    case AnomalyType::PhantomRead: return "PR";
    case AnomalyType::ReadSkew: return "RS";
    case AnomalyType::Unknown: return "Unknown";
  }
  return "Unknown";
}

const std::vector<AnomalyType>&
anomaly_columns()
{
  static const std::vector<AnomalyType> columns = {
      AnomalyType::DirtyRead,         AnomalyType::DirtyWrite,  AnomalyType::LostUpdate,
      AnomalyType::LostUpdateOrWriteSkew, AnomalyType::NonRepeatableRead, AnomalyType::PhantomRead,
      AnomalyType::ReadSkew,
  };
  return columns;
}

namespace {

bool
is_insert_or_delete(StatementKind k)
{
  return k == StatementKind::Insert || k == StatementKind::Delete;
}

}  // namespace

AnomalyType
classify(const CycleWitness& w)
{
  const std::size_t n = w.nodes.size();
  std::size_t wr = 0, rw = 0, ww = 0;
  std::set<std::string> read_tables;
  for (std::size_t i = 0; i < n; ++i)
  {
    const WitnessNode& a = w.nodes[i];
    const WitnessNode& b = w.nodes[(i + 1) % n];
    switch (w.edges[i])
    {
      case EdgeKind::WR:
      case EdgeKind::RW:
      {
        const WitnessNode& reader = w.edges[i] == EdgeKind::WR ? b : a;
        const WitnessNode& writer = w.edges[i] == EdgeKind::WR ? a : b;
        if (is_insert_or_delete(writer.kind)) return AnomalyType::PhantomRead;
        read_tables.insert(reader.table);
        (w.edges[i] == EdgeKind::WR ? wr : rw)++;
        break;
      }
      case EdgeKind::WW: ++ww; break;
      default: break;
    }
  }
  if (wr + rw + ww == 0) return AnomalyType::Unknown;
  if (wr == 0 && rw == 0) return AnomalyType::DirtyWrite;
  if (rw == 0) return AnomalyType::DirtyRead;
  if (wr == 0 && ww == 0) return AnomalyType::LostUpdateOrWriteSkew;
  if (wr == 0)
  {
    // RW and WW only: a lost update when the reader of an RW edge is the
    // transaction that later overwrites through a WW edge.
    for (std::size_t i = 0; i < n; ++i)
    {
      if (w.edges[i] != EdgeKind::RW) continue;
      for (std::size_t j = 0; j < n; ++j)
      {
        if (w.edges[j] == EdgeKind::WW && w.nodes[(j + 1) % n].origtx == w.nodes[i].origtx)
        {
          return AnomalyType::LostUpdate;
        }
      }
    }
    return AnomalyType::LostUpdateOrWriteSkew;
  }
  return read_tables.size() == 1 ? AnomalyType::NonRepeatableRead : AnomalyType::ReadSkew;
}

bool
embeds(const CycleWitness& small, const CycleWitness& big)
{
  const std::size_t k = small.nodes.size(), n = big.nodes.size();
  if (k == 0 || k > n) return false;
  std::vector<std::size_t> map(k);

  auto consistent = [&] {
    for (std::size_t i = 0; i < k; ++i)
    {
      std::size_t a = map[i], b = map[(i + 1) % k];
      if (is_dependency(small.edges[i]) && ((a + 1) % n != b || big.edges[a] != small.edges[i])) return false;
    }
    return true;
  };

  // map[0] = start, later nodes at strictly increasing offsets from start.
  std::function<bool(std::size_t, std::size_t, std::size_t)> search = [&](std::size_t i, std::size_t start,
                                                                          std::size_t offset) {
    if (i == k) return consistent();
    for (std::size_t off = offset; off + (k - i) <= n; ++off)
    {
      std::size_t pos = (start + off) % n;
      if (big.nodes[pos].oname != small.nodes[i].oname) continue;
      map[i] = pos;
      if (search(i + 1, start, off + 1)) return true;
    }
    return false;
  };
  for (std::size_t start = 0; start < n; ++start)
  {
    if (big.nodes[start].oname != small.nodes[0].oname) continue;
    map[0] = start;
    if (search(1, start, 1)) return true;
  }
  return false;
}

std::vector<Anomaly>
build_anomalies(std::vector<CycleWitness> witnesses)
{
  std::sort(witnesses.begin(), witnesses.end(), [](const CycleWitness& a, const CycleWitness& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.key() < b.key();
  });
  std::vector<Anomaly> out;
  for (std::size_t i = 0; i < witnesses.size(); ++i)
  {
    Anomaly a;
    a.id = "A" + std::to_string(i + 1);
    a.type = classify(witnesses[i]);
    a.witness = std::move(witnesses[i]);
    out.push_back(std::move(a));
  }
  // Sorted by size, so candidates for embedding come first.
  for (std::size_t i = 0; i < out.size(); ++i)
  {
    std::string any;
    for (std::size_t j = 0; j < i; ++j)
    {
      if (out[j].witness.size() >= out[i].witness.size()) break;
      if (!embeds(out[j].witness, out[i].witness)) continue;
      out[i].core = false;
      if (any.empty()) any = out[j].id;
      if (out[j].core)
      {
        out[i].extends = out[j].id;
        break;
      }
    }
    if (!out[i].core && out[i].extends.empty()) out[i].extends = any;
  }
  return out;
}

namespace {

std::vector<GroupRow>
group_by(const std::vector<Anomaly>& anomalies, std::vector<std::string> (CycleWitness::*key)() const)
{
  std::map<std::vector<std::string>, GroupRow> rows;
  for (const auto& a : anomalies)
  {
    auto k = (a.witness.*key)();
    GroupRow& row = rows[k];
    row.key = k;
    ++row.count;
    std::string t = short_name(a.type);
    if (std::find(row.types.begin(), row.types.end(), t) == row.types.end()) row.types.push_back(t);
  }
  std::vector<GroupRow> out;
  for (auto& [k, row] : rows)
  {
    std::sort(row.types.begin(), row.types.end());
    out.push_back(std::move(row));
  }
  std::stable_sort(out.begin(), out.end(), [](const GroupRow& a, const GroupRow& b) { return a.count > b.count; });
  return out;
}

}  // namespace

Metrics
group_metrics(const std::vector<Anomaly>& anomalies)
{
  Metrics m;
  for (const auto& a : anomalies)
  {
    ++m.total;
    ++m.all_by_type[a.type];
    if (a.core)
    {
      ++m.core;
      ++m.core_by_type[a.type];
    }
    else
    {
      ++m.extensions;
    }
    if (a.type == AnomalyType::Unknown)
    {
      m.warnings.push_back("cycle " + a.id + " matches no anomaly pattern: " + a.witness.key());
    }
  }
  m.by_entities = group_by(anomalies, &CycleWitness::tables);
  m.by_functionalities = group_by(anomalies, &CycleWitness::functionalities);
  m.by_sub_transactions = group_by(anomalies, &CycleWitness::sub_transactions);
  return m;
}

}  // namespace mad
