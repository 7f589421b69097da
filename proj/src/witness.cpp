#include "mad/witness.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mad {

const char*
to_string(EdgeKind kind)
{
  switch (kind)
  {
    case EdgeKind::ST: return "ST";
    case EdgeKind::SOT: return "SOT";
    case EdgeKind::WR: return "WR";
    case EdgeKind::RW: return "RW";
    case EdgeKind::WW: return "WW";
  }
  return "?";
}

bool
is_dependency(EdgeKind kind)
{
  return kind == EdgeKind::WR || kind == EdgeKind::RW || kind == EdgeKind::WW;
}

std::size_t
CycleWitness::dependency_count() const
{
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), is_dependency));
}

std::string
CycleWitness::key() const
{
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
  {
    if (i) out += " ";
    out += nodes[i].oname + " -" + to_string(edges[i]) + "->";
  }
  return out;
}

namespace {

std::vector<std::string>
sorted_unique(std::vector<std::string> v)
{
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::vector<std::string>
CycleWitness::functionalities() const
{
  std::vector<std::string> v;
  for (const auto& n : nodes) v.push_back(n.functionality);
  return sorted_unique(v);
}

std::vector<std::string>
CycleWitness::sub_transactions() const
{
  std::vector<std::string> v;
  for (const auto& n : nodes) v.push_back(n.sub_transaction);
  return sorted_unique(v);
}

std::vector<std::string>
CycleWitness::tables() const
{
  std::vector<std::string> v;
  for (const auto& n : nodes) v.push_back(n.table);
  return sorted_unique(v);
}

CycleWitness
canonicalize(CycleWitness w)
{
  const std::size_t n = w.nodes.size();
  if (n == 0) return w;
  auto less_rotation = [&](std::size_t a, std::size_t b) {
    for (std::size_t k = 0; k < n; ++k)
    {
      const auto& na = w.nodes[(a + k) % n];
      const auto& nb = w.nodes[(b + k) % n];
      if (na.oname != nb.oname) return na.oname < nb.oname;
      EdgeKind ea = w.edges[(a + k) % n], eb = w.edges[(b + k) % n];
      if (ea != eb) return ea < eb;
    }
    return false;
  };
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r)
  {
    if (less_rotation(r, best)) best = r;
  }
  std::rotate(w.nodes.begin(), w.nodes.begin() + static_cast<long>(best), w.nodes.end());
  std::rotate(w.edges.begin(), w.edges.begin() + static_cast<long>(best), w.edges.end());

  std::map<int, int> tx, parent;
  for (auto& node : w.nodes)
  {
    node.origtx = tx.emplace(node.origtx, static_cast<int>(tx.size())).first->second;
    node.parent = parent.emplace(node.parent, static_cast<int>(parent.size())).first->second;
  }
  return w;
}

void
validate_witness(const CycleWitness& w, int mcl)
{
  auto fail = [&](const std::string& why) {
    throw InternalConsistencyError("invalid cycle [" + w.key() + "]: " + why);
  };
  const std::size_t n = w.nodes.size();
  if (w.edges.size() != n) fail("edge count differs from node count");
  if (n < 3 || n > static_cast<std::size_t>(mcl)) fail("cycle length out of range");
  std::size_t deps = w.dependency_count();
  if (deps == n) fail("no ST or SOT edge");
  if (deps < 2) fail("fewer than two dependency edges");

  bool shaped = false;
  for (std::size_t i = 0; i < n; ++i)
  {
    if (!is_dependency(w.edges[i]) && is_dependency(w.edges[(i + 1) % n])
        && is_dependency(w.edges[(i + n - 1) % n]))
    {
      shaped = true;
    }
  }
  if (!shaped) fail("no ST/SOT edge between two dependency edges");

  for (std::size_t i = 0; i < n; ++i)
  {
    const WitnessNode& a = w.nodes[i];
    const WitnessNode& b = w.nodes[(i + 1) % n];
    EdgeKind e = w.edges[i];
    switch (e)
    {
      case EdgeKind::ST:
        if (a.parent != b.parent || a.origtx != b.origtx) fail("ST edge across instances");
        break;
      case EdgeKind::SOT:
        if (a.origtx != b.origtx || a.parent == b.parent) fail("SOT edge with wrong instances");
        break;
      default:
      {
        if (a.origtx == b.origtx) fail("dependency edge inside one transaction instance");
        if (a.table != b.table) fail("dependency edge across tables");
        bool au = a.kind != StatementKind::Select, bu = b.kind != StatementKind::Select;
        if (e == EdgeKind::WR && !(au && !bu)) fail("WR edge roles");
        if (e == EdgeKind::RW && !(!au && bu)) fail("RW edge roles");
        if (e == EdgeKind::WW && !(au && bu)) fail("WW edge roles");
        if (!(a.otime < b.otime)) fail("otime does not increase along a dependency edge");
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = 0; j < n; ++j)
    {
      if (i == j) continue;
      const WitnessNode& a = w.nodes[i];
      const WitnessNode& b = w.nodes[j];
      if (a.parent == b.parent && (a.origtx != b.origtx || a.sub_transaction != b.sub_transaction))
      {
        fail("sub-transaction instance spans operations of different sub-transactions");
      }
      if (a.origtx == b.origtx)
      {
        if (a.functionality != b.functionality) fail("transaction instance spans functionalities");
        if (a.oname == b.oname) fail("operation repeated inside one transaction instance");
        if (a.index < b.index && !(a.otime < b.otime)) fail("program order violated");
      }
      if (a.otime == b.otime) fail("equal otime values");
    }
  }
}

}  // namespace mad
