#include "mad/chopper.hpp"

#include <json.hpp>

#include "mad/frontend.hpp"

namespace mad {

const Functionality&
MicroservicesAR::functionality_of(const SubTransaction& t) const
{
  const Functionality* f = monolith.find_functionality(t.functionality);
  if (!f) throw std::out_of_range("unknown functionality " + t.functionality);
  return *f;
}

const Statement&
MicroservicesAR::statement(const OpRef& ref) const
{
  return monolith.functionalities.at(ref.functionality).statements.at(ref.statement);
}

const OpRef&
MicroservicesAR::op(const std::string& statement_name) const
{
  auto it = d_ops.find(statement_name);
  if (it == d_ops.end()) throw std::out_of_range("unknown operation " + statement_name);
  return it->second;
}

std::vector<const SubTransaction*>
MicroservicesAR::sub_transactions_of(const std::string& functionality) const
{
  std::vector<const SubTransaction*> out;
  for (const auto& t : sub_transactions)
  {
    if (t.functionality == functionality) out.push_back(&t);
  }
  return out;
}

void
MicroservicesAR::index()
{
  d_ops.clear();
  for (std::size_t ti = 0; ti < sub_transactions.size(); ++ti)
  {
    const auto& t = sub_transactions[ti];
    std::size_t fi = 0;
    while (monolith.functionalities[fi].name != t.functionality) ++fi;
    for (std::size_t si : t.statements)
    {
      d_ops[monolith.functionalities[fi].statements[si].name] = OpRef{fi, si, ti};
    }
  }
}

MicroservicesAR
chop(const MonolithAR& ar, const Decomposition& d)
{
  MicroservicesAR m;
  m.monolith = ar;
  m.decomposition = d;
  for (const auto& f : ar.functionalities)
  {
    std::size_t k = 0;
    for (std::size_t i = 0; i < f.statements.size(); ++i)
    {
      const std::string& ms = d.microservice_of(f.statements[i].table);
      if (i == 0 || m.sub_transactions.back().microservice != ms)
      {
        m.sub_transactions.push_back({f.name + "_" + std::to_string(k++), f.name, ms, {}});
      }
      m.sub_transactions.back().statements.push_back(i);
    }
  }
  m.index();
  return m;
}

std::string
chop_to_json(const MicroservicesAR& m)
{
  using json = nlohmann::ordered_json;
  json subs = json::array();
  for (const auto& t : m.sub_transactions)
  {
    const Functionality& f = m.functionality_of(t);
    json ops = json::array();
    for (std::size_t si : t.statements)
    {
      const Statement& s = f.statements[si];
      ops.push_back({{"name", s.name}, {"sql", statement_sql(s)}});
    }
    subs.push_back({{"name", t.name},
                    {"original_transaction", t.functionality},
                    {"microservice", t.microservice},
                    {"operations", ops}});
  }
  json root;
  root["sub_transactions"] = subs;
  return root.dump(2) + "\n";
}

}  // namespace mad
