#include "mad/report.hpp"

#include <cstdio>
#include <json.hpp>
#include <sstream>

namespace mad {

namespace {

using json = nlohmann::json;

json
group_rows(const std::vector<GroupRow>& rows)
{
  json out = json::array();
  for (const auto& r : rows) out.push_back({{"key", r.key}, {"count", r.count}, {"types", r.types}});
  return out;
}

json
type_counts(const std::map<AnomalyType, std::size_t>& counts)
{
  json out = json::object();
  for (AnomalyType t : anomaly_columns()) out[short_name(t)] = 0;
  out["Unknown"] = 0;
  for (const auto& [t, n] : counts) out[short_name(t)] = n;
  return out;
}

std::string
fixed(double v, int digits)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string
join(const std::vector<std::string>& v)
{
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out + "]";
}

/// `align` holds 'l' or 'r' per column.
std::string
render(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows, const std::string& align)
{
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
  {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& r) {
    std::string out;
    for (std::size_t c = 0; c < r.size(); ++c)
    {
      std::string pad(width[c] - r[c].size(), ' ');
      if (c) out += "  ";
      out += (c < align.size() && align[c] == 'l') ? r[c] + pad : pad + r[c];
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

}  // namespace

std::string
report_json(const RunInfo& info, const AnalysisResult& result, const std::vector<Anomaly>& anomalies, const Metrics& metrics)
{
  json j;
  j["input"] = {{"schema", info.schema},
                {"functionalities", info.functionalities},
                {"decomposition", info.decomposition}};
  j["config"] = {{"mcl", info.mcl},
                 {"threads", info.threads},
                 {"divide_and_conquer", info.divide_and_conquer},
                 {"max_models", info.max_models},
                 {"solver", info.solver},
                 {"solver_timeout_s", info.solver_timeout},
                 {"global_timeout_s", info.global_timeout}};
  j["status"] = result.complete() ? "complete" : "partial";
  j["totals"] = {{"#CA", metrics.core}, {"#TA", metrics.total}, {"#Ext", metrics.extensions}, {"ET(s)", result.seconds}};

  json table = type_counts(metrics.core_by_type);
  table.erase("Unknown");
  table["Ext"] = metrics.extensions;
  table["Total"] = metrics.total;
  j["types"] = table;
  j["types_core"] = type_counts(metrics.core_by_type);
  j["types_all"] = type_counts(metrics.all_by_type);

  json list = json::array();
  for (const auto& a : anomalies)
  {
    json nodes = json::array();
    for (const auto& n : a.witness.nodes)
    {
      nodes.push_back({{"operation", n.oname},
                       {"functionality", n.functionality},
                       {"sub_transaction", n.sub_transaction},
                       {"microservice", n.microservice},
                       {"table", n.table},
                       {"kind", to_string(n.kind)},
                       {"transaction_instance", n.origtx},
                       {"sub_transaction_instance", n.parent}});
    }
    json edges = json::array();
    for (EdgeKind e : a.witness.edges) edges.push_back(to_string(e));
    json item = {{"id", a.id},
                 {"type", short_name(a.type)},
                 {"kind", a.core ? "core" : "extension"},
                 {"cycle", a.witness.key()},
                 {"length", a.witness.size()},
                 {"nodes", nodes},
                 {"edges", edges},
                 {"entities", a.witness.tables()},
                 {"functionalities", a.witness.functionalities()},
                 {"sub_transactions", a.witness.sub_transactions()},
                 {"subset", a.witness.subset}};
    if (!a.core) item["extends"] = a.extends;
    list.push_back(std::move(item));
  }
  j["anomalies"] = list;
  j["groupings"] = {{"entities", group_rows(metrics.by_entities)},
                    {"functionalities", group_rows(metrics.by_functionalities)},
                    {"sub_transactions", group_rows(metrics.by_sub_transactions)}};

  json combos = json::array();
  for (const auto& c : result.combinations)
  {
    json item = {{"subset", c.subset}, {"status", c.status}, {"witnesses", c.witnesses}, {"seconds", c.seconds}};
    if (!c.message.empty()) item["message"] = c.message;
    combos.push_back(std::move(item));
  }
  j["combinations"] = combos;
  json phases = json::array();
  for (const auto& p : result.phases)
  {
    phases.push_back({{"size", p.size}, {"combinations", p.combinations}, {"seconds", p.seconds}});
  }
  j["phases"] = phases;
  j["warnings"] = metrics.warnings;
  return j.dump(2) + "\n";
}

std::string
report_tables(const AnalysisResult& result, const std::vector<Anomaly>& anomalies, const Metrics& metrics)
{
  std::ostringstream out;
  out << render({"#CA", "#TA", "ET(s)"},
                {{std::to_string(metrics.core), std::to_string(metrics.total), fixed(result.seconds, 2)}}, "");
  out << "\n";

  std::vector<std::string> header, row;
  for (AnomalyType t : anomaly_columns())
  {
    header.push_back(short_name(t));
    auto it = metrics.core_by_type.find(t);
    row.push_back(std::to_string(it == metrics.core_by_type.end() ? 0 : it->second));
  }
  header.push_back("Ext");
  row.push_back(std::to_string(metrics.extensions));
  header.push_back("Total");
  row.push_back(std::to_string(metrics.total));
  out << render(header, {row}, "");

  auto grouping = [&](const char* title, const std::vector<GroupRow>& rows) {
    std::vector<std::vector<std::string>> body;
    for (const auto& r : rows) body.push_back({join(r.key), std::to_string(r.count), join(r.types)});
    out << "\n" << render({title, "#", "Types"}, body, "lrl");
  };
  grouping("Entities", metrics.by_entities);
  grouping("Functionalities", metrics.by_functionalities);
  grouping("Sub-transactions", metrics.by_sub_transactions);

  if (!anomalies.empty())
  {
    std::vector<std::vector<std::string>> body;
    for (const auto& a : anomalies)
    {
      body.push_back({a.id, short_name(a.type), a.core ? "core" : "ext of " + a.extends, a.witness.key()});
    }
    out << "\n" << render({"Id", "Type", "Kind", "Cycle"}, body, "llll");
  }
  for (const auto& w : metrics.warnings) out << "\nwarning: " << w << "\n";
  if (!result.complete())
  {
    out << "\nincomplete combinations:\n";
    for (const auto& c : result.combinations)
    {
      if (c.status != "complete") out << "  " << join(c.subset) << ": " << c.status << (c.message.empty() ? "" : " (" + c.message + ")") << "\n";
    }
  }
  return out.str();
}

}  // namespace mad
