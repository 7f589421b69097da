#include "mad/frontend.hpp"

#include "mad/chopper.hpp"

#include <algorithm>
#include <cctype>
#include <json.hpp>
#include <fstream>
#include <set>
#include <sstream>

namespace mad {

namespace {

using json = nlohmann::ordered_json;

bool
is_identifier(const std::string& s)
{
  if (s.empty()) return false;
  auto start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  if (!start(s[0])) return false;
  for (char c : s)
  {
    if (!start(c) && !std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::pair<std::size_t, std::size_t>
position_of(std::string_view text, std::size_t offset)
{
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
  {
    if (text[i] == '\n')
    {
      ++line;
      col = 1;
    }
    else
    {
      ++col;
    }
  }
  return {line, col};
}

json
load_json(std::string_view text)
{
  try
  {
    return json::parse(text);
  }
  catch (const json::parse_error& e)
  {
    auto [line, col] = position_of(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    auto colon = what.find("syntax error");
    throw InputError(colon == std::string::npos ? what : what.substr(colon), line, col);
  }
}

/// Locates the source line of a JSON string value for error reporting.
class Locator
{
 public:
  explicit Locator(std::string_view text) : d_text(text) {}

  /// Line of the next occurrence of `value` (as a JSON string literal) at or
  /// after the previous match; 0 when not found.
  std::size_t line_of(const std::string& value)
  {
    std::string needle = json(value).dump();
    auto pos = d_text.find(needle, d_cursor);
    if (pos == std::string_view::npos) pos = d_text.find(needle);
    if (pos == std::string_view::npos) return 0;
    d_cursor = pos;
    return position_of(d_text, pos).first;
  }

 private:
  std::string_view d_text;
  std::size_t d_cursor = 0;
};

const json&
require(const json& obj, const char* key, const std::string& where)
{
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where + ": missing \"" + key + "\"");
  return *it;
}

std::string
require_string(const json& v, const std::string& what)
{
  if (!v.is_string()) throw InputError(what + " must be a string");
  return v.get<std::string>();
}

void
check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
  for (auto it = obj.begin(); it != obj.end(); ++it)
  {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) throw InputError(where + ": unknown key \"" + it.key() + "\"");
  }
}

InputError
relocate(const InputError& e, std::size_t line, const std::string& context)
{
  return InputError(context + ": " + e.message(), line, 0);
}

}  // namespace

MonolithAR
parse_functionalities(std::string_view text, const Schema& schema)
{
  json root = load_json(text);
  Locator loc(text);
  if (!root.is_object()) throw InputError("functionality file must be a JSON object", 1, 1);
  check_keys(root, {"functionalities"}, "functionality file");
  const json& list = require(root, "functionalities", "functionality file");
  if (!list.is_array()) throw InputError("\"functionalities\" must be an array");

  MonolithAR ar;
  ar.schema = schema;
  std::set<std::string> statement_names;

  for (const json& jf : list)
  {
    if (!jf.is_object()) throw InputError("functionality entries must be objects");
    Functionality f;
    f.name = require_string(require(jf, "name", "functionality"), "functionality name");
    std::size_t fline = loc.line_of(f.name);
    std::string where = "functionality '" + f.name + "'";
    if (!is_identifier(f.name)) throw InputError(where + ": name is not an identifier", fline);
    if (ar.find_functionality(f.name)) throw InputError("duplicate " + where, fline);
    check_keys(jf, {"name", "params", "statements"}, where);

    if (auto it = jf.find("params"); it != jf.end())
    {
      if (!it->is_array()) throw InputError(where + ": \"params\" must be an array", fline);
      for (const json& jp : *it)
      {
        if (!jp.is_object()) throw InputError(where + ": params must be objects", fline);
        check_keys(jp, {"name", "type"}, where);
        Parameter p;
        p.name = require_string(require(jp, "name", where), "parameter name");
        std::string type = require_string(require(jp, "type", where), "parameter type");
        auto t = value_type_from_string(type);
        if (!t)
        {
          throw InputError(where + ": unknown parameter type '" + type + "'", loc.line_of(type));
        }
        p.type = *t;
        if (!is_identifier(p.name))
        {
          throw InputError(where + ": parameter name '" + p.name + "' is not an identifier", fline);
        }
        if (f.find_param(p.name))
        {
          throw InputError(where + ": duplicate parameter '" + p.name + "'", fline);
        }
        f.params.push_back(p);
      }
    }

    if (auto it = jf.find("statements"); it != jf.end())
    {
      if (!it->is_array()) throw InputError(where + ": \"statements\" must be an array", fline);
      std::size_t index = 0;
      for (const json& js : *it)
      {
        if (!js.is_object()) throw InputError(where + ": statements must be objects", fline);
        check_keys(js, {"name", "sql", "bind", "path"}, where);
        std::string name = f.name + "_s" + std::to_string(index);
        if (auto n = js.find("name"); n != js.end()) name = require_string(*n, "statement name");
        std::string sql = require_string(require(js, "sql", where), "statement sql");
        std::size_t sline = loc.line_of(sql);
        std::string context = where + ", statement '" + name + "'";
        if (!is_identifier(name)) throw InputError(context + ": name is not an identifier", sline);
        if (!statement_names.insert(name).second)
        {
          throw InputError("duplicate statement name '" + name + "'", sline);
        }

        Statement s;
        try
        {
          s = parse_statement(sql, schema, f, name);
        }
        catch (const InputError& e)
        {
          throw relocate(e, sline, context);
        }

        auto scope = f.variable_types(schema);
        if (auto b = js.find("bind"); b != js.end())
        {
          if (!b->is_object()) throw InputError(context + ": \"bind\" must be an object", sline);
          if (s.kind != StatementKind::Select)
          {
            throw InputError(context + ": only selects may bind variables", sline);
          }
          for (auto bi = b->begin(); bi != b->end(); ++bi)
          {
            Binding binding{bi.key(), require_string(bi.value(), "bound column")};
            if (!is_identifier(binding.variable))
            {
              throw InputError(context + ": variable '" + binding.variable
                                   + "' is not an identifier",
                               sline);
            }
            if (f.find_param(binding.variable) || scope.count(binding.variable))
            {
              throw InputError(context + ": variable '" + binding.variable
                                   + "' is already defined",
                               sline);
            }
            if (std::find(s.read_columns.begin(), s.read_columns.end(), binding.column)
                == s.read_columns.end())
            {
              throw InputError(context + ": bound column '" + binding.column
                                   + "' is not in the select list",
                               sline);
            }
            for (const auto& prev : s.bindings)
            {
              if (prev.variable == binding.variable)
              {
                throw InputError(context + ": variable '" + binding.variable
                                     + "' bound twice",
                                 sline);
              }
            }
            s.bindings.push_back(binding);
          }
        }

        if (auto p = js.find("path"); p != js.end())
        {
          std::string path = require_string(*p, "path condition");
          try
          {
            s.path_condition = parse_path_condition(path, f, schema);
          }
          catch (const InputError& e)
          {
            throw relocate(e, loc.line_of(path), context + ", path condition");
          }
        }
        f.statements.push_back(std::move(s));
        ++index;
      }
    }
    ar.functionalities.push_back(std::move(f));
  }
  return ar;
}

Decomposition
parse_decomposition(std::string_view text, const Schema& schema)
{
  json root = load_json(text);
  Locator loc(text);
  if (!root.is_object())
  {
    throw InputError("decomposition must be a JSON object mapping microservices to entities", 1, 1);
  }
  Decomposition d;
  std::map<std::string, std::string> owner;
  for (auto it = root.begin(); it != root.end(); ++it)
  {
    Cluster c;
    c.microservice = it.key();
    std::size_t line = loc.line_of(c.microservice);
    if (c.microservice.empty()) throw InputError("empty microservice name", line);
    if (!it.value().is_array())
    {
      throw InputError("microservice '" + c.microservice + "' must map to an array of entities",
                       line);
    }
    for (const json& je : it.value())
    {
      std::string table = require_string(je, "entity name");
      if (!schema.find_table(table))
      {
        throw InputError("entity '" + table + "' of microservice '" + c.microservice
                             + "' is not in the schema",
                         line);
      }
      auto [pos, fresh] = owner.emplace(table, c.microservice);
      if (!fresh)
      {
        throw InputError("entity '" + table + "' appears in both '" + pos->second + "' and '"
                             + c.microservice + "'",
                         line);
      }
      c.tables.push_back(table);
    }
    d.clusters.push_back(std::move(c));
  }
  for (const auto& t : schema.tables)
  {
    if (!owner.count(t.name))
    {
      throw InputError("entity '" + t.name + "' is missing from the decomposition");
    }
  }
  return d;
}

std::string
print_functionalities(const MonolithAR& ar)
{
  json list = json::array();
  for (const auto& f : ar.functionalities)
  {
    json jf;
    jf["name"] = f.name;
    jf["params"] = json::array();
    for (const auto& p : f.params)
    {
      jf["params"].push_back({{"name", p.name}, {"type", to_string(p.type)}});
    }
    jf["statements"] = json::array();
    for (const auto& s : f.statements)
    {
      json js;
      js["name"] = s.name;
      js["sql"] = statement_sql(s);
      if (!s.bindings.empty())
      {
        json b = json::object();
        for (const auto& binding : s.bindings) b[binding.variable] = binding.column;
        js["bind"] = b;
      }
      if (s.path_condition && !is_trivially_true(s.path_condition))
      {
        js["path"] = to_sql(s.path_condition);
      }
      jf["statements"].push_back(js);
    }
    list.push_back(jf);
  }
  json root;
  root["functionalities"] = list;
  return root.dump(2) + "\n";
}

std::string
print_decomposition(const Decomposition& d)
{
  json root = json::object();
  for (const auto& c : d.clusters) root[c.microservice] = c.tables;
  return root.dump(2) + "\n";
}

std::string
read_input_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MicroservicesAR
load_application(const std::string& schema_path,
                 const std::string& functionalities_path,
                 const std::string& decomposition_path)
{
  auto parse = [](const std::string& path, auto&& f) {
    std::string text = read_input_file(path);
    try
    {
      return f(text);
    }
    catch (const InputError& e)
    {
      throw e.in_file(path);
    }
  };
  Schema schema = parse(schema_path, [](const std::string& t) { return parse_schema(t); });
  MonolithAR ar = parse(functionalities_path, [&](const std::string& t) { return parse_functionalities(t, schema); });
  Decomposition d = decomposition_path.empty()
                        ? Decomposition::mono(schema)
                        : parse(decomposition_path, [&](const std::string& t) { return parse_decomposition(t, schema); });
  return chop(ar, d);
}

}  // namespace mad
