#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "mad/chopper.hpp"
#include "mad/frontend.hpp"

namespace test {

inline std::string
read_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string
fixture_path(const std::string& app, const std::string& file)
{
  return std::string(MAD_FIXTURES) + "/" + app + "/" + file;
}

inline mad::MonolithAR
load_monolith(const std::string& app)
{
  mad::Schema schema = mad::parse_schema(read_file(fixture_path(app, "schema.sql")));
  return mad::parse_functionalities(read_file(fixture_path(app, "functionalities.json")), schema);
}

/// Chopped program of fixture `app` under `decomposition` (a file name in the
/// fixture directory).
inline mad::MicroservicesAR
load_app(const std::string& app, const std::string& decomposition = "decomposition.json")
{
  mad::MonolithAR ar = load_monolith(app);
  mad::Decomposition d =
      mad::parse_decomposition(read_file(fixture_path(app, decomposition)), ar.schema);
  return mad::chop(ar, d);
}

/// Solver executable for solver-backed tests; empty when unavailable.
inline std::string
solver()
{
  const char* s = std::getenv("MAD_SOLVER");
  return s ? s : "";
}

}  // namespace test
