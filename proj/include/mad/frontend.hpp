#pragma once

// Parsers for the three analyzer inputs: the SQL schema, the functionality
// definitions, and the microservices decomposition.

#include <string>
#include <string_view>

#include "mad/ar.hpp"

namespace mad {

/// Parses a sequence of CREATE TABLE statements. Throws InputError.
Schema parse_schema(std::string_view text);

/// Parses the functionality JSON file against `schema`, type-checking every
/// statement. Throws InputError.
MonolithAR parse_functionalities(std::string_view text, const Schema& schema);

/// Parses a JSON object mapping microservice names to entity (table) lists.
/// The clusters must partition the schema's tables. Throws InputError.
Decomposition parse_decomposition(std::string_view text, const Schema& schema);

/// Parses one statement of the SQL subset in the context of functionality `f`
/// (its parameters and the variables bound by `f.statements`). `name` and
/// `path` follow the functionality file conventions.
Statement parse_statement(std::string_view sql,
                          const Schema& schema,
                          const Functionality& f,
                          const std::string& name);

/// Parses a boolean expression over the parameters and bound variables of `f`.
ExprPtr parse_path_condition(std::string_view text, const Functionality& f, const Schema& schema);

std::string print_schema(const Schema& schema);
std::string print_functionalities(const MonolithAR& ar);
std::string print_decomposition(const Decomposition& d);

/// The SQL text of a statement, as accepted by parse_statement.
std::string statement_sql(const Statement& s);

}  // namespace mad

namespace mad {

/// Reads a whole file. Throws InputError naming the path if it cannot.
std::string read_input_file(const std::string& path);

struct MicroservicesAR;

/// Parses the three input files and chops the program. Errors carry the file
/// name. An empty decomposition path selects the single-cluster decomposition.
MicroservicesAR load_application(const std::string& schema_path,
                                 const std::string& functionalities_path,
                                 const std::string& decomposition_path);

}  // namespace mad
