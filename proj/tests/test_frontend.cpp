#include <doctest.h>

#include <functional>
#include <json.hpp>
#include <random>
#include <set>

#include "support.hpp"

using namespace mad;

namespace {

const char* kBankSchema = R"(
CREATE TABLE Account (
  clientId INT,
  balance INT,
  PRIMARY KEY (clientId)
);

CREATE TABLE Wallet (
  clientId INT,
  balance INT,
  PRIMARY KEY (clientId)
);
)";

std::string
error_of(const std::function<void()>& f)
{
  try
  {
    f();
  }
  catch (const InputError& e)
  {
    return e.what();
  }
  return "";
}

bool
contains(const std::string& s, const std::string& part)
{
  return s.find(part) != std::string::npos;
}

const char* kTypedSchema = R"(
CREATE TABLE T (
  k INT PRIMARY KEY,
  i INT,
  r REAL,
  s VARCHAR(20),
  b BOOLEAN
);
)";

Functionality
typed_functionality()
{
  Functionality f;
  f.name = "F";
  f.params = {{"pi", ValueType::Int},
              {"pr", ValueType::Real},
              {"ps", ValueType::String},
              {"pb", ValueType::Boolean}};
  return f;
}

/// Random well-typed expressions over table T and the parameters above.
class ExprGen
{
 public:
  explicit ExprGen(unsigned seed) : d_rng(seed) {}

  /// Off for SET and VALUES expressions, which may not read columns.
  bool columns = true;

  std::string gen(ValueType t, int depth)
  {
    bool leaf = depth <= 0 || pick(3) == 0;
    switch (t)
    {
      case ValueType::Int:
        if (leaf) return one_of({std::to_string(pick(50)), col("i"), col("k"), ":pi"});
        return "(" + gen(ValueType::Int, depth - 1) + " " + one_of({"+", "-", "*", "/"}) + " "
               + gen(ValueType::Int, depth - 1) + ")";
      case ValueType::Real:
        if (leaf) return one_of({"2.5", col("r"), ":pr", "0.125"});
        return "(" + gen(numeric(), depth - 1) + " " + one_of({"+", "-", "*"}) + " "
               + gen(ValueType::Real, depth - 1) + ")";
      case ValueType::String:
        return one_of({"'x'", col("s"), ":ps", "'it''s'"});
      case ValueType::Boolean:
        if (leaf) return one_of({col("b"), ":pb", "TRUE", "FALSE"});
        switch (pick(5))
        {
          case 0:
            return "(NOT (" + gen(ValueType::Boolean, depth - 1) + "))";
          case 1:
            return "(" + gen(ValueType::Boolean, depth - 1) + " AND "
                   + gen(ValueType::Boolean, depth - 1) + ")";
          case 2:
            return "(" + gen(ValueType::Boolean, depth - 1) + " OR "
                   + gen(ValueType::Boolean, depth - 1) + ")";
          case 3:
            return "(" + gen(numeric(), depth - 1) + " "
                   + one_of({"=", "<>", "<", "<=", ">", ">="}) + " " + gen(numeric(), depth - 1)
                   + ")";
          default:
          {
            ValueType u = pick(2) ? ValueType::String : ValueType::Boolean;
            return "(" + gen(u, depth - 1) + " " + one_of({"=", "<>"}) + " " + gen(u, depth - 1)
                   + ")";
          }
        }
    }
    return "";
  }

  /// A boolean-context expression with exactly one type error.
  std::string ill_typed(int depth)
  {
    switch (pick(6))
    {
      case 0: return gen(ValueType::Int, depth) + " = " + gen(ValueType::String, 0);
      case 1: return "(" + gen(ValueType::String, 0) + " + " + gen(ValueType::Int, depth) + ") > 0";
      case 2: return "NOT " + gen(ValueType::Int, depth);
      case 3: return gen(ValueType::Boolean, depth) + " AND " + gen(ValueType::Int, depth);
      case 4: return gen(ValueType::String, 0) + " < " + gen(ValueType::String, 0);
      default: return gen(ValueType::Int, depth);
    }
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(d_rng); }

 private:
  std::mt19937 d_rng;

  std::string col(const char* name) { return columns ? name : ":p" + std::string(1, name[0] == 'k' ? 'i' : name[0]); }

  ValueType numeric() { return pick(2) ? ValueType::Int : ValueType::Real; }

  std::string one_of(std::initializer_list<std::string> xs)
  {
    return *(xs.begin() + pick(xs.size()));
  }
};

}  // namespace

TEST_CASE("schema: worked example")
{
  Schema s = parse_schema(kBankSchema);
  REQUIRE(s.tables.size() == 2);
  CHECK(s.tables[0].name == "Account");
  CHECK(s.tables[1].name == "Wallet");
  for (const auto& t : s.tables)
  {
    REQUIRE(t.columns.size() == 2);
    CHECK(t.columns[0] == Column{"clientId", ValueType::Int});
    CHECK(t.columns[1] == Column{"balance", ValueType::Int});
    CHECK(t.primary_key == std::vector<std::string>{"clientId"});
  }
}

TEST_CASE("schema: empty input has no tables")
{
  CHECK(parse_schema("").tables.empty());
  CHECK(parse_schema("  -- nothing here\n").tables.empty());
}

TEST_CASE("schema: errors")
{
  CHECK(contains(error_of([] { parse_schema("CREATE TABLE t (a INT, a INT, PRIMARY KEY (a))"); }),
                 "duplicate column"));
  CHECK(contains(error_of([] {
                   parse_schema("CREATE TABLE t (a INT PRIMARY KEY); CREATE TABLE t (b INT PRIMARY KEY);");
                 }),
                 "duplicate table"));
  CHECK(contains(error_of([] {
                   parse_schema("CREATE TABLE t (a INT, b INT, PRIMARY KEY (a), FOREIGN KEY (b) REFERENCES u(x))");
                 }),
                 "FOREIGN KEY unsupported"));
  CHECK(contains(error_of([] { parse_schema("CREATE TABLE t (a INT PRIMARY KEY, b INT REFERENCES u(x))"); }),
                 "FOREIGN KEY unsupported"));
  CHECK(contains(error_of([] { parse_schema("CREATE TABLE t (a INT)"); }), "no PRIMARY KEY"));
  CHECK(contains(error_of([] { parse_schema("CREATE TABLE t (a DATE PRIMARY KEY)"); }),
                 "unsupported column type"));
  CHECK(contains(error_of([] { parse_schema("CREATE TABLE t (a INT PRIMARY KEY, PRIMARY KEY (a))"); }),
                 "more than one PRIMARY KEY"));

  std::string e = error_of([] { parse_schema("CREATE TABLE t (\n  a INT\n  b INT)"); });
  CHECK(contains(e, "syntax error: expected"));
  CHECK(contains(e, "line 3"));
}

TEST_CASE("schema: print and re-parse round-trips")
{
  Schema s = parse_schema(kTypedSchema);
  CHECK(parse_schema(print_schema(s)) == s);
  Schema b = parse_schema(kBankSchema);
  CHECK(parse_schema(print_schema(b)) == b);
}

TEST_CASE("functionalities: worked example")
{
  MonolithAR ar = test::load_monolith("bank");
  REQUIRE(ar.functionalities.size() == 2);
  const Functionality& total = ar.functionalities[0];
  const Functionality& transfer = ar.functionalities[1];
  CHECK(total.name == "Total");
  CHECK(transfer.name == "Transfer");
  REQUIRE(total.statements.size() == 2);
  REQUIRE(transfer.statements.size() == 2);
  CHECK(total.statements[0].kind == StatementKind::Select);
  CHECK(total.statements[0].table == "Account");
  CHECK(total.statements[1].kind == StatementKind::Select);
  CHECK(total.statements[1].table == "Wallet");
  CHECK(transfer.statements[0].kind == StatementKind::Update);
  CHECK(transfer.statements[0].table == "Account");
  CHECK(transfer.statements[1].kind == StatementKind::Update);
  CHECK(transfer.statements[1].table == "Wallet");
  CHECK(total.statements[0].name == "Total_s0");
  CHECK(transfer.statements[1].name == "Transfer_s1");
  CHECK(is_trivially_true(total.statements[0].path_condition));
  CHECK(total.variable_types(ar.schema).at("account_balance") == ValueType::Int);
}

TEST_CASE("functionalities: zero statements accepted")
{
  Schema s = parse_schema(kBankSchema);
  MonolithAR ar = parse_functionalities(R"({"functionalities":[{"name":"Noop","params":[],"statements":[]}]})", s);
  REQUIRE(ar.functionalities.size() == 1);
  CHECK(ar.functionalities[0].statements.empty());
}

TEST_CASE("functionalities: rejected statements")
{
  Schema s = parse_schema(kBankSchema);
  auto fails = [&](const std::string& sql, const std::string& extra = "") {
    std::string text = R"({"functionalities":[{"name":"F","params":[{"name":"a","type":"int"},{"name":"c","type":"int"}],"statements":[)"
                       + extra + R"({"sql":")" + sql + R"("}]}]})";
    return error_of([&] { parse_functionalities(text, s); });
  };
  CHECK(contains(fails("UPDATE Account SET balance = balance - :a WHERE clientId = :c"),
                 "implicit update unsupported"));
  CHECK(contains(fails("SELECT balance FROM Account, Wallet WHERE clientId = :c"),
                 "join or multi-table statement unsupported"));
  CHECK(contains(fails("SELECT balance FROM Account JOIN Wallet ON clientId = clientId"),
                 "join or multi-table statement unsupported"));
  CHECK(contains(fails("SELECT Wallet.balance FROM Account"), "join or multi-table"));
  CHECK(contains(fails("SELECT balance FROM Nope"), "unknown table"));
  CHECK(contains(fails("SELECT nope FROM Account"), "unknown column"));
  CHECK(contains(fails("SELECT balance FROM Account WHERE clientId = 'x'"), "type mismatch"));
  CHECK(contains(fails("SELECT balance FROM Account WHERE clientId = :missing"), "unbound variable"));
  CHECK(contains(fails("SELECT balance FROM Account WHERE balance"), "type mismatch"));
  CHECK(contains(fails("DELETE FROM Account WHERE clientId = :c ORDER BY balance"), "ORDER"));
  CHECK(contains(fails("INSERT INTO Account (balance) VALUES (:a)"), "primary-key column"));
  CHECK(contains(fails("INSERT INTO Account (clientId, balance) VALUES (:c)"), "fewer VALUES"));
  CHECK(contains(fails("SELECT COUNT(balance) FROM Account"), "function call"));
  // A variable is visible only after the select that binds it.
  CHECK(contains(fails("SELECT balance FROM Wallet WHERE clientId = :v"), "unbound variable"));
  CHECK(fails("SELECT balance FROM Wallet WHERE balance = :v",
              R"({"sql":"SELECT balance FROM Account WHERE clientId = :c","bind":{"v":"balance"}},)")
            .empty());
}

TEST_CASE("functionalities: error reports the line of the statement")
{
  Schema s = parse_schema(kBankSchema);
  std::string text = "{\"functionalities\": [\n  {\"name\": \"F\",\n   \"statements\": [\n"
                     "     {\"sql\": \"SELECT nope FROM Account\"}]}]}";
  try
  {
    parse_functionalities(text, s);
    FAIL("expected an error");
  }
  catch (const InputError& e)
  {
    CHECK(e.line() == 4);
    CHECK(contains(e.what(), "unknown column"));
  }
}

TEST_CASE("functionalities: bindings and path conditions")
{
  Schema s = parse_schema(kBankSchema);
  const char* text = R"({"functionalities":[{"name":"F","params":[{"name":"c","type":"int"}],
    "statements":[
      {"name":"read","sql":"SELECT balance FROM Account WHERE clientId = :c","bind":{"bal":"balance"}},
      {"sql":"UPDATE Wallet SET balance = :bal WHERE clientId = :c","path":"bal > 10 AND :c <> 0"}]}]})";
  MonolithAR ar = parse_functionalities(text, s);
  const auto& st = ar.functionalities[0].statements;
  CHECK(st[0].name == "read");
  CHECK(st[0].bindings == std::vector<Binding>{{"bal", "balance"}});
  CHECK(st[1].name == "F_s1");
  CHECK(to_sql(st[1].path_condition) == ":bal > 10 AND :c <> 0");

  CHECK(contains(error_of([&] {
                   parse_functionalities(R"({"functionalities":[{"name":"F","statements":[
                     {"sql":"SELECT balance FROM Account","bind":{"x":"clientId"}}]}]})",
                                         s);
                 }),
                 "not in the select list"));
  CHECK(contains(error_of([&] {
                   parse_functionalities(R"({"functionalities":[{"name":"F","statements":[
                     {"sql":"SELECT balance FROM Account","path":"x = 1"}]}]})",
                                         s);
                 }),
                 "unbound variable"));
  CHECK(contains(error_of([&] {
                   parse_functionalities(R"({"functionalities":[{"name":"F","statements":[]},
                     {"name":"F","statements":[]}]})",
                                         s);
                 }),
                 "duplicate functionality"));
}

TEST_CASE("functionalities: print and re-parse round-trips")
{
  MonolithAR ar = test::load_monolith("bank");
  CHECK(parse_functionalities(print_functionalities(ar), ar.schema) == ar);
}

TEST_CASE("property: random well-typed statements are accepted and round-trip")
{
  Schema schema = parse_schema(kTypedSchema);
  Functionality f = typed_functionality();
  ExprGen gen(20261015);
  for (int n = 0; n < 400; ++n)
  {
    std::string where = gen.gen(ValueType::Boolean, 4);
    std::string sql;
    switch (gen.pick(4))
    {
      case 0: sql = "SELECT i, s FROM T WHERE " + where; break;
      case 1:
        gen.columns = false;
        sql = "UPDATE T SET r = " + gen.gen(ValueType::Real, 3) + ", i = :pi WHERE " + where;
        break;
      case 2: sql = "DELETE FROM T WHERE " + where; break;
      default:
        gen.columns = false;
        sql = "INSERT INTO T (k, s, b) VALUES (" + gen.gen(ValueType::Int, 3) + ", :ps, "
              + gen.gen(ValueType::Boolean, 2) + ")";
    }
    gen.columns = true;
    CAPTURE(sql);
    Statement s;
    REQUIRE_NOTHROW(s = parse_statement(sql, schema, f, "x"));
    Statement again = parse_statement(statement_sql(s), schema, f, "x");
    CHECK(again == s);
  }
}

TEST_CASE("property: random ill-typed statements are rejected")
{
  Schema schema = parse_schema(kTypedSchema);
  Functionality f = typed_functionality();
  ExprGen gen(7);
  for (int n = 0; n < 400; ++n)
  {
    std::string sql = "SELECT i FROM T WHERE " + gen.ill_typed(3);
    CAPTURE(sql);
    CHECK(contains(error_of([&] { parse_statement(sql, schema, f, "x"); }), "type mismatch"));
  }
  CHECK(contains(error_of([&] { parse_statement("UPDATE T SET i = 'a'", schema, f, "x"); }),
                 "type mismatch"));
  CHECK(contains(error_of([&] { parse_statement("UPDATE T SET b = :pi", schema, f, "x"); }),
                 "type mismatch"));
}

TEST_CASE("decomposition: worked example and mono")
{
  Schema s = parse_schema(kBankSchema);
  Decomposition d = parse_decomposition(R"({"M1": ["Account"], "M2": ["Wallet"]})", s);
  REQUIRE(d.clusters.size() == 2);
  CHECK(d.clusters[0] == Cluster{"M1", {"Account"}});
  CHECK(d.clusters[1] == Cluster{"M2", {"Wallet"}});
  CHECK(d.microservice_of("Wallet") == "M2");

  Decomposition mono = parse_decomposition(R"({"mono": ["Account", "Wallet"]})", s);
  CHECK(mono.clusters.size() == 1);
  CHECK(mono == Decomposition::mono(s));
  CHECK(parse_decomposition(print_decomposition(d), s) == d);
}

TEST_CASE("decomposition: partition errors")
{
  Schema s = parse_schema(kBankSchema);
  CHECK(contains(error_of([&] { parse_decomposition(R"({"M1": ["Account"]})", s); }),
                 "missing from the decomposition"));
  CHECK(contains(error_of([&] { parse_decomposition(R"({"M1": ["Account", "Wallet"], "M2": ["Wallet"]})", s); }),
                 "appears in both"));
  CHECK(contains(error_of([&] { parse_decomposition(R"({"M1": ["Account", "Wallet", "Nope"]})", s); }),
                 "not in the schema"));
  CHECK(contains(error_of([&] { parse_decomposition(R"(["Account"])", s); }), "JSON object"));
  CHECK(contains(error_of([&] { parse_decomposition("{\n\"M1\": [\"Account\",\n}", s); }),
                 "line"));
}

TEST_CASE("property: accepted decompositions partition the schema")
{
  Schema schema;
  for (int i = 0; i < 7; ++i)
  {
    schema.tables.push_back({"t" + std::to_string(i), {{"id", ValueType::Int}}, {"id"}});
  }
  std::mt19937 rng(3);
  for (int n = 0; n < 100; ++n)
  {
    int k = 1 + static_cast<int>(rng() % 4);
    std::map<std::string, std::vector<std::string>> clusters;
    for (const auto& t : schema.tables) clusters["M" + std::to_string(rng() % k)].push_back(t.name);
    nlohmann::json j = clusters;
    Decomposition d = parse_decomposition(j.dump(), schema);
    std::multiset<std::string> all;
    for (const auto& c : d.clusters) all.insert(c.tables.begin(), c.tables.end());
    std::multiset<std::string> expected;
    for (const auto& t : schema.tables) expected.insert(t.name);
    CHECK(all == expected);
  }
}
