// mad: detects serializability anomalies introduced by splitting a monolith's
// transactions across microservices.

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "mad/classifier.hpp"
#include "mad/frontend.hpp"
#include "mad/oracle.hpp"
#include "mad/orchestrator.hpp"
#include "mad/report.hpp"

namespace {

constexpr int exit_complete = 0;
constexpr int exit_input_error = 1;
constexpr int exit_partial = 2;

namespace fs = std::filesystem;

struct Inputs
{
  std::string schema;
  std::string functionalities;
  std::string decomposition;
};

void
add_inputs(CLI::App* cmd, Inputs& in, bool decomposition_required)
{
  cmd->add_option("--schema", in.schema, "SQL file with CREATE TABLE statements")->required();
  cmd->add_option("--functionalities", in.functionalities, "JSON file with the functionalities")->required();
  auto* d = cmd->add_option("--decomposition", in.decomposition, "JSON file mapping microservices to tables");
  if (decomposition_required) d->required();
}

void
write_file(const fs::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::vector<std::string>
split_names(const std::string& s)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : s)
  {
    if (c == ',')
    {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    }
    else if (c != ' ')
    {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct AnalyzeArgs
{
  Inputs in;
  std::string out_dir;
  int mcl = 4;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool no_dc = false;
  std::string solver;
  double solver_timeout = 300;
  double global_timeout = 14'400;
  std::size_t max_models = 10'000;
  bool emit_chop = false;
  std::string dump_smt;
  std::string format = "both";
  bool quiet = false;
};

int
analyze(const AnalyzeArgs& a)
{
  mad::MicroservicesAR m = mad::load_application(a.in.schema, a.in.functionalities, a.in.decomposition);
  std::string solver = mad::find_solver(a.solver);
  fs::create_directories(a.out_dir);
  if (a.emit_chop) write_file(fs::path(a.out_dir) / "chop.json", mad::chop_to_json(m));

  mad::AnalysisConfig cfg;
  cfg.mcl = a.mcl;
  cfg.workers = a.threads;
  cfg.solver = {solver, std::chrono::milliseconds(static_cast<long long>(a.solver_timeout * 1000))};
  cfg.max_models = a.max_models;
  cfg.divide_and_conquer = !a.no_dc;
  cfg.global_timeout = std::chrono::milliseconds(static_cast<long long>(a.global_timeout * 1000));
  cfg.dump_dir = a.dump_smt;

  mad::ProgressCallback progress;
  if (!a.quiet)
  {
    progress = [](const mad::CombinationRun& r) {
      std::string names;
      for (const auto& s : r.subset) names += (names.empty() ? "" : ",") + s;
      std::cerr << "[" << names << "] " << r.status << ", " << r.witnesses << " cycle(s), " << r.seconds << " s"
                << (r.message.empty() ? "" : ": " + r.message) << "\n";
    };
  }
  mad::AnalysisResult result = mad::run_analysis(m, cfg, progress);
  auto anomalies = mad::build_anomalies(result.witnesses);
  mad::Metrics metrics = mad::group_metrics(anomalies);

  mad::RunInfo info{a.in.schema, a.in.functionalities, a.in.decomposition, solver, a.mcl, a.threads, !a.no_dc,
                    a.max_models, a.solver_timeout, a.global_timeout};
  write_file(fs::path(a.out_dir) / "report.json", mad::report_json(info, result, anomalies, metrics));
  if (a.format != "json")
  {
    std::string tables = mad::report_tables(result, anomalies, metrics);
    write_file(fs::path(a.out_dir) / "report.txt", tables);
    std::cout << tables;
  }
  return result.complete() ? exit_complete : exit_partial;
}

struct OracleArgs
{
  Inputs in;
  std::string subset;
  int mcl = 4;
  mad::OracleConfig cfg;
  std::string output;
};

nlohmann::ordered_json
verdict_json(const std::vector<std::string>& subset, const mad::OracleVerdict& v)
{
  nlohmann::ordered_json j;
  j["subset"] = subset;
  j["anomaly"] = v.anomaly;
  j["verdict"] = v.partial ? "best-effort" : "exhaustive";
  j["instances"] = v.instances;
  j["states"] = v.states;
  j["schedule"] = v.schedule;
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : v.edges)
  {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"kind", e.kind}, {"cell", e.cell}});
  }
  j["edges"] = edges;
  j["notes"] = v.notes;
  return j;
}

int
oracle(const OracleArgs& a)
{
  mad::MicroservicesAR m = mad::load_application(a.in.schema, a.in.functionalities, a.in.decomposition);
  std::vector<std::vector<std::string>> subsets;
  if (!a.subset.empty())
  {
    auto names = split_names(a.subset);
    for (const auto& n : names)
    {
      if (!m.monolith.find_functionality(n)) throw mad::InputError("unknown functionality '" + n + "' in --subset");
    }
    std::sort(names.begin(), names.end());
    subsets.push_back(names);
  }
  else
  {
    std::vector<std::string> names;
    for (const auto& f : m.monolith.functionalities) names.push_back(f.name);
    subsets = mad::generate_combinations(names, a.mcl);
  }
  bool partial = false;
  auto results = nlohmann::ordered_json::array();
  for (const auto& s : subsets)
  {
    mad::OracleVerdict v = mad::oracle_has_anomaly(m, s, a.cfg);
    partial = partial || v.partial;
    results.push_back(verdict_json(s, v));
  }
  nlohmann::ordered_json out;
  out["rows"] = a.cfg.rows;
  out["instances"] = a.cfg.instances;
  out["results"] = results;
  std::string text = out.dump(2) + "\n";
  if (a.output.empty()) std::cout << text;
  else write_file(a.output, text);
  return partial ? exit_partial : exit_complete;
}

}  // namespace

int
main(int argc, char** argv)
{
  std::signal(SIGPIPE, SIG_IGN);
  CLI::App app{"Detects serializability anomalies of a microservices decomposition"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  CLI::App* cmd = app.add_subcommand("analyze", "Search for anomalous cycles and write a report");
  add_inputs(cmd, an.in, true);
  cmd->add_option("-o,--output", an.out_dir, "Output directory")->required();
  cmd->add_option("--mcl", an.mcl, "Maximum cycle length")->check(CLI::Range(3, 64))->capture_default_str();
  cmd->add_option("--threads", an.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_flag("--no-divide-and-conquer", an.no_dc, "Solve one problem over all functionalities");
  cmd->add_option("--solver", an.solver, "SMT-LIB2 solver executable (default: $MAD_SOLVER, z3, cvc5)");
  cmd->add_option("--solver-timeout", an.solver_timeout, "Seconds per combination")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--global-timeout", an.global_timeout, "Seconds for the whole search")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd->add_option("--max-models", an.max_models, "Cycle cap per combination")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_flag("--emit-chop", an.emit_chop, "Write chop.json with the sub-transactions");
  cmd->add_option("--dump-smt", an.dump_smt, "Write each SMT problem into this directory");
  cmd->add_option("--format", an.format, "Report format")->check(CLI::IsMember({"json", "table", "both"}))->capture_default_str();
  cmd->add_flag("-q,--quiet", an.quiet, "No progress output");

  OracleArgs orc;
  CLI::App* ocmd = app.add_subcommand("oracle", "Check subsets by exhaustive execution over a tiny database");
  add_inputs(ocmd, orc.in, false);
  ocmd->add_option("--subset", orc.subset, "Comma-separated functionalities (default: every subset below MCL)");
  ocmd->add_option("--mcl", orc.mcl, "Subset sizes are 1..MCL-1")->check(CLI::Range(3, 64))->capture_default_str();
  ocmd->add_option("--instances", orc.cfg.instances, "Instances per functionality")->check(CLI::Range(0, 8))->capture_default_str();
  ocmd->add_option("--singleton-instances", orc.cfg.singleton_instances, "Instances for one-functionality subsets")->check(CLI::Range(0, 8))->capture_default_str();
  ocmd->add_option("--rows", orc.cfg.rows, "Row slots per table")->check(CLI::Range(1, 4))->capture_default_str();
  ocmd->add_option("--max-states", orc.cfg.state_bound, "Search state bound")->capture_default_str();
  ocmd->add_option("-o,--output", orc.output, "Write the JSON verdict here instead of stdout");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_input_error;
  }

  try
  {
    if (*cmd) return analyze(an);
    return oracle(orc);
  }
  catch (const mad::InputError& e)
  {
    std::cerr << "mad: input error: " << e.what() << "\n";
  }
  catch (const mad::SolverError& e)
  {
    std::cerr << "mad: " << e.what() << "\n";
  }
  catch (const std::exception& e)
  {
    std::cerr << "mad: " << e.what() << "\n";
  }
  return exit_input_error;
}
