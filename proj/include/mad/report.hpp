#pragma once

// report.json and the aligned text tables.

#include <string>
#include <vector>

#include "mad/classifier.hpp"
#include "mad/orchestrator.hpp"

namespace mad {

struct RunInfo
{
  std::string schema;
  std::string functionalities;
  std::string decomposition;
  std::string solver;
  int mcl = 4;
  int threads = 1;
  bool divide_and_conquer = true;
  std::size_t max_models = 0;
  double solver_timeout = 0;
  double global_timeout = 0;
};

/// JSON text with sorted keys. `seconds` is the ET(s) value.
std::string report_json(const RunInfo& info,
                        const AnalysisResult& result,
                        const std::vector<Anomaly>& anomalies,
                        const Metrics& metrics);

/// Summary, per-type and grouping tables.
std::string report_tables(const AnalysisResult& result, const std::vector<Anomaly>& anomalies, const Metrics& metrics);

}  // namespace mad
