#pragma once

// JSON documents and CSV/text tables for fitted models, benchmark reports and
// simulation sidecars. Every JSON document carries "schema": 1 at top level.

#include <string>
#include <vector>

#include <json.hpp>

#include "dpc/dpca.hpp"
#include "dpc/factor.hpp"
#include "dpc/oracle.hpp"
#include "dpc/simgen.hpp"

namespace dpc {

inline constexpr int kReportSchema = 1;

/// When `timing` is false, wall-clock fields are omitted (or written as 0 in
/// CSV columns) so two runs with the same seed compare byte-for-byte.
struct ReportOptions {
  bool timing = true;
};

nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json variance_to_json(const VarianceReport& variance);

/// {"assignment", "loadings", "fit", "explained", "trace"[, "elapsed_ms"]}.
nlohmann::json model_to_json(const DisjointModel& model, const ReportOptions& options);

/// Variables × components with a trailing "%VAR" row.
std::string loadings_csv(const Matrix& loadings, const std::vector<double>& percent,
                         const std::vector<std::string>& variable_names,
                         const std::string& component_prefix);

/// iteration,global_best_fit,elapsed_ms
std::string trace_csv(const std::vector<TracePoint>& trace, const ReportOptions& options);

nlohmann::json benchmark_to_json(const BenchmarkReport& report, const ReportOptions& options);
/// Methods as columns; timing rows in minutes, then the success rate.
std::string benchmark_table(const BenchmarkReport& report, const ReportOptions& options);

nlohmann::json phi_spec_to_json(const PhiSpec& spec);

}  // namespace dpc
