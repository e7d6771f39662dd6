#include "dpc/report.hpp"

#include <cstdio>

#include "dpc/io.hpp"

namespace dpc {
namespace {

using nlohmann::json;

std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

json trace_to_json(const std::vector<TracePoint>& trace, const ReportOptions& options) {
  json out = json::array();
  for (const TracePoint& point : trace) {
    json entry = {{"iteration", point.iteration}, {"fit", point.fit}};
    if (options.timing) entry["elapsed_ms"] = point.elapsed_ms;
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json variance_to_json(const VarianceReport& variance) {
  return {{"per_component", variance.per_component}, {"total", variance.total}};
}

json model_to_json(const DisjointModel& model, const ReportOptions& options) {
  json out = {
      {"assignment", model.assignment.to_string()},
      {"loadings", matrix_to_json(model.loadings.values())},
      {"fit", model.fit},
      {"explained", variance_to_json(model.variance)},
      {"trace", trace_to_json(model.trace, options)},
  };
  if (options.timing) out["elapsed_ms"] = model.elapsed.count();
  return out;
}

std::string loadings_csv(const Matrix& loadings, const std::vector<double>& percent,
                         const std::vector<std::string>& variable_names,
                         const std::string& component_prefix) {
  std::string out = "variable";
  for (Eigen::Index q = 0; q < loadings.cols(); ++q) {
    out += ',' + component_prefix + std::to_string(q + 1);
  }
  out += '\n';
  for (Eigen::Index j = 0; j < loadings.rows(); ++j) {
    const auto index = static_cast<std::size_t>(j);
    out += index < variable_names.size() ? variable_names[index] : "x" + std::to_string(j + 1);
    for (Eigen::Index q = 0; q < loadings.cols(); ++q) out += ',' + format_double(loadings(j, q));
    out += '\n';
  }
  out += "%VAR";
  for (double p : percent) out += ',' + format_double(p);
  out += '\n';
  return out;
}

std::string trace_csv(const std::vector<TracePoint>& trace, const ReportOptions& options) {
  std::string out = "iteration,global_best_fit,elapsed_ms\n";
  for (const TracePoint& point : trace) {
    out += std::to_string(point.iteration) + ',' + format_double(point.fit) + ',' +
           (options.timing ? format_double(point.elapsed_ms) : "0") + '\n';
  }
  return out;
}

json benchmark_to_json(const BenchmarkReport& report, const ReportOptions& options) {
  json methods = json::array();
  for (const MethodRecord& record : report.methods) {
    json entry = {
        {"method", method_name(record.method)},
        {"runs", record.runs},
        {"seeds", record.seeds},
        {"fits", record.fits},
        {"assignments", record.assignments},
        {"best_fit", record.best_fit},
        {"best_assignment", record.best_assignment},
        {"successes", record.successes},
        {"success_rate", record.success_rate},
        {"best_trace", trace_to_json(record.best_trace, options)},
    };
    if (options.timing) {
      entry["elapsed_ms"] = record.elapsed_ms;
      entry["mean_ms"] = record.mean_ms;
      entry["best_ms"] = record.best_ms;
      entry["worst_ms"] = record.worst_ms;
    }
    methods.push_back(std::move(entry));
  }
  json out = {
      {"schema", kReportSchema},
      {"instance",
       {{"individuals", report.individuals},
        {"variables", report.variables},
        {"components", report.components}}},
      {"classic_pca_fit", report.classic_pca_fit},
      {"reference", {{"kind", report.reference_kind}, {"fit", report.reference_fit}}},
      {"success_tolerance", kSuccessTolerance},
      {"methods", std::move(methods)},
  };
  if (report.reference_assignment) {
    out["reference"]["assignment"] = *report.reference_assignment;
  }
  return out;
}

std::string benchmark_table(const BenchmarkReport& report, const ReportOptions& options) {
  constexpr int kLabelWidth = 34;
  constexpr int kColumnWidth = 14;
  const auto pad = [](std::string s, int width) {
    if (static_cast<int>(s.size()) < width) s.append(static_cast<std::size_t>(width) - s.size(), ' ');
    return s;
  };
  const auto lpad = [](std::string s, int width) {
    if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), ' ');
    return s;
  };
  std::string out;
  out += "instance: " + std::to_string(report.individuals) + " x " +
         std::to_string(report.variables) + ", Q = " + std::to_string(report.components) + '\n';
  out += "reference fit (" + report.reference_kind + "): " + format_double(report.reference_fit) + '\n';
  out += "classic PCA fit: " + format_double(report.classic_pca_fit) + "\n\n";

  out += pad("", kLabelWidth);
  for (const MethodRecord& record : report.methods) out += lpad(method_name(record.method), kColumnWidth);
  out += '\n';
  const auto row = [&](const std::string& label, auto value_of) {
    out += pad(label, kLabelWidth);
    for (const MethodRecord& record : report.methods) out += lpad(value_of(record), kColumnWidth);
    out += '\n';
  };
  if (options.timing) {
    row("AVERAGE EXECUTION TIME (MIN)", [](const MethodRecord& r) { return fixed(r.mean_ms / 60000.0, 4); });
    row("BETTER EXECUTION TIME (MIN)", [](const MethodRecord& r) { return fixed(r.best_ms / 60000.0, 4); });
    row("WORST EXECUTION TIME (MIN)", [](const MethodRecord& r) { return fixed(r.worst_ms / 60000.0, 4); });
  }
  row("BEST FIT", [](const MethodRecord& r) { return fixed(r.best_fit, 9); });
  row("RUNS", [](const MethodRecord& r) { return std::to_string(r.runs); });
  row("SUCCESS RATE", [](const MethodRecord& r) { return fixed(r.success_rate * 100.0, 0) + "%"; });
  return out;
}

json phi_spec_to_json(const PhiSpec& spec) {
  return {
      {"n", spec.n},
      {"p", spec.p},
      {"q", spec.q},
      {"blocks", spec.block_sizes},
      {"strong", {spec.strong.lo, spec.strong.hi}},
      {"weak", {spec.weak.lo, spec.weak.hi}},
      {"noise_scale", spec.noise_scale},
      {"seed", spec.seed},
      {"permute", spec.permute},
  };
}

}  // namespace dpc
