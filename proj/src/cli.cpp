#include "dpc/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dpc/cbpso.hpp"
#include "dpc/dpca.hpp"
#include "dpc/factor.hpp"
#include "dpc/io.hpp"
#include "dpc/oracle.hpp"
#include "dpc/report.hpp"
#include "dpc/simgen.hpp"

namespace dpc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct DataSource {
  std::string input;
  std::string phi;  // "n,p,r1:r2:...:rq"
  std::uint64_t phi_seed = 0;
  double phi_noise = 0.05;
  bool no_center = false;
};

struct LoadedData {
  DataMatrix x;
  std::vector<std::string> names;
  std::string source;
  std::optional<Assignment> planted;
};

struct SolverFlags {
  DpcaConfig dpca;
  PsoConfig pso;
  std::string sigmoid = "conventional";
  std::string rho = "per-entry";
  bool synchronous = false;
  int threads = 1;
};

struct OutputFlags {
  std::string dir;
  bool no_timing = false;
};

/// Files are staged in memory and only written once every computation has
/// succeeded, so a failing command leaves nothing behind.
using Artifacts = std::map<std::string, std::string>;

std::vector<int> parse_int_list(const std::string& text, char separator, const std::string& what) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, separator)) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (token.empty() || used != token.size()) {
      throw Error(ErrorKind::kInvalidArgument, "bad " + what + " '" + text + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) throw Error(ErrorKind::kInvalidArgument, "empty " + what);
  return out;
}

IntRange parse_range(const std::string& text, const std::string& what) {
  const std::vector<int> values = parse_int_list(text, ',', what);
  if (values.size() != 2) {
    throw Error(ErrorKind::kInvalidArgument, what + " must be 'lo,hi'");
  }
  return {values[0], values[1]};
}

void add_source_options(CLI::App& cmd, DataSource& source) {
  auto* input = cmd.add_option("--input,-i", source.input, "CSV file (header row, numeric cells)");
  auto* phi = cmd.add_option("--phi", source.phi,
                             "simulate instead of reading: n,p,r1:r2:...:rq block sizes");
  input->excludes(phi);
  phi->excludes(input);
  cmd.add_option("--phi-seed", source.phi_seed, "seed for --phi");
  cmd.add_option("--phi-noise", source.phi_noise, "noise scale for --phi");
  cmd.add_flag("--no-center", source.no_center,
               "input is already centered (column means must be below 1e-6)");
}

void add_solver_options(CLI::App& cmd, SolverFlags& flags) {
  cmd.add_option("--max-iter", flags.dpca.max_iterations, "dpca sweep limit");
  cmd.add_option("--tol", flags.dpca.tolerance, "dpca stopping tolerance on |F_k - F_k-1|");
  cmd.add_option("--particles", flags.pso.particles, "cbpso swarm size");
  cmd.add_option("--iterations", flags.pso.max_iterations, "cbpso iteration budget");
  cmd.add_option("--min-inertia", flags.pso.min_inertia, "cbpso inertia at the last iteration");
  cmd.add_option("--max-inertia", flags.pso.max_inertia, "cbpso inertia at the first iteration");
  cmd.add_option("--w-cognition", flags.pso.cognitive_weight, "cbpso cognitive weight");
  cmd.add_option("--w-social", flags.pso.social_weight, "cbpso social weight");
  cmd.add_option("--sigmoid", flags.sigmoid, "velocity squashing: conventional | literal")
      ->check(CLI::IsMember({"conventional", "literal"}));
  cmd.add_option("--rho", flags.rho, "random factors: per-entry | per-particle")
      ->check(CLI::IsMember({"per-entry", "per-particle"}));
  cmd.add_flag("--sync", flags.synchronous,
               "freeze the global best per iteration (changes the search)");
  cmd.add_option("--threads", flags.threads, "worker threads for restarts / synchronous swarm");
}

void add_output_options(CLI::App& cmd, OutputFlags& flags) {
  cmd.add_option("--out,-o", flags.dir, std::string("output directory (default $") +
                                            kOutputDirEnv + " or ./dpc_out)");
  cmd.add_flag("--no-timing", flags.no_timing, "omit wall-clock fields for byte comparison");
}

void finalize_solver_flags(SolverFlags& flags) {
  flags.pso.orientation = flags.sigmoid == "literal" ? SigmoidOrientation::kLiteral
                                                     : SigmoidOrientation::kConventional;
  flags.pso.random_factors =
      flags.rho == "per-particle" ? RandomFactors::kPerParticle : RandomFactors::kPerEntry;
  flags.pso.best_update = flags.synchronous ? BestUpdate::kSynchronous : BestUpdate::kAsynchronous;
  flags.pso.threads = flags.threads;
  flags.dpca.threads = flags.threads;
  flags.dpca.validate();
  flags.pso.validate();
}

fs::path output_dir(const OutputFlags& flags) {
  if (!flags.dir.empty()) return flags.dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return "dpc_out";
}

void write_artifacts(const fs::path& dir, const Artifacts& artifacts, std::ostream& out) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create '" + dir.string() + "': " + ec.message());
  for (const auto& [name, content] : artifacts) {
    write_text_file(dir / name, content);
    out << "wrote " << (dir / name).string() << '\n';
  }
}

PhiSpec parse_phi(const std::string& text, std::uint64_t seed, double noise) {
  const auto first = text.find(',');
  const auto second = first == std::string::npos ? first : text.find(',', first + 1);
  if (second == std::string::npos) {
    throw Error(ErrorKind::kInvalidArgument, "--phi must be n,p,r1:r2:...");
  }
  const std::vector<int> np = parse_int_list(text.substr(0, second), ',', "--phi");
  PhiSpec spec;
  spec.n = np[0];
  spec.p = np[1];
  spec.block_sizes = parse_int_list(text.substr(second + 1), ':', "--phi blocks");
  spec.q = static_cast<int>(spec.block_sizes.size());
  spec.seed = seed;
  spec.noise_scale = noise;
  return spec;
}

LoadedData load_data(const DataSource& source) {
  if (source.input.empty() == source.phi.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "give exactly one of --input or --phi");
  }
  std::optional<LoadedData> loaded;
  if (!source.phi.empty()) {
    const PhiSpec spec = parse_phi(source.phi, source.phi_seed, source.phi_noise);
    PlantedMatrix planted = generate(spec);
    std::vector<std::string> names;
    for (int j = 0; j < spec.p; ++j) names.push_back("x" + std::to_string(j + 1));
    loaded.emplace(LoadedData{std::move(planted.data), std::move(names), "phi:" + source.phi,
                              std::move(planted.planted)});
  } else {
    Table table = read_csv(source.input);
    if (source.no_center) {
      const Vector means = table.values.colwise().mean();
      for (Eigen::Index j = 0; j < means.size(); ++j) {
        if (std::abs(means[j]) >= 1e-6) {
          throw Error(ErrorKind::kInvalidArgument,
                      "--no-center: column '" + table.header[static_cast<std::size_t>(j)] +
                          "' has mean " + format_double(means[j]));
        }
      }
      loaded.emplace(LoadedData{DataMatrix(std::move(table.values), false),
                                std::move(table.header), source.input, std::nullopt});
    } else {
      loaded.emplace(LoadedData{center(table.values), std::move(table.header), source.input,
                                std::nullopt});
    }
  }
  const Matrix& values = loaded->x.values();
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    if (values.col(j).squaredNorm() == 0.0) {
      throw Error(ErrorKind::kNumerical, "variable '" + loaded->names[static_cast<std::size_t>(j)] +
                                             "' has zero variance");
    }
  }
  return std::move(*loaded);
}

void check_components(const LoadedData& data, int components) {
  if (components < 1 || components > data.x.cols()) {
    throw Error(ErrorKind::kDimension, "Q = " + std::to_string(components) +
                                           " must satisfy 1 <= Q <= J = " +
                                           std::to_string(data.x.cols()));
  }
}

json data_to_json(const LoadedData& data) {
  json out = {{"source", data.source},
              {"individuals", data.x.rows()},
              {"variables", data.x.cols()},
              {"variable_names", data.names}};
  if (data.planted) out["planted"] = data.planted->to_string();
  return out;
}

std::string percent(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f%%", value);
  return buffer;
}

std::string fit_text(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.9f", value);
  return buffer;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeFlags {
  DataSource source;
  SolverFlags solver;
  OutputFlags output;
  int components = 0;
  std::string method = "both";
  int restarts = 1;
  std::uint64_t seed = 0;
  std::string formats = "json,csv";
  std::uint64_t budget = kDefaultEnumerationBudget;
};

DisjointModel run_cbpso_restarts(const DataMatrix& x, int components, PsoConfig cfg,
                                 std::uint64_t seed, int restarts) {
  std::optional<DisjointModel> best;
  for (int r = 0; r < restarts; ++r) {
    cfg.seed = seed + static_cast<std::uint64_t>(r);
    DisjointModel model = cbpso_fit(x, components, cfg);
    if (!best || model.fit < best->fit) best = std::move(model);
  }
  return std::move(*best);
}

int cmd_analyze(AnalyzeFlags& flags, std::ostream& out) {
  finalize_solver_flags(flags.solver);
  if (flags.restarts < 1) throw Error(ErrorKind::kInvalidArgument, "--restarts must be >= 1");
  const bool want_json = flags.formats.find("json") != std::string::npos;
  const bool want_csv = flags.formats.find("csv") != std::string::npos;
  if (!want_json && !want_csv) {
    throw Error(ErrorKind::kInvalidArgument, "--format must include json and/or csv");
  }
  const ReportOptions report_options{!flags.output.no_timing};

  const LoadedData data = load_data(flags.source);
  check_components(data, flags.components);
  const DataMatrix& x = data.x;
  const int q = flags.components;

  // Exploratory PCA first: loadings and explained variance of the leading axes.
  const int pca_q = static_cast<int>(std::min<Eigen::Index>(q, std::min(x.rows(), x.cols())));
  const ClassicPca pca = classic_pca(x, pca_q);
  const VarianceReport pca_variance = explained_variance(x, scores(x, pca.loadings));

  std::vector<std::pair<std::string, DisjointModel>> models;
  const auto run_method = [&](const std::string& name) {
    if (name == "dpca") {
      DpcaConfig cfg = flags.solver.dpca;
      cfg.seed = flags.seed;
      cfg.restarts = flags.restarts;
      models.emplace_back(name, dpca_fit(x, q, cfg));
    } else if (name == "cbpso") {
      models.emplace_back(name, run_cbpso_restarts(x, q, flags.solver.pso, flags.seed, flags.restarts));
    } else if (name == "oracle") {
      models.emplace_back(name, oracle_best(x, q, flags.budget));
    }
  };
  if (flags.method == "both") {
    run_method("dpca");
    run_method("cbpso");
  } else {
    run_method(flags.method);
  }

  Artifacts artifacts;
  json report = {{"schema", kReportSchema},
                 {"command", "analyze"},
                 {"data", data_to_json(data)},
                 {"components", q},
                 {"seed", flags.seed},
                 {"restarts", flags.restarts},
                 {"pca",
                  {{"loadings", matrix_to_json(pca.loadings)},
                   {"fit", pca.fit},
                   {"explained", variance_to_json(pca_variance)}}}};
  json model_reports = json::object();
  for (const auto& [name, model] : models) {
    model_reports[name] = model_to_json(model, report_options);
    if (want_csv) {
      artifacts[name + "_loadings.csv"] =
          loadings_csv(model.loadings.values(), model.variance.per_component, data.names, "DC");
      artifacts[name + "_trace.csv"] = trace_csv(model.trace, report_options);
    }
  }
  report["models"] = std::move(model_reports);
  if (want_csv) {
    artifacts["pca_loadings.csv"] =
        loadings_csv(pca.loadings, pca_variance.per_component, data.names, "PCA");
  }
  if (want_json) artifacts["report.json"] = report.dump(2) + '\n';

  out << "data: " << data.source << " (" << x.rows() << " x " << x.cols() << "), Q = " << q << '\n';
  out << "pca     fit " << fit_text(pca.fit) << "  explained " << percent(pca_variance.total) << '\n';
  for (const auto& [name, model] : models) {
    out << name << std::string(8 - std::min<std::size_t>(name.size(), 7), ' ') << "fit "
        << fit_text(model.fit) << "  explained " << percent(model.variance.total)
        << "  assignment " << model.assignment.to_string() << '\n';
  }
  write_artifacts(output_dir(flags.output), artifacts, out);
  return kOk;
}

// --------------------------------------------------------------- simulate

struct SimulateFlags {
  PhiSpec spec;
  std::string blocks;
  std::string strong = "70,100";
  std::string weak = "1,30";
  std::string name = "phi";
  OutputFlags output;
};

int cmd_simulate(SimulateFlags& flags, std::ostream& out) {
  flags.spec.block_sizes = parse_int_list(flags.blocks, ',', "--blocks");
  flags.spec.strong = parse_range(flags.strong, "--strong");
  flags.spec.weak = parse_range(flags.weak, "--weak");
  const PlantedMatrix planted = generate(flags.spec);

  Table table;
  for (int j = 0; j < flags.spec.p; ++j) table.header.push_back("x" + std::to_string(j + 1));
  table.values = planted.data.values();

  json coefficients = json::array();
  for (Eigen::Index j = 0; j < planted.coefficients.rows(); ++j) {
    json row = json::array();
    for (Eigen::Index i = 0; i < planted.coefficients.cols(); ++i) {
      row.push_back(planted.coefficients(j, i));
    }
    coefficients.push_back(std::move(row));
  }
  const json sidecar = {{"schema", kReportSchema},
                        {"spec", phi_spec_to_json(flags.spec)},
                        {"seed", flags.spec.seed},
                        {"planted", planted.planted.to_string()},
                        {"coefficients", std::move(coefficients)}};
  Artifacts artifacts;
  artifacts[flags.name + ".csv"] = write_csv(table);
  artifacts[flags.name + ".json"] = sidecar.dump(2) + '\n';
  out << "simulated " << flags.spec.n << " x " << flags.spec.p << ", planted "
      << planted.planted.to_string() << '\n';
  write_artifacts(output_dir(flags.output), artifacts, out);
  return kOk;
}

// ------------------------------------------------------------------ count

int cmd_count(int variables, int components, std::ostream& out) {
  out << count_feasible(variables, components).str() << '\n';
  return kOk;
}

// -------------------------------------------------------------- benchmark

struct BenchmarkFlags {
  DataSource source;
  SolverFlags solver;
  OutputFlags output;
  int components = 0;
  std::string methods = "dpca,cbpso";
  int runs = 100;
  int restarts = 1;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

int cmd_benchmark(BenchmarkFlags& flags, std::ostream& out) {
  finalize_solver_flags(flags.solver);
  const LoadedData data = load_data(flags.source);
  check_components(data, flags.components);

  BenchmarkOptions options;
  options.methods.clear();
  std::stringstream list(flags.methods);
  std::string name;
  while (std::getline(list, name, ',')) options.methods.push_back(parse_method(name));
  options.runs = flags.runs;
  options.base_seed = flags.seed;
  options.dpca = flags.solver.dpca;
  options.dpca.restarts = flags.restarts;
  options.pso = flags.solver.pso;
  options.oracle_budget = flags.budget;
  const BenchmarkReport result = benchmark(data.x, flags.components, options);

  const ReportOptions report_options{!flags.output.no_timing};
  json report = benchmark_to_json(result, report_options);
  report["data"] = data_to_json(data);
  const std::string table = benchmark_table(result, report_options);

  Artifacts artifacts;
  artifacts["benchmark.json"] = report.dump(2) + '\n';
  artifacts["benchmark.txt"] = table;
  for (const MethodRecord& record : result.methods) {
    artifacts[method_name(record.method) + "_trace.csv"] = trace_csv(record.best_trace, report_options);
  }
  out << table;
  write_artifacts(output_dir(flags.output), artifacts, out);
  return kOk;
}

// ----------------------------------------------------------------- oracle

struct OracleFlags {
  DataSource source;
  OutputFlags output;
  int components = 0;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

int cmd_oracle(OracleFlags& flags, std::ostream& out) {
  const LoadedData data = load_data(flags.source);
  check_components(data, flags.components);
  const DisjointModel model = oracle_best(data.x, flags.components, flags.budget);
  const ReportOptions report_options{!flags.output.no_timing};

  json report = {{"schema", kReportSchema},
                 {"command", "oracle"},
                 {"data", data_to_json(data)},
                 {"components", flags.components},
                 {"feasible_count", count_feasible(static_cast<int>(data.x.cols()),
                                                   flags.components).str()},
                 {"model", model_to_json(model, report_options)}};
  Artifacts artifacts;
  artifacts["oracle.json"] = report.dump(2) + '\n';
  artifacts["oracle_loadings.csv"] =
      loadings_csv(model.loadings.values(), model.variance.per_component, data.names, "DC");
  out << "oracle fit " << fit_text(model.fit) << "  explained " << percent(model.variance.total)
      << "  assignment " << model.assignment.to_string() << '\n';
  write_artifacts(output_dir(flags.output), artifacts, out);
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
      return kIoError;
    case ErrorKind::kParse:
      return kParseError;
    case ErrorKind::kDimension:
      return kDimensionError;
    case ErrorKind::kInvalidArgument:
      return kInvalidInput;
    case ErrorKind::kBudgetExceeded:
      return kBudgetExceeded;
    case ErrorKind::kNumerical:
      return kNumericalError;
  }
  return kUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Disjoint principal component analysis (DPCA and CBPSO solvers)", "dpc"};
  app.require_subcommand(1);

  AnalyzeFlags analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "fit disjoint components to a data matrix");
  add_source_options(*analyze_cmd, analyze.source);
  add_solver_options(*analyze_cmd, analyze.solver);
  add_output_options(*analyze_cmd, analyze.output);
  analyze_cmd->add_option("--components,-q", analyze.components, "number of disjoint components")
      ->required();
  analyze_cmd->add_option("--method,-m", analyze.method, "pca | dpca | cbpso | both | oracle")
      ->check(CLI::IsMember({"pca", "dpca", "cbpso", "both", "oracle"}));
  analyze_cmd->add_option("--restarts", analyze.restarts, "independent runs; the best fit is kept");
  analyze_cmd->add_option("--seed", analyze.seed, "random seed");
  analyze_cmd->add_option("--format", analyze.formats, "json,csv");
  analyze_cmd->add_option("--budget", analyze.budget, "oracle enumeration budget");

  SimulateFlags simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "generate a planted-structure matrix");
  simulate_cmd->add_option("--n", simulate.spec.n, "individuals")->required();
  simulate_cmd->add_option("--p", simulate.spec.p, "variables")->required();
  simulate_cmd->add_option("--q", simulate.spec.q, "latent components")->required();
  simulate_cmd->add_option("--blocks", simulate.blocks, "block sizes, e.g. 4,3,1")->required();
  simulate_cmd->add_option("--seed", simulate.spec.seed, "random seed");
  simulate_cmd->add_option("--noise", simulate.spec.noise_scale, "isotropic noise scale");
  simulate_cmd->add_option("--strong", simulate.strong, "strong coefficient range lo,hi");
  simulate_cmd->add_option("--weak", simulate.weak, "weak coefficient range lo,hi");
  simulate_cmd->add_flag("--permute", simulate.spec.permute, "scramble variable order");
  simulate_cmd->add_option("--name", simulate.name, "file stem for the CSV and JSON sidecar");
  add_output_options(*simulate_cmd, simulate.output);

  int count_j = 0;
  int count_q = 0;
  auto* count_cmd = app.add_subcommand("count", "number of feasible assignments for J, Q");
  count_cmd->add_option("J", count_j, "variables")->required();
  count_cmd->add_option("Q", count_q, "components")->required();

  BenchmarkFlags bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "repeated seeded runs with success rates");
  add_source_options(*bench_cmd, bench.source);
  add_solver_options(*bench_cmd, bench.solver);
  add_output_options(*bench_cmd, bench.output);
  bench_cmd->add_option("--components,-q", bench.components, "number of disjoint components")
      ->required();
  bench_cmd->add_option("--methods", bench.methods, "comma list of dpca, cbpso");
  bench_cmd->add_option("--runs", bench.runs, "runs per method");
  bench_cmd->add_option("--restarts", bench.restarts, "dpca restarts inside each run");
  bench_cmd->add_option("--seed", bench.seed, "run r uses seed + r");
  bench_cmd->add_option("--budget", bench.budget, "oracle enumeration budget for the reference");

  OracleFlags oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive global optimum (small J, Q)");
  add_source_options(*oracle_cmd, oracle.source);
  add_output_options(*oracle_cmd, oracle.output);
  oracle_cmd->add_option("--components,-q", oracle.components, "number of disjoint components")
      ->required();
  oracle_cmd->add_option("--budget", oracle.budget, "enumeration budget");

  std::vector<const char*> argv{"dpc"};
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(analyze, out);
    if (*simulate_cmd) return cmd_simulate(simulate, out);
    if (*count_cmd) return cmd_count(count_j, count_q, out);
    if (*bench_cmd) return cmd_benchmark(bench, out);
    if (*oracle_cmd) return cmd_oracle(oracle, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace dpc::cli
