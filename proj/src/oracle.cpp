#include "dpc/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "dpc/factor.hpp"

namespace dpc {
namespace {

using Clock = std::chrono::steady_clock;
using Millis = std::chrono::duration<double, std::milli>;

}  // namespace

AssignmentEnumerator::AssignmentEnumerator(int variables, int components, std::uint64_t budget)
    : components_(components), labels_(static_cast<std::size_t>(std::max(variables, 0)), 0) {
  if (variables < 1 || components < 1) {
    throw Error(ErrorKind::kInvalidArgument, "enumeration needs J >= 1 and Q >= 1");
  }
  if (count_feasible(variables, components) > BigInt(budget)) {
    throw Error(ErrorKind::kBudgetExceeded,
                "feasible assignment count exceeds enumeration budget of " +
                    std::to_string(budget));
  }
}

bool AssignmentEnumerator::next() {
  if (done_) return false;
  for (;;) {
    if (!started_) {
      started_ = true;
    } else {
      // Increment the base-Q counter; the last variable is least significant.
      std::size_t i = labels_.size();
      while (i > 0) {
        --i;
        if (++labels_[i] < components_) break;
        labels_[i] = 0;
        if (i == 0) {
          done_ = true;
          return false;
        }
      }
    }
    if (labels_feasible(labels_, components_)) return true;
  }
}

std::vector<Assignment> enumerate_assignments(int variables, int components,
                                              std::uint64_t budget) {
  AssignmentEnumerator it(variables, components, budget);
  std::vector<Assignment> out;
  while (it.next()) out.push_back(it.current());
  return out;
}

DisjointModel oracle_best(const DataMatrix& x, int components, std::uint64_t budget) {
  const int variables = static_cast<int>(x.cols());
  if (components < 1 || components > variables) {
    throw Error(ErrorKind::kDimension, "oracle needs 1 <= Q <= J");
  }
  const auto start = Clock::now();
  const LoadingOperator op(x);
  AssignmentEnumerator it(variables, components, budget);
  std::optional<Assignment> best;
  double best_fit = std::numeric_limits<double>::infinity();
  while (it.next()) {
    Assignment v = it.current();
    const double fit = op.fit(v);
    if (fit < best_fit) {
      best_fit = fit;
      best = std::move(v);
    }
  }
  const Millis elapsed = Clock::now() - start;
  return make_model(x, *best, {{0, best_fit, elapsed.count()}}, elapsed);
}

std::string method_name(Method method) {
  switch (method) {
    case Method::kDpca:
      return "dpca";
    case Method::kCbpso:
      return "cbpso";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "dpca") return Method::kDpca;
  if (name == "cbpso") return Method::kCbpso;
  throw Error(ErrorKind::kInvalidArgument, "unknown method '" + name + "'");
}

BenchmarkReport benchmark(const DataMatrix& x, int components, const BenchmarkOptions& options) {
  if (options.runs < 1) {
    throw Error(ErrorKind::kInvalidArgument, "benchmark needs runs >= 1");
  }
  if (!options.seeds.empty() && static_cast<int>(options.seeds.size()) != options.runs) {
    throw Error(ErrorKind::kInvalidArgument, "benchmark seed list must have one seed per run");
  }
  if (options.methods.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "benchmark needs at least one method");
  }
  BenchmarkReport report;
  report.individuals = static_cast<int>(x.rows());
  report.variables = static_cast<int>(x.cols());
  report.components = components;
  report.classic_pca_fit = classic_pca(x, components).fit;

  for (Method method : options.methods) {
    MethodRecord record;
    record.method = method;
    record.runs = options.runs;
    std::optional<DisjointModel> best;
    for (int r = 0; r < options.runs; ++r) {
      const std::uint64_t seed = options.seeds.empty()
                                     ? options.base_seed + static_cast<std::uint64_t>(r)
                                     : options.seeds[static_cast<std::size_t>(r)];
      const auto start = Clock::now();
      DisjointModel model = [&] {
        if (method == Method::kDpca) {
          DpcaConfig cfg = options.dpca;
          cfg.seed = seed;
          return dpca_fit(x, components, cfg);
        }
        PsoConfig cfg = options.pso;
        cfg.seed = seed;
        return cbpso_fit(x, components, cfg);
      }();
      record.elapsed_ms.push_back(Millis(Clock::now() - start).count());
      record.seeds.push_back(seed);
      record.fits.push_back(model.fit);
      record.assignments.push_back(model.assignment.canonical().to_string());
      if (!best || model.fit < best->fit) best = std::move(model);
    }
    record.best_fit = best->fit;
    record.best_assignment = best->assignment.canonical().to_string();
    record.best_trace = best->trace;
    const auto& times = record.elapsed_ms;
    record.mean_ms = std::accumulate(times.begin(), times.end(), 0.0) /
                     static_cast<double>(times.size());
    record.best_ms = *std::min_element(times.begin(), times.end());
    record.worst_ms = *std::max_element(times.begin(), times.end());
    report.methods.push_back(std::move(record));
  }

  const bool use_oracle =
      count_feasible(report.variables, components) <= BigInt(options.oracle_budget);
  if (use_oracle) {
    const DisjointModel optimum = oracle_best(x, components, options.oracle_budget);
    report.reference_kind = "oracle";
    report.reference_fit = optimum.fit;
    report.reference_assignment = optimum.assignment.canonical().to_string();
  } else {
    report.reference_kind = "best-observed";
    report.reference_fit = std::numeric_limits<double>::infinity();
    for (const MethodRecord& record : report.methods) {
      report.reference_fit = std::min(report.reference_fit, record.best_fit);
    }
  }
  for (MethodRecord& record : report.methods) {
    record.successes = static_cast<int>(
        std::count_if(record.fits.begin(), record.fits.end(), [&](double fit) {
          return fit <= report.reference_fit + kSuccessTolerance;
        }));
    record.success_rate = static_cast<double>(record.successes) / record.runs;
  }
  return report;
}

}  // namespace dpc
