#pragma once

// Ground truth for small instances: exhaustive enumeration of the feasible
// assignments, the certified global optimum, and a repeated-run benchmark
// harness reporting success rates and timings.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpc/cbpso.hpp"
#include "dpc/dpca.hpp"
#include "dpc/model.hpp"

namespace dpc {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

/// Walks every feasible J×Q assignment exactly once in lexicographic order
/// of the label vector (first variable most significant).
class AssignmentEnumerator {
 public:
  /// Throws Error(kBudgetExceeded) when count_feasible(J, Q) > budget.
  AssignmentEnumerator(int variables, int components,
                       std::uint64_t budget = kDefaultEnumerationBudget);

  /// Advances to the next assignment; false once the space is exhausted.
  bool next();
  const std::vector<int>& labels() const noexcept { return labels_; }
  Assignment current() const { return Assignment(labels_, components_); }

 private:
  int components_;
  std::vector<int> labels_;
  bool started_ = false;
  bool done_ = false;
};

std::vector<Assignment> enumerate_assignments(int variables, int components,
                                              std::uint64_t budget = kDefaultEnumerationBudget);

/// Global minimum of the fit over all feasible assignments; the first
/// assignment in enumeration order wins ties.
DisjointModel oracle_best(const DataMatrix& x, int components,
                          std::uint64_t budget = kDefaultEnumerationBudget);

enum class Method { kDpca, kCbpso };

std::string method_name(Method method);
Method parse_method(const std::string& name);

/// Success means a final fit within this distance of the reference.
inline constexpr double kSuccessTolerance = 1e-9;

struct MethodRecord {
  Method method;
  int runs = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> fits;
  std::vector<double> elapsed_ms;  // wall time per run
  std::vector<std::string> assignments;  // canonical text form per run
  double best_fit = 0.0;
  std::string best_assignment;
  std::vector<TracePoint> best_trace;  // convergence of the best run
  double mean_ms = 0.0;
  double best_ms = 0.0;
  double worst_ms = 0.0;
  int successes = 0;
  double success_rate = 0.0;
};

struct BenchmarkReport {
  int individuals = 0;
  int variables = 0;
  int components = 0;
  double classic_pca_fit = 0.0;
  std::string reference_kind;  // "oracle" or "best-observed"
  double reference_fit = 0.0;
  std::optional<std::string> reference_assignment;
  std::vector<MethodRecord> methods;
};

struct BenchmarkOptions {
  std::vector<Method> methods{Method::kDpca, Method::kCbpso};
  int runs = 100;
  /// Per-run seeds; when empty, run r uses base_seed + r.
  std::vector<std::uint64_t> seeds;
  std::uint64_t base_seed = 0;
  DpcaConfig dpca;
  PsoConfig pso;
  /// The oracle is used as reference only when the feasible count fits.
  std::uint64_t oracle_budget = kDefaultEnumerationBudget;
};

BenchmarkReport benchmark(const DataMatrix& x, int components, const BenchmarkOptions& options);

}  // namespace dpc
