#pragma once

// Greedy alternating disjoint PCA: each sweep relocates every variable to
// the component that minimizes the fit, holding the other variables fixed.

#include <chrono>
#include <cstdint>
#include <utility>
#include <vector>

#include "dpc/factor.hpp"
#include "dpc/model.hpp"

namespace dpc {

struct TracePoint {
  int iteration = 0;
  double fit = 0.0;
  double elapsed_ms = 0.0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct DisjointModel {
  Assignment assignment;
  DisjointLoadings loadings;
  Matrix scores;
  double fit = 0.0;
  VarianceReport variance;
  std::vector<TracePoint> trace;
  std::chrono::duration<double, std::milli> elapsed{0};
};

/// Evaluates T(v), the scores, the objective and the variance report.
DisjointModel make_model(const DataMatrix& x, const Assignment& v,
                         std::vector<TracePoint> trace = {},
                         std::chrono::duration<double, std::milli> elapsed = {});

struct DpcaConfig {
  int max_iterations = 100;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  int restarts = 1;
  int threads = 1;

  void validate() const;
};

struct SweepResult {
  Assignment assignment;
  double fit;
};

/// One pass over the rows. Each row tries every component; candidates that
/// empty a column are repaired before scoring. A candidate replaces the
/// current position only when it strictly lowers the fit, so ties keep the
/// current position and otherwise go to the lowest component.
SweepResult row_sweep(const LoadingOperator& op, const Assignment& v, Rng& rng);
SweepResult row_sweep(const DataMatrix& x, const Assignment& v, Rng& rng);

/// Runs `restarts` independent descents (stream r of cfg.seed) and keeps the
/// lowest fit, earliest restart on ties.
DisjointModel dpca_fit(const DataMatrix& x, int components, const DpcaConfig& cfg);

}  // namespace dpc
