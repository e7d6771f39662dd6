#include "dpc/dpca.hpp"

#include <cmath>
#include <numeric>
#include <optional>

#include "parallel.hpp"

namespace dpc {
namespace {

using Clock = std::chrono::steady_clock;
using Millis = std::chrono::duration<double, std::milli>;

// Candidates must beat the incumbent by more than this to be committed.
constexpr double kImprovement = 1e-13;

std::vector<int> members_of(const std::vector<int>& labels, int q) {
  std::vector<int> out;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] == q) out.push_back(static_cast<int>(j));
  }
  return out;
}

double sum_in_order(const std::vector<double>& energies) {
  return std::accumulate(energies.begin(), energies.end(), 0.0);
}

std::vector<double> block_energies(const LoadingOperator& op,
                                   const std::vector<int>& labels, int components) {
  std::vector<double> energies(static_cast<std::size_t>(components));
  for (int q = 0; q < components; ++q) {
    energies[static_cast<std::size_t>(q)] = op.block_energy(members_of(labels, q));
  }
  return energies;
}

}  // namespace

DisjointModel make_model(const DataMatrix& x, const Assignment& v,
                         std::vector<TracePoint> trace,
                         std::chrono::duration<double, std::milli> elapsed) {
  DisjointLoadings loadings = loadings_from_assignment(x, v);
  Matrix a = scores(x, loadings);
  const double fit = objective(x, loadings);
  VarianceReport variance = explained_variance(x, a);
  return DisjointModel{v,   std::move(loadings),  std::move(a), fit,
                       std::move(variance), std::move(trace), elapsed};
}

void DpcaConfig::validate() const {
  if (max_iterations < 1) {
    throw Error(ErrorKind::kInvalidArgument, "dpca needs max_iterations >= 1");
  }
  if (!(tolerance >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "dpca tolerance must be non-negative");
  }
  if (restarts < 1) {
    throw Error(ErrorKind::kInvalidArgument, "dpca needs restarts >= 1");
  }
}

SweepResult row_sweep(const LoadingOperator& op, const Assignment& v, Rng& rng) {
  const int components = v.components();
  std::vector<int> labels = v.labels();
  std::vector<double> energies = block_energies(op, labels, components);

  for (std::size_t j = 0; j < labels.size(); ++j) {
    const int home = labels[j];
    const double incumbent = op.fit_from_energy(sum_in_order(energies));

    std::vector<int> home_rest = members_of(labels, home);
    home_rest.erase(std::find(home_rest.begin(), home_rest.end(), static_cast<int>(j)));
    const bool home_survives = !home_rest.empty();
    const double home_rest_energy = home_survives ? op.block_energy(home_rest) : 0.0;

    double best_fit = incumbent;
    std::optional<std::vector<int>> best_labels;
    std::vector<double> best_energies;

    for (int q = 0; q < components; ++q) {
      if (q == home) continue;
      std::vector<int> candidate = labels;
      candidate[j] = q;
      std::vector<double> candidate_energies;
      if (home_survives) {
        candidate_energies = energies;
        candidate_energies[static_cast<std::size_t>(home)] = home_rest_energy;
        candidate_energies[static_cast<std::size_t>(q)] =
            op.block_energy(members_of(candidate, q));
      } else {
        repair_labels(candidate, components, rng);
        candidate_energies = block_energies(op, candidate, components);
      }
      const double fit = op.fit_from_energy(sum_in_order(candidate_energies));
      if (fit < best_fit - kImprovement) {
        best_fit = fit;
        best_labels = std::move(candidate);
        best_energies = std::move(candidate_energies);
      }
    }
    if (best_labels) {
      labels = std::move(*best_labels);
      energies = std::move(best_energies);
    }
  }
  const double fit = op.fit_from_energy(sum_in_order(energies));
  return SweepResult{Assignment(std::move(labels), components), fit};
}

SweepResult row_sweep(const DataMatrix& x, const Assignment& v, Rng& rng) {
  return row_sweep(LoadingOperator(x), v, rng);
}

DisjointModel dpca_fit(const DataMatrix& x, int components, const DpcaConfig& cfg) {
  cfg.validate();
  const int variables = static_cast<int>(x.cols());
  if (components < 1 || components > variables) {
    throw Error(ErrorKind::kDimension, "dpca needs 1 <= Q <= J");
  }
  const LoadingOperator op(x);

  std::vector<std::optional<DisjointModel>> runs(static_cast<std::size_t>(cfg.restarts));
  detail::parallel_for(cfg.restarts, cfg.threads, [&](int r) {
    const auto start = Clock::now();
    Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(r));
    Assignment v = random_assignment(variables, components, rng);
    double fit = op.fit(v);
    std::vector<TracePoint> trace{{0, fit, Millis(Clock::now() - start).count()}};
    for (int k = 1; k <= cfg.max_iterations; ++k) {
      SweepResult swept = row_sweep(op, v, rng);
      const double previous = fit;
      v = std::move(swept.assignment);
      fit = swept.fit;
      trace.push_back({k, fit, Millis(Clock::now() - start).count()});
      if (std::abs(fit - previous) < cfg.tolerance) break;
    }
    runs[static_cast<std::size_t>(r)] =
        make_model(x, v, std::move(trace), Millis(Clock::now() - start));
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r]->fit < runs[best]->fit) best = r;
  }
  return std::move(*runs[best]);
}

}  // namespace dpc
