#pragma once

// Constrained binary particle swarm over feasible assignments. Positions are
// assignments, velocities are real J×Q matrices confined to [-1, 1], and the
// operator O (binarize) maps any real matrix back into the feasible set.

#include <cstdint>
#include <vector>

#include "dpc/dpca.hpp"
#include "dpc/factor.hpp"
#include "dpc/model.hpp"

namespace dpc {

/// kConventional: L(z) = 2/(1+e^-z) - 1 = tanh(z/2); the squashed velocity
/// points toward the personal and global bests.
/// kLiteral: L(z) = 2/(1+e^z) - 1 = -tanh(z/2); same magnitudes, opposite
/// sign, which makes the cognitive and social terms repulsive.
enum class SigmoidOrientation { kLiteral, kConventional };

/// Granularity of the stochastic factors in the velocity update.
enum class RandomFactors { kPerEntry, kPerParticle };

/// kAsynchronous updates the global best inside the particle loop, so later
/// particles in the same iteration already see it. kSynchronous freezes the
/// global best for the whole iteration and merges at the end; this changes
/// the search trajectory but lets particles step in parallel.
enum class BestUpdate { kAsynchronous, kSynchronous };

struct PsoConfig {
  int particles = 500;
  int max_iterations = 30;
  double min_inertia = 0.5;
  double max_inertia = 3.0;
  double cognitive_weight = 1.5;
  double social_weight = 1.5;
  std::uint64_t seed = 0;
  SigmoidOrientation orientation = SigmoidOrientation::kConventional;
  RandomFactors random_factors = RandomFactors::kPerEntry;
  BestUpdate best_update = BestUpdate::kAsynchronous;
  int threads = 1;  // only used with kSynchronous

  void validate() const;
};

struct Particle {
  Assignment position;
  DisjointLoadings loadings;  // T(position)
  double fit;
  Assignment best_position;
  DisjointLoadings best_loadings;
  double best_fit;
  Matrix velocity;  // entries in [-1, 1]
  Rng rng;
};

struct SwarmState {
  std::vector<Particle> particles;
  Assignment best_position;
  DisjointLoadings best_loadings;
  double best_fit;
  int iteration = 0;
  std::vector<TracePoint> trace;
};

double squash(double z, SigmoidOrientation orientation = SigmoidOrientation::kLiteral);
Matrix squash(const Matrix& m, SigmoidOrientation orientation = SigmoidOrientation::kLiteral);

/// Operator O. Each row takes its largest |entry| (leftmost on ties). While a
/// column is empty, the most populated column (lowest index on ties) gives up
/// the variable whose selecting |entry| was smallest (lowest row on ties),
/// and empty columns are filled in increasing index order.
Assignment binarize(const Matrix& m);

/// max_inertia at k = 0 decaying linearly to min_inertia at k = max_iterations.
double inertia_at(int k, const PsoConfig& cfg);

/// Squashed inertia·velocity + ρ1·wc·(B*_p − B_p) + ρ2·ws·(B* − B_p).
Matrix velocity_update(const Particle& p, const Matrix& global_best_loadings,
                       double inertia, const PsoConfig& cfg, Rng& rng);

/// Moves p to binarize(B_p + velocity) and refreshes its personal best when
/// the new fit is strictly lower. Uses the particle's own generator.
void step_particle(const LoadingOperator& op, Particle& p, const SwarmState& swarm,
                   double inertia, const PsoConfig& cfg);

/// Builds a particle at a random feasible position with velocity entries
/// uniform in [-1, 1], seeded from (cfg.seed, index).
Particle init_particle(const LoadingOperator& op, int components, const PsoConfig& cfg,
                       int index);

DisjointModel cbpso_fit(const DataMatrix& x, int components, const PsoConfig& cfg);

}  // namespace dpc
