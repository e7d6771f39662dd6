#include "dpc/cbpso.hpp"

#include <cmath>

#include "parallel.hpp"

namespace dpc {
namespace {

using Clock = std::chrono::steady_clock;
using Millis = std::chrono::duration<double, std::milli>;

}  // namespace

void PsoConfig::validate() const {
  if (particles < 1) throw Error(ErrorKind::kInvalidArgument, "cbpso needs at least one particle");
  if (max_iterations < 1) {
    throw Error(ErrorKind::kInvalidArgument, "cbpso needs max_iterations >= 1");
  }
  if (!(max_inertia >= min_inertia)) {
    throw Error(ErrorKind::kInvalidArgument, "cbpso needs max_inertia >= min_inertia");
  }
  if (!(cognitive_weight >= 0.0) || !(social_weight >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "cbpso weights must be non-negative");
  }
}

double squash(double z, SigmoidOrientation orientation) {
  const double e = orientation == SigmoidOrientation::kLiteral ? std::exp(z) : std::exp(-z);
  return 2.0 / (1.0 + e) - 1.0;
}

Matrix squash(const Matrix& m, SigmoidOrientation orientation) {
  return m.unaryExpr([orientation](double z) { return squash(z, orientation); });
}

Assignment binarize(const Matrix& m) {
  const auto rows = static_cast<int>(m.rows());
  const auto cols = static_cast<int>(m.cols());
  if (cols < 1 || rows < cols) {
    throw Error(ErrorKind::kDimension, "binarize needs J >= Q >= 1");
  }
  if (!m.allFinite()) {
    throw Error(ErrorKind::kNumerical, "binarize needs finite entries");
  }
  std::vector<int> labels(static_cast<std::size_t>(rows));
  std::vector<double> source(static_cast<std::size_t>(rows));
  std::vector<int> sizes(static_cast<std::size_t>(cols), 0);
  for (int j = 0; j < rows; ++j) {
    int arg = 0;
    for (int q = 1; q < cols; ++q) {
      if (std::abs(m(j, q)) > std::abs(m(j, arg))) arg = q;
    }
    labels[static_cast<std::size_t>(j)] = arg;
    source[static_cast<std::size_t>(j)] = std::abs(m(j, arg));
    ++sizes[static_cast<std::size_t>(arg)];
  }
  for (int empty = 0; empty < cols; ++empty) {
    if (sizes[static_cast<std::size_t>(empty)] > 0) continue;
    const int donor = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    int moved = -1;
    for (int j = 0; j < rows; ++j) {
      if (labels[static_cast<std::size_t>(j)] != donor) continue;
      if (moved < 0 || source[static_cast<std::size_t>(j)] < source[static_cast<std::size_t>(moved)]) {
        moved = j;
      }
    }
    labels[static_cast<std::size_t>(moved)] = empty;
    --sizes[static_cast<std::size_t>(donor)];
    ++sizes[static_cast<std::size_t>(empty)];
  }
  return Assignment(std::move(labels), cols);
}

double inertia_at(int k, const PsoConfig& cfg) {
  if (k < 0 || k > cfg.max_iterations) {
    throw Error(ErrorKind::kInvalidArgument, "inertia iteration out of range");
  }
  // Convex form of max - (max - min)/n * k; exact at both endpoints.
  const double t = static_cast<double>(k) / static_cast<double>(cfg.max_iterations);
  return cfg.max_inertia * (1.0 - t) + cfg.min_inertia * t;
}

Matrix velocity_update(const Particle& p, const Matrix& global_best_loadings, double inertia,
                       const PsoConfig& cfg, Rng& rng) {
  const Matrix& current = p.loadings.values();
  if (global_best_loadings.rows() != current.rows() ||
      global_best_loadings.cols() != current.cols() ||
      p.velocity.rows() != current.rows() || p.velocity.cols() != current.cols()) {
    throw Error(ErrorKind::kDimension, "velocity update operands do not conform");
  }
  const Matrix& personal = p.best_loadings.values();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix next(current.rows(), current.cols());
  double rho_cognitive = 0.0;
  double rho_social = 0.0;
  if (cfg.random_factors == RandomFactors::kPerParticle) {
    rho_cognitive = unit(rng);
    rho_social = unit(rng);
  }
  for (Eigen::Index j = 0; j < current.rows(); ++j) {
    for (Eigen::Index q = 0; q < current.cols(); ++q) {
      if (cfg.random_factors == RandomFactors::kPerEntry) {
        rho_cognitive = unit(rng);
        rho_social = unit(rng);
      }
      const double raw = inertia * p.velocity(j, q) +
                         rho_cognitive * cfg.cognitive_weight * (personal(j, q) - current(j, q)) +
                         rho_social * cfg.social_weight * (global_best_loadings(j, q) - current(j, q));
      next(j, q) = squash(raw, cfg.orientation);
    }
  }
  return next;
}

void step_particle(const LoadingOperator& op, Particle& p, const SwarmState& swarm,
                   double inertia, const PsoConfig& cfg) {
  p.velocity = velocity_update(p, swarm.best_loadings.values(), inertia, cfg, p.rng);
  // binarize only compares magnitudes, and the squash is monotone in |z|, so
  // squashing the temporary position first would not change the result.
  const Matrix temporary = p.loadings.values() + p.velocity;
  p.position = binarize(temporary);
  auto [loadings, fit] = op.evaluate(p.position);
  p.loadings = std::move(loadings);
  p.fit = fit;
  if (p.fit < p.best_fit) {
    p.best_position = p.position;
    p.best_loadings = p.loadings;
    p.best_fit = p.fit;
  }
}

Particle init_particle(const LoadingOperator& op, int components, const PsoConfig& cfg,
                       int index) {
  Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(index));
  Assignment position = random_assignment(op.variables(), components, rng);
  auto [loadings, fit] = op.evaluate(position);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Matrix velocity(op.variables(), components);
  for (Eigen::Index j = 0; j < velocity.rows(); ++j) {
    for (Eigen::Index q = 0; q < velocity.cols(); ++q) velocity(j, q) = unit(rng);
  }
  return Particle{position, loadings, fit, position, loadings, fit, std::move(velocity),
                  std::move(rng)};
}

DisjointModel cbpso_fit(const DataMatrix& x, int components, const PsoConfig& cfg) {
  cfg.validate();
  if (components < 1 || components > x.cols()) {
    throw Error(ErrorKind::kDimension, "cbpso needs 1 <= Q <= J");
  }
  const auto start = Clock::now();
  const LoadingOperator op(x);

  std::vector<Particle> particles;
  particles.reserve(static_cast<std::size_t>(cfg.particles));
  std::size_t leader = 0;
  for (int p = 0; p < cfg.particles; ++p) {
    particles.push_back(init_particle(op, components, cfg, p));
    if (particles.back().fit < particles[leader].fit) leader = particles.size() - 1;
  }
  const Particle& first_best = particles[leader];
  SwarmState swarm{{}, first_best.position, first_best.loadings, first_best.fit, 0, {}};
  swarm.particles = std::move(particles);
  auto found = Clock::now();
  swarm.trace.push_back({0, swarm.best_fit, Millis(found - start).count()});

  const auto adopt = [&](const Particle& p) {
    if (p.fit < swarm.best_fit) {
      swarm.best_position = p.position;
      swarm.best_loadings = p.loadings;
      swarm.best_fit = p.fit;
      found = Clock::now();
    }
  };

  for (int k = 1; k <= cfg.max_iterations; ++k) {
    const double inertia = inertia_at(k - 1, cfg);
    if (cfg.best_update == BestUpdate::kAsynchronous) {
      for (Particle& p : swarm.particles) {
        step_particle(op, p, swarm, inertia, cfg);
        adopt(p);
      }
    } else {
      detail::parallel_for(static_cast<int>(swarm.particles.size()), cfg.threads, [&](int i) {
        step_particle(op, swarm.particles[static_cast<std::size_t>(i)], swarm, inertia, cfg);
      });
      for (const Particle& p : swarm.particles) adopt(p);
    }
    swarm.iteration = k;
    swarm.trace.push_back({k, swarm.best_fit, Millis(Clock::now() - start).count()});
  }
  return make_model(x, swarm.best_position, std::move(swarm.trace), Millis(found - start));
}

}  // namespace dpc
