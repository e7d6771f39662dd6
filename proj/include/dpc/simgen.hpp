#pragma once

// Planted-structure generator: variables split into consecutive blocks, each
// block loading strongly on one latent score and weakly on the others.

#include <cstdint>
#include <vector>

#include "dpc/model.hpp"

namespace dpc {

struct IntRange {
  int lo;
  int hi;

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct PhiSpec {
  int n = 0;  // individuals
  int p = 0;  // variables
  int q = 0;  // latent components
  std::vector<int> block_sizes;
  IntRange strong{70, 100};
  IntRange weak{1, 30};
  double noise_scale = 0.05;
  std::uint64_t seed = 0;
  bool permute = false;  // scramble variable order, carrying the planted map

  /// Throws Error(kInvalidArgument) unless n >= p, 1 <= q < p, the q block
  /// sizes are positive and sum to p, and strong lies entirely above weak.
  void validate() const;
};

struct PlantedMatrix {
  DataMatrix data;
  Assignment planted;
  Eigen::MatrixXi coefficients;  // p×q, rows in output variable order
};

/// Entry (j, i) drawn uniformly from the strong range iff variable j sits in
/// block i, otherwise from the weak range.
Eigen::MatrixXi coefficient_matrix(const PhiSpec& spec, Rng& rng);

/// Modified Gram-Schmidt. Rejects (Error kNumerical) any column whose
/// residual norm drops below 1e-10.
Matrix gram_schmidt(const Matrix& m);

/// Z (n×q standard normal, orthonormalized) times Cᵀ plus noise_scale·N,
/// centered by column.
PlantedMatrix generate(const PhiSpec& spec);

}  // namespace dpc
