#pragma once

// Assignment-to-loadings operator, scores, the relative-error objective, the
// unconstrained PCA baseline and explained-variance accounting.

#include <span>
#include <utility>
#include <vector>

#include "dpc/model.hpp"

namespace dpc {

/// J×Q loadings with disjoint column supports and unit columns.
class DisjointLoadings {
 public:
  /// Validates unit columns (1e-10), disjoint supports and no zero row.
  static DisjointLoadings from_matrix(Matrix values);

  const Matrix& values() const noexcept { return values_; }
  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }

 private:
  friend class LoadingOperator;
  explicit DisjointLoadings(Matrix values) : values_(std::move(values)) {}

  Matrix values_;
};

struct VarianceReport {
  std::vector<double> per_component;  // percent of total variation
  double total = 0.0;                 // percent
  std::vector<double> column_variances;
};

struct ClassicPca {
  Matrix loadings;  // J×Q, leading right singular vectors
  Vector singular_values;
  double fit = 0.0;
};

/// Flips v so its entries sum to a non-negative value; a (near-)zero sum
/// makes the first nonzero entry positive instead.
void canonicalize_sign(Vector& v);

/// Subtracts column means. Needs at least two rows.
DataMatrix center(const Matrix& raw);

/// Leading right singular vector of w, sign-canonicalized. Computed as the
/// top eigenvector of wᵀw. Throws Error(kNumerical) for an all-zero w.
Vector top_right_singular_vector(const Matrix& w);

/// The operator T. Caches XᵀX so each block's leading right singular vector
/// comes from an m×m symmetric eigenproblem on the block's Gram matrix.
/// All methods are const and safe to call concurrently.
class LoadingOperator {
 public:
  explicit LoadingOperator(const DataMatrix& x);

  struct Block {
    double energy = 0.0;  // squared leading singular value of the block
    Vector direction;     // unit, canonical sign, one entry per member
  };

  /// `members` must be sorted and non-empty.
  Block block(std::span<const int> members) const;
  double block_energy(std::span<const int> members) const;

  DisjointLoadings loadings(const Assignment& v) const;
  /// T(v) together with its fit, sharing the per-block eigenproblems.
  std::pair<DisjointLoadings, double> evaluate(const Assignment& v) const;
  /// 1 - sum of block energies / ||X||^2, equal to objective(x, T(v)).
  double fit(const Assignment& v) const;
  double fit_from_energy(double explained_energy) const;

  double total_energy() const noexcept { return total_; }
  int variables() const noexcept { return static_cast<int>(gram_.rows()); }

 private:
  Matrix gram_;
  double total_;
};

DisjointLoadings loadings_from_assignment(const DataMatrix& x, const Assignment& v);

/// A = X·B.
Matrix scores(const DataMatrix& x, const Matrix& b);
inline Matrix scores(const DataMatrix& x, const DisjointLoadings& b) {
  return scores(x, b.values());
}

/// ||X - (X·B)·Bᵀ||² / ||X||² in Frobenius norms.
double objective(const DataMatrix& x, const Matrix& b);
inline double objective(const DataMatrix& x, const DisjointLoadings& b) {
  return objective(x, b.values());
}

/// Top-q right singular vectors of X and the fit of the rank-q truncation.
ClassicPca classic_pca(const DataMatrix& x, int components);

/// Percent of total column variance carried by each score column. Both
/// numerator and denominator use the I-1 sample convention.
VarianceReport explained_variance(const DataMatrix& x, const Matrix& a);

}  // namespace dpc
