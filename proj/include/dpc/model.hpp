#pragma once

// Core value types for disjoint principal components: the data matrix, the
// binary variable-to-component assignment, and exact counting of the
// feasible assignment space.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace dpc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

enum class ErrorKind {
  kInvalidArgument,
  kDimension,
  kNumerical,
  kBudgetExceeded,
  kIo,
  kParse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Builds a generator from a user seed and a stream index, so that derived
/// streams (restarts, particles) are independent of scheduling order.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Individuals in rows, variables in columns.
class DataMatrix {
 public:
  /// Throws on an empty matrix or non-finite entries. When `centered` is true
  /// the column means must vanish within 1e-9.
  explicit DataMatrix(Matrix values, bool centered = false);

  const Matrix& values() const noexcept { return values_; }
  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }
  bool centered() const noexcept { return centered_; }

 private:
  Matrix values_;
  bool centered_;
};

/// A J×Q candidate 0/1 matrix that has not been validated yet.
class BinaryMatrix {
 public:
  BinaryMatrix(int rows, int cols);
  BinaryMatrix(int rows, int cols, std::vector<std::uint8_t> entries);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::uint8_t operator()(int j, int q) const { return entries_[index(j, q)]; }
  std::uint8_t& operator()(int j, int q) { return entries_[index(j, q)]; }

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;

 private:
  std::size_t index(int j, int q) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(q);
  }

  int rows_;
  int cols_;
  std::vector<std::uint8_t> entries_;
};

struct Violation {
  enum class Kind { kShape, kRowSum, kEmptyColumn };
  Kind kind;
  int index;  // 0-based row or column; -1 for shape violations

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks the row-sum-one and no-empty-column constraints. Entries other
/// than 0/1 are reported as row-sum violations on their row.
ValidationResult validate_assignment(const BinaryMatrix& v);

/// A feasible J×Q assignment: every variable in exactly one component and no
/// component empty. Stored as the 0-based component label of each variable.
class Assignment {
 public:
  /// Throws Error(kInvalidArgument) unless the labels describe a feasible
  /// assignment with `components` columns.
  Assignment(std::vector<int> labels, int components);

  static Assignment from_matrix(const BinaryMatrix& v);
  /// Parses the compact text form: 1-based component index per variable.
  static Assignment parse(std::string_view text, int components);

  int variables() const noexcept { return static_cast<int>(labels_.size()); }
  int components() const noexcept { return components_; }
  int label(int j) const { return labels_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  /// Variables of component q in ascending order.
  std::vector<int> members(int q) const;
  std::vector<int> column_sizes() const;

  BinaryMatrix to_matrix() const;
  std::string to_string() const;

  /// Relabels components in order of their first variable, so assignments
  /// that differ only by a column permutation compare equal.
  Assignment canonical() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<int> labels_;
  int components_;
};

/// True iff the labels in [0, components) cover every component.
bool labels_feasible(const std::vector<int>& labels, int components);

/// Each row's one placed uniformly at random, then empty columns repaired.
Assignment random_assignment(int variables, int components, Rng& rng);

/// Repeatedly takes the most populated column (lowest index on ties),
/// shuffles its variables and moves the first ceil(m/2) of them to the lowest
/// empty column. The input rows must each sum to one and at least one column
/// must be empty.
Assignment repair_empty_columns(const BinaryMatrix& v, Rng& rng);

/// Label-vector form of repair_empty_columns; a no-op on feasible labels.
void repair_labels(std::vector<int>& labels, int components, Rng& rng);

using BigInt = boost::multiprecision::cpp_int;

/// Number of onto maps from J variables to Q components:
/// sum_k (-1)^k C(Q,k) (Q-k)^J, which is 0 when J < Q.
BigInt count_feasible(int variables, int components);

}  // namespace dpc
