#pragma once

// Shared generators and brute-force reference computations for the tests.
// The references deliberately avoid the library's own numerical paths.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "dpc/factor.hpp"
#include "dpc/model.hpp"

namespace dpc::test {

inline Matrix gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

inline DataMatrix centered_gaussian(int rows, int cols, Rng& rng) {
  return center(gaussian(rows, cols, rng));
}

inline int uniform_int(int lo, int hi, Rng& rng) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Random onto labelling: the first Q variables in a shuffled order cover every
// component, the rest are free.
inline Assignment random_onto(int variables, int components, Rng& rng) {
  std::vector<int> order(static_cast<std::size_t>(variables));
  for (int j = 0; j < variables; ++j) order[static_cast<std::size_t>(j)] = j;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> labels(static_cast<std::size_t>(variables));
  for (int k = 0; k < variables; ++k) {
    labels[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] =
        k < components ? k : uniform_int(0, components - 1, rng);
  }
  return Assignment(labels, components);
}

inline Matrix naive_product(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < b.cols(); ++k)
      for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, k) += a(i, j) * b(j, k);
  return out;
}

// ‖X − X B Bᵀ‖² / ‖X‖² with explicit loops.
inline double naive_fit(const Matrix& x, const Matrix& b) {
  const Matrix a = naive_product(x, b);
  double residual = 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      double approx = 0.0;
      for (Eigen::Index q = 0; q < b.cols(); ++q) approx += a(i, q) * b(j, q);
      residual += (x(i, j) - approx) * (x(i, j) - approx);
      total += x(i, j) * x(i, j);
    }
  }
  return residual / total;
}

// Leading right singular vector via a full Jacobi SVD, sign fixed so the sum
// is non-negative (first nonzero positive on a zero sum).
inline Vector full_svd_direction(const Matrix& w) {
  Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeFullV);
  Vector v = svd.matrixV().col(0);
  double sum = v.sum();
  if (std::abs(sum) <= 1e-12) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > 1e-12) {
        sum = v[i];
        break;
      }
    }
  }
  if (sum < 0) v = -v;
  return v;
}

// Disjoint loadings built block by block from the full SVD reference.
inline Matrix reference_loadings(const Matrix& x, const Assignment& v) {
  Matrix b = Matrix::Zero(x.cols(), v.components());
  for (int q = 0; q < v.components(); ++q) {
    const std::vector<int> members = v.members(q);
    Matrix block(x.rows(), static_cast<Eigen::Index>(members.size()));
    for (std::size_t k = 0; k < members.size(); ++k) {
      block.col(static_cast<Eigen::Index>(k)) = x.col(members[k]);
    }
    const Vector d = full_svd_direction(block);
    for (std::size_t k = 0; k < members.size(); ++k) b(members[k], q) = d[static_cast<Eigen::Index>(k)];
  }
  return b;
}

// Every label vector in {0..Q-1}^J, filtered to onto ones, by plain counting.
inline std::vector<std::vector<int>> brute_force_labels(int variables, int components) {
  std::vector<std::vector<int>> out;
  std::vector<int> labels(static_cast<std::size_t>(variables), 0);
  while (true) {
    std::vector<int> seen(static_cast<std::size_t>(components), 0);
    for (int l : labels) seen[static_cast<std::size_t>(l)] = 1;
    if (std::count(seen.begin(), seen.end(), 1) == components) out.push_back(labels);
    int pos = variables - 1;
    while (pos >= 0 && labels[static_cast<std::size_t>(pos)] == components - 1) {
      labels[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++labels[static_cast<std::size_t>(pos)];
  }
  return out;
}

inline double brute_force_best_fit(const Matrix& x, int components) {
  double best = 2.0;
  for (const auto& labels : brute_force_labels(static_cast<int>(x.cols()), components)) {
    best = std::min(best, naive_fit(x, reference_loadings(x, Assignment(labels, components))));
  }
  return best;
}

inline bool same_partition(const Assignment& a, const Assignment& b) {
  return a.canonical() == b.canonical();
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& stem) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (stem + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace dpc::test
