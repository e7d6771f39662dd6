#include "dpc/factor.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dpc {
namespace {

constexpr double kUnitTolerance = 1e-10;

Vector sample_column_variances(const Matrix& m) {
  const Eigen::Index n = m.rows();
  Vector out(m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double mean = m.col(c).mean();
    out[c] = (m.col(c).array() - mean).square().sum() / static_cast<double>(n - 1);
  }
  return out;
}

Matrix principal_submatrix(const Matrix& gram, std::span<const int> members) {
  const auto m = static_cast<Eigen::Index>(members.size());
  Matrix sub(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      sub(a, b) = gram(members[static_cast<std::size_t>(a)],
                       members[static_cast<std::size_t>(b)]);
    }
  }
  return sub;
}

}  // namespace

void canonicalize_sign(Vector& v) {
  const double scale = v.lpNorm<1>();
  if (scale == 0.0) return;
  const double sum = v.sum();
  if (std::abs(sum) > 1e-12 * scale) {
    if (sum < 0.0) v = -v;
    return;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12 * scale) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

DisjointLoadings DisjointLoadings::from_matrix(Matrix values) {
  const Eigen::Index rows = values.rows();
  const Eigen::Index cols = values.cols();
  if (rows < 1 || cols < 1 || rows < cols || !values.allFinite()) {
    throw Error(ErrorKind::kDimension, "loadings must be finite J×Q with J >= Q >= 1");
  }
  for (Eigen::Index q = 0; q < cols; ++q) {
    if (std::abs(values.col(q).norm() - 1.0) > kUnitTolerance) {
      throw Error(ErrorKind::kInvalidArgument,
                  "loading column " + std::to_string(q + 1) + " is not unit norm");
    }
  }
  for (Eigen::Index j = 0; j < rows; ++j) {
    int nonzero = 0;
    for (Eigen::Index q = 0; q < cols; ++q) {
      if (values(j, q) != 0.0) ++nonzero;
    }
    if (nonzero > 1) {
      throw Error(ErrorKind::kInvalidArgument,
                  "loading row " + std::to_string(j + 1) + " belongs to several components");
    }
    if (nonzero == 0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "loading row " + std::to_string(j + 1) + " is all zero");
    }
  }
  return DisjointLoadings(std::move(values));
}

DataMatrix center(const Matrix& raw) {
  if (raw.rows() < 2) {
    throw Error(ErrorKind::kDimension, "centering needs at least two individuals");
  }
  if (!raw.allFinite()) {
    throw Error(ErrorKind::kNumerical, "data matrix has non-finite entries");
  }
  const Eigen::RowVectorXd means = raw.colwise().mean();
  Matrix centered = raw.rowwise() - means;
  return DataMatrix(std::move(centered), true);
}

Vector top_right_singular_vector(const Matrix& w) {
  if (w.rows() < 1 || w.cols() < 1) {
    throw Error(ErrorKind::kDimension, "empty matrix has no singular vectors");
  }
  if (w.squaredNorm() == 0.0) {
    throw Error(ErrorKind::kNumerical, "all-zero matrix has no leading singular direction");
  }
  if (w.cols() == 1) return Vector::Ones(1);
  const Matrix gram = w.transpose() * w;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  Vector direction = solver.eigenvectors().col(w.cols() - 1);
  direction.normalize();
  canonicalize_sign(direction);
  return direction;
}

LoadingOperator::LoadingOperator(const DataMatrix& x)
    : gram_(x.values().transpose() * x.values()), total_(x.values().squaredNorm()) {}

LoadingOperator::Block LoadingOperator::block(std::span<const int> members) const {
  const auto m = static_cast<Eigen::Index>(members.size());
  if (m == 0) {
    throw Error(ErrorKind::kInvalidArgument, "component has no variables");
  }
  const Matrix sub = principal_submatrix(gram_, members);
  if (!(sub.trace() > 1e-24 * total_)) {
    throw Error(ErrorKind::kNumerical, "component submatrix is zero");
  }
  Block out;
  if (m == 1) {
    out.energy = sub(0, 0);
    out.direction = Vector::Ones(1);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sub);
  out.energy = solver.eigenvalues()[m - 1];
  out.direction = solver.eigenvectors().col(m - 1);
  out.direction.normalize();
  canonicalize_sign(out.direction);
  return out;
}

double LoadingOperator::block_energy(std::span<const int> members) const {
  const auto m = static_cast<Eigen::Index>(members.size());
  if (m == 1) {
    const double energy = gram_(members[0], members[0]);
    if (!(energy > 1e-24 * total_)) {
      throw Error(ErrorKind::kNumerical, "component submatrix is zero");
    }
    return energy;
  }
  if (m == 0) {
    throw Error(ErrorKind::kInvalidArgument, "component has no variables");
  }
  const Matrix sub = principal_submatrix(gram_, members);
  if (!(sub.trace() > 1e-24 * total_)) {
    throw Error(ErrorKind::kNumerical, "component submatrix is zero");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sub, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[m - 1];
}

std::pair<DisjointLoadings, double> LoadingOperator::evaluate(const Assignment& v) const {
  if (v.variables() != variables()) {
    throw Error(ErrorKind::kDimension, "assignment rows do not match data columns");
  }
  Matrix b = Matrix::Zero(v.variables(), v.components());
  double energy = 0.0;
  for (int q = 0; q < v.components(); ++q) {
    const std::vector<int> members = v.members(q);
    const Block blk = block(members);
    energy += blk.energy;
    for (std::size_t i = 0; i < members.size(); ++i) {
      b(members[i], q) = blk.direction[static_cast<Eigen::Index>(i)];
    }
  }
  return {DisjointLoadings(std::move(b)), fit_from_energy(energy)};
}

DisjointLoadings LoadingOperator::loadings(const Assignment& v) const {
  return evaluate(v).first;
}

double LoadingOperator::fit_from_energy(double explained_energy) const {
  if (!(total_ > 0.0)) {
    throw Error(ErrorKind::kNumerical, "objective undefined for a zero data matrix");
  }
  return std::max(0.0, 1.0 - explained_energy / total_);
}

double LoadingOperator::fit(const Assignment& v) const {
  if (v.variables() != variables()) {
    throw Error(ErrorKind::kDimension, "assignment rows do not match data columns");
  }
  double energy = 0.0;
  for (int q = 0; q < v.components(); ++q) {
    energy += block_energy(v.members(q));
  }
  return fit_from_energy(energy);
}

DisjointLoadings loadings_from_assignment(const DataMatrix& x, const Assignment& v) {
  return LoadingOperator(x).loadings(v);
}

Matrix scores(const DataMatrix& x, const Matrix& b) {
  if (b.rows() != x.cols()) {
    throw Error(ErrorKind::kDimension, "loadings rows do not match data columns");
  }
  return x.values() * b;
}

double objective(const DataMatrix& x, const Matrix& b) {
  if (b.rows() != x.cols()) {
    throw Error(ErrorKind::kDimension, "loadings rows do not match data columns");
  }
  const double total = x.values().squaredNorm();
  if (!(total > 0.0)) {
    throw Error(ErrorKind::kNumerical, "objective undefined for a zero data matrix");
  }
  const Matrix a = x.values() * b;
  const Matrix residual = x.values() - a * b.transpose();
  return residual.squaredNorm() / total;
}

ClassicPca classic_pca(const DataMatrix& x, int components) {
  const auto limit = std::min(x.rows(), x.cols());
  if (components < 1 || components > limit) {
    throw Error(ErrorKind::kDimension, "classic PCA needs 1 <= Q <= min(I, J)");
  }
  Eigen::BDCSVD<Matrix> svd(x.values(), Eigen::ComputeThinV);
  ClassicPca out;
  out.singular_values = svd.singularValues();
  out.loadings = svd.matrixV().leftCols(components);
  for (int q = 0; q < components; ++q) {
    Vector column = out.loadings.col(q);
    canonicalize_sign(column);
    out.loadings.col(q) = column;
  }
  const double all = out.singular_values.squaredNorm();
  if (!(all > 0.0)) {
    throw Error(ErrorKind::kNumerical, "classic PCA undefined for a zero data matrix");
  }
  const double kept = out.singular_values.head(components).squaredNorm();
  out.fit = std::max(0.0, 1.0 - kept / all);
  return out;
}

VarianceReport explained_variance(const DataMatrix& x, const Matrix& a) {
  if (x.rows() < 2) {
    throw Error(ErrorKind::kDimension, "variance needs at least two individuals");
  }
  if (a.rows() != x.rows()) {
    throw Error(ErrorKind::kDimension, "score rows do not match data rows");
  }
  const Vector column_var = sample_column_variances(x.values());
  const double total_var = column_var.sum();
  if (!(total_var > 0.0)) {
    throw Error(ErrorKind::kNumerical, "data matrix has zero total variance");
  }
  const Vector score_var = sample_column_variances(a);
  VarianceReport report;
  report.column_variances.assign(column_var.begin(), column_var.end());
  for (Eigen::Index q = 0; q < score_var.size(); ++q) {
    const double percent = score_var[q] / total_var * 100.0;
    report.per_component.push_back(percent);
    report.total += percent;
  }
  return report;
}

}  // namespace dpc
