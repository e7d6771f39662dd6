#include "dpc/simgen.hpp"

#include <algorithm>
#include <numeric>

#include "dpc/factor.hpp"

namespace dpc {
namespace {

constexpr int kGramSchmidtAttempts = 5;

Matrix standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  // Filled row by row so the stream order does not depend on storage order.
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = normal(rng);
  }
  return out;
}

}  // namespace

void PhiSpec::validate() const {
  const auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidArgument, "invalid simulation spec: " + what);
  };
  if (p < 2) fail("p must be at least 2");
  if (n < p) fail("n must be >= p");
  if (q < 1 || q >= p) fail("q must satisfy 1 <= q < p");
  if (static_cast<int>(block_sizes.size()) != q) fail("need exactly q block sizes");
  if (std::any_of(block_sizes.begin(), block_sizes.end(), [](int r) { return r < 1; })) {
    fail("block sizes must be positive");
  }
  if (std::accumulate(block_sizes.begin(), block_sizes.end(), 0) != p) {
    fail("block sizes must sum to p");
  }
  if (strong.lo > strong.hi || weak.lo > weak.hi) fail("empty coefficient range");
  if (strong.lo <= weak.hi) fail("strong range must lie strictly above the weak range");
  if (!(noise_scale >= 0.0)) fail("noise scale must be non-negative");
}

Eigen::MatrixXi coefficient_matrix(const PhiSpec& spec, Rng& rng) {
  spec.validate();
  std::uniform_int_distribution<int> strong(spec.strong.lo, spec.strong.hi);
  std::uniform_int_distribution<int> weak(spec.weak.lo, spec.weak.hi);
  std::vector<int> block_of;
  for (int i = 0; i < spec.q; ++i) {
    block_of.insert(block_of.end(), static_cast<std::size_t>(spec.block_sizes[static_cast<std::size_t>(i)]), i);
  }
  Eigen::MatrixXi c(spec.p, spec.q);
  for (int j = 0; j < spec.p; ++j) {
    for (int i = 0; i < spec.q; ++i) {
      c(j, i) = block_of[static_cast<std::size_t>(j)] == i ? strong(rng) : weak(rng);
    }
  }
  return c;
}

Matrix gram_schmidt(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index k = 0; k < out.cols(); ++k) {
    for (Eigen::Index i = 0; i < k; ++i) {
      out.col(k) -= out.col(i).dot(out.col(k)) * out.col(i);
    }
    const double norm = out.col(k).norm();
    if (!(norm >= 1e-10)) {
      throw Error(ErrorKind::kNumerical,
                  "gram_schmidt: column " + std::to_string(k + 1) + " is linearly dependent");
    }
    out.col(k) /= norm;
  }
  return out;
}

PlantedMatrix generate(const PhiSpec& spec) {
  spec.validate();
  Rng rng = make_rng(spec.seed);

  Matrix latent;
  for (int attempt = 0;; ++attempt) {
    try {
      latent = gram_schmidt(standard_normal(spec.n, spec.q, rng));
      break;
    } catch (const Error&) {
      if (attempt + 1 >= kGramSchmidtAttempts) throw;
    }
  }
  const Eigen::MatrixXi c = coefficient_matrix(spec, rng);
  Matrix raw = latent * c.cast<double>().transpose();
  if (spec.noise_scale > 0.0) raw += spec.noise_scale * standard_normal(spec.n, spec.p, rng);

  std::vector<int> labels;
  for (int i = 0; i < spec.q; ++i) {
    labels.insert(labels.end(), static_cast<std::size_t>(spec.block_sizes[static_cast<std::size_t>(i)]), i);
  }
  Eigen::MatrixXi coefficients = c;
  if (spec.permute) {
    std::vector<int> order(static_cast<std::size_t>(spec.p));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Matrix shuffled(raw.rows(), raw.cols());
    std::vector<int> shuffled_labels(labels.size());
    for (int j = 0; j < spec.p; ++j) {
      const auto src = order[static_cast<std::size_t>(j)];
      shuffled.col(j) = raw.col(src);
      shuffled_labels[static_cast<std::size_t>(j)] = labels[static_cast<std::size_t>(src)];
      coefficients.row(j) = c.row(src);
    }
    raw = std::move(shuffled);
    labels = std::move(shuffled_labels);
  }
  return PlantedMatrix{center(raw), Assignment(std::move(labels), spec.q),
                       std::move(coefficients)};
}

}  // namespace dpc
