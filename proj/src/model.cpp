#include "dpc/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dpc {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

DataMatrix::DataMatrix(Matrix values, bool centered)
    : values_(std::move(values)), centered_(centered) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw Error(ErrorKind::kDimension, "data matrix must be at least 1x1");
  }
  if (!values_.allFinite()) {
    throw Error(ErrorKind::kNumerical, "data matrix has non-finite entries");
  }
  if (centered_) {
    const Vector means = values_.colwise().mean();
    for (Eigen::Index j = 0; j < means.size(); ++j) {
      if (std::abs(means[j]) > 1e-9) {
        throw Error(ErrorKind::kInvalidArgument,
                    "column " + std::to_string(j + 1) +
                        " is flagged centered but has nonzero mean");
      }
    }
  }
}

BinaryMatrix::BinaryMatrix(int rows, int cols)
    : rows_(rows),
      cols_(cols),
      entries_(static_cast<std::size_t>(std::max(rows, 0)) *
                   static_cast<std::size_t>(std::max(cols, 0)),
               0) {
  if (rows < 0 || cols < 0) {
    throw Error(ErrorKind::kDimension, "negative binary matrix shape");
  }
}

BinaryMatrix::BinaryMatrix(int rows, int cols, std::vector<std::uint8_t> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 0 || cols < 0 ||
      entries_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw Error(ErrorKind::kDimension, "binary matrix entry count does not match shape");
  }
}

ValidationResult validate_assignment(const BinaryMatrix& v) {
  ValidationResult result;
  if (v.rows() < 1 || v.cols() < 1 || v.rows() < v.cols()) {
    result.violations.push_back({Violation::Kind::kShape, -1});
  }
  std::vector<int> column_sums(static_cast<std::size_t>(v.cols()), 0);
  for (int j = 0; j < v.rows(); ++j) {
    int sum = 0;
    bool binary = true;
    for (int q = 0; q < v.cols(); ++q) {
      const int entry = v(j, q);
      if (entry > 1) binary = false;
      sum += entry;
      column_sums[static_cast<std::size_t>(q)] += entry;
    }
    if (!binary || sum != 1) {
      result.violations.push_back({Violation::Kind::kRowSum, j});
    }
  }
  for (int q = 0; q < v.cols(); ++q) {
    if (column_sums[static_cast<std::size_t>(q)] == 0) {
      result.violations.push_back({Violation::Kind::kEmptyColumn, q});
    }
  }
  return result;
}

bool labels_feasible(const std::vector<int>& labels, int components) {
  if (components < 1) return false;
  std::vector<char> seen(static_cast<std::size_t>(components), 0);
  for (int label : labels) {
    if (label < 0 || label >= components) return false;
    seen[static_cast<std::size_t>(label)] = 1;
  }
  return std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; });
}

Assignment::Assignment(std::vector<int> labels, int components)
    : labels_(std::move(labels)), components_(components) {
  if (components_ < 1 || static_cast<int>(labels_.size()) < components_) {
    throw Error(ErrorKind::kDimension,
                "assignment needs at least as many variables as components");
  }
  if (!labels_feasible(labels_, components_)) {
    throw Error(ErrorKind::kInvalidArgument,
                "labels do not form a feasible assignment");
  }
}

Assignment Assignment::from_matrix(const BinaryMatrix& v) {
  const ValidationResult check = validate_assignment(v);
  if (!check.ok()) {
    throw Error(ErrorKind::kInvalidArgument, "binary matrix is not a feasible assignment");
  }
  std::vector<int> labels(static_cast<std::size_t>(v.rows()));
  for (int j = 0; j < v.rows(); ++j) {
    for (int q = 0; q < v.cols(); ++q) {
      if (v(j, q) == 1) labels[static_cast<std::size_t>(j)] = q;
    }
  }
  return Assignment(std::move(labels), v.cols());
}

Assignment Assignment::parse(std::string_view text, int components) {
  std::istringstream in{std::string(text)};
  std::vector<int> labels;
  std::string token;
  while (in >> token) {
    int value = 0;
    std::size_t used = 0;
    try {
      value = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw Error(ErrorKind::kParse, "bad assignment token '" + token + "'");
    }
    labels.push_back(value - 1);
  }
  return Assignment(std::move(labels), components);
}

std::vector<int> Assignment::members(int q) const {
  std::vector<int> out;
  for (int j = 0; j < variables(); ++j) {
    if (labels_[static_cast<std::size_t>(j)] == q) out.push_back(j);
  }
  return out;
}

std::vector<int> Assignment::column_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(components_), 0);
  for (int label : labels_) ++sizes[static_cast<std::size_t>(label)];
  return sizes;
}

BinaryMatrix Assignment::to_matrix() const {
  BinaryMatrix v(variables(), components_);
  for (int j = 0; j < variables(); ++j) v(j, label(j)) = 1;
  return v;
}

std::string Assignment::to_string() const {
  std::string out;
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    if (j > 0) out += ' ';
    out += std::to_string(labels_[j] + 1);
  }
  return out;
}

Assignment Assignment::canonical() const {
  std::vector<int> relabel(static_cast<std::size_t>(components_), -1);
  int next = 0;
  std::vector<int> labels = labels_;
  for (int& label : labels) {
    int& target = relabel[static_cast<std::size_t>(label)];
    if (target < 0) target = next++;
    label = target;
  }
  return Assignment(std::move(labels), components_);
}

void repair_labels(std::vector<int>& labels, int components, Rng& rng) {
  if (static_cast<int>(labels.size()) < components) {
    throw Error(ErrorKind::kDimension, "cannot repair: fewer variables than components");
  }
  for (;;) {
    std::vector<int> sizes(static_cast<std::size_t>(components), 0);
    for (int label : labels) ++sizes[static_cast<std::size_t>(label)];
    const auto empty = std::find(sizes.begin(), sizes.end(), 0);
    if (empty == sizes.end()) return;
    // max_element returns the first maximum: ties go to the lowest column.
    const auto donor = std::max_element(sizes.begin(), sizes.end());
    const int donor_q = static_cast<int>(donor - sizes.begin());
    const int empty_q = static_cast<int>(empty - sizes.begin());

    std::vector<int> donor_rows;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] == donor_q) donor_rows.push_back(static_cast<int>(j));
    }
    std::shuffle(donor_rows.begin(), donor_rows.end(), rng);
    const std::size_t moved = (donor_rows.size() + 1) / 2;
    for (std::size_t i = 0; i < moved; ++i) {
      labels[static_cast<std::size_t>(donor_rows[i])] = empty_q;
    }
  }
}

Assignment repair_empty_columns(const BinaryMatrix& v, Rng& rng) {
  const ValidationResult check = validate_assignment(v);
  bool has_empty = false;
  for (const Violation& violation : check.violations) {
    switch (violation.kind) {
      case Violation::Kind::kShape:
        throw Error(ErrorKind::kDimension, "cannot repair: fewer variables than components");
      case Violation::Kind::kRowSum:
        throw Error(ErrorKind::kInvalidArgument,
                    "cannot repair: row " + std::to_string(violation.index + 1) +
                        " does not sum to one");
      case Violation::Kind::kEmptyColumn:
        has_empty = true;
        break;
    }
  }
  if (!has_empty) {
    throw Error(ErrorKind::kInvalidArgument, "repair requires at least one empty column");
  }
  std::vector<int> labels(static_cast<std::size_t>(v.rows()));
  for (int j = 0; j < v.rows(); ++j) {
    for (int q = 0; q < v.cols(); ++q) {
      if (v(j, q) == 1) labels[static_cast<std::size_t>(j)] = q;
    }
  }
  repair_labels(labels, v.cols(), rng);
  return Assignment(std::move(labels), v.cols());
}

Assignment random_assignment(int variables, int components, Rng& rng) {
  if (components < 1 || variables < components) {
    throw Error(ErrorKind::kDimension,
                "random assignment needs variables >= components >= 1");
  }
  std::uniform_int_distribution<int> pick(0, components - 1);
  std::vector<int> labels(static_cast<std::size_t>(variables));
  for (int& label : labels) label = pick(rng);
  repair_labels(labels, components, rng);
  return Assignment(std::move(labels), components);
}

BigInt count_feasible(int variables, int components) {
  if (variables < 1 || components < 1) {
    throw Error(ErrorKind::kInvalidArgument, "count needs J >= 1 and Q >= 1");
  }
  if (variables < components) return 0;
  BigInt total = 0;
  BigInt binomial = 1;  // C(Q, k)
  for (int k = 0; k <= components; ++k) {
    const BigInt term = binomial * boost::multiprecision::pow(BigInt(components - k),
                                                              static_cast<unsigned>(variables));
    if (k % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
    binomial = binomial * (components - k) / (k + 1);
  }
  return total;
}

}  // namespace dpc
