#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mmdf/error.hpp"

namespace mmdf {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Row-sum tolerance for a membership row to count as a PMF.
inline constexpr double kPmfTolerance = 1e-10;

/// True when every entry is nonnegative and the row sums to one.
inline bool is_pmf(const Eigen::Ref<const RowVector>& row, double tol = kPmfTolerance) {
  if (!row.allFinite() || (row.array() < 0.0).any()) return false;
  return std::abs(row.sum() - 1.0) <= tol;
}

/// n x K nonnegative matrix whose rows are probability mass functions over
/// the K communities. Construction validates the invariant.
class MembershipMatrix {
 public:
  MembershipMatrix() = default;

  explicit MembershipMatrix(Matrix rows) : rows_(std::move(rows)) {
    if (rows_.cols() < 1) throw ContractError("membership matrix needs at least one column");
    for (Index i = 0; i < rows_.rows(); ++i) {
      if (!is_pmf(rows_.row(i))) {
        throw ContractError("membership row " + std::to_string(i) + " is not a PMF");
      }
    }
  }

  Index nodes() const noexcept { return rows_.rows(); }
  Index communities() const noexcept { return rows_.cols(); }
  const Matrix& matrix() const noexcept { return rows_; }
  double operator()(Index i, Index k) const { return rows_(i, k); }
  auto row(Index i) const { return rows_.row(i); }

  /// Indicator-row matrix from 0-based community labels.
  static MembershipMatrix from_labels(const std::vector<int>& labels, Index k) {
    Matrix m = Matrix::Zero(static_cast<Index>(labels.size()), k);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] < 0 || labels[i] >= k) throw DomainError("label out of range [0, k)");
      m(static_cast<Index>(i), labels[i]) = 1.0;
    }
    return MembershipMatrix(std::move(m));
  }

  bool operator==(const MembershipMatrix& other) const { return rows_ == other.rows_; }

 private:
  Matrix rows_;
};

}  // namespace mmdf
