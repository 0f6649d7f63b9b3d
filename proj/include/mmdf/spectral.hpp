#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#if defined(MMDF_USE_LAPACKE)
#include <lapacke.h>
#endif

#include "mmdf/error.hpp"
#include "mmdf/membership.hpp"

namespace mmdf {

/// Leading eigenpairs of a symmetric matrix, ordered by decreasing |value|.
/// Each column's largest-magnitude entry is positive.
struct TopKEigen {
  Matrix vectors;
  Vector values;
};

/// Indices (0-based, in selection order) returned by successive projection.
struct VertexSet {
  std::vector<Index> indices;
};

namespace detail {

inline void check_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) throw ContractError("matrix must be square");
  if (!m.allFinite()) throw ContractError("matrix has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) throw ContractError("matrix must be symmetric");
}

/// Flip a column so that its first entry of maximal magnitude is positive.
inline void fix_sign(Eigen::Ref<Vector> v) {
  Index arg = 0;
  double best = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > best) {
      best = std::abs(v(i));
      arg = i;
    }
  }
  if (v.size() > 0 && v(arg) < 0.0) v = -v;
}

}  // namespace detail

/// Full dense symmetric eigendecomposition, re-ordered by decreasing
/// magnitude so that any leading block can be sliced off without
/// recomputation (scans over k reuse one decomposition).
namespace detail {

/// Ascending eigenvalues and matching orthonormal eigenvectors. With
/// MMDF_USE_LAPACKE this goes through LAPACK's dsyevr (relatively robust
/// representations), which is several times faster than Eigen's QR sweep
/// at a few hundred nodes.
inline void symmetric_eigensolve(const Matrix& m, Vector& values, Matrix& vectors) {
  const Index n = m.rows();
#if defined(MMDF_USE_LAPACKE)
  if (n > 0) {
    Matrix work = m;
    values.resize(n);
    vectors.resize(n, n);
    std::vector<lapack_int> support(static_cast<std::size_t>(2 * n));
    lapack_int found = 0;
    const lapack_int nn = static_cast<lapack_int>(n);
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', nn, work.data(), nn, 0.0, 0.0, 0, 0, 0.0,
                                           &found, values.data(), vectors.data(), nn, support.data());
    if (info != 0 || found != nn) {
      throw EstimationError("eigendecomposition", "LAPACK dsyevr failed (info " + std::to_string(info) + ")");
    }
    return;
  }
#endif
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw EstimationError("eigendecomposition", "solver did not converge");
  values = solver.eigenvalues();
  vectors = solver.eigenvectors();
}

}  // namespace detail

class SymmetricEigen {
 public:
  explicit SymmetricEigen(const Matrix& m) {
    detail::check_symmetric(m);
    scale_ = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
    Vector raw;
    Matrix basis;
    detail::symmetric_eigensolve(m, raw, basis);
    std::vector<Index> order(static_cast<std::size_t>(raw.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      const double ma = std::abs(raw(a)), mb = std::abs(raw(b));
      if (ma != mb) return ma > mb;
      return raw(a) > raw(b);
    });
    values_.resize(raw.size());
    vectors_.resize(m.rows(), m.cols());
    for (Index c = 0; c < raw.size(); ++c) {
      values_(c) = raw(order[static_cast<std::size_t>(c)]);
      vectors_.col(c) = basis.col(order[static_cast<std::size_t>(c)]);
      detail::fix_sign(vectors_.col(c));
    }
  }

  Index size() const noexcept { return values_.size(); }
  /// All eigenvalues, ordered by decreasing magnitude.
  const Vector& values() const noexcept { return values_; }
  const Matrix& vectors() const noexcept { return vectors_; }
  /// Largest absolute entry of the decomposed matrix.
  double scale() const noexcept { return scale_; }

  TopKEigen top(Index k) const {
    if (k < 1) throw DomainError("k must be at least 1");
    if (k > size()) throw DomainError("k = " + std::to_string(k) + " exceeds matrix size " + std::to_string(size()));
    return TopKEigen{vectors_.leftCols(k), values_.head(k)};
  }

 private:
  Matrix vectors_;
  Vector values_;
  double scale_ = 0.0;
};

/// The k eigenpairs of largest absolute eigenvalue of a symmetric matrix.
inline TopKEigen top_k_eig(const Matrix& m, Index k) {
  if (k < 1 || k > m.rows()) throw DomainError("k must lie in [1, n]");
  return SymmetricEigen(m).top(k);
}

/// Relative residual norm below which the projected rows count as zero.
inline constexpr double kProjectionZeroTolerance = 1e-12;

/// Successive projection vertex hunting on the rows of `y`: pick the row
/// with the largest Euclidean norm (smallest index on ties), project every
/// row onto the orthogonal complement of it, repeat. Stops early, returning
/// fewer than k indices, once the residual is numerically zero.
inline VertexSet successive_projection(const Matrix& y, Index k) {
  if (k < 1 || k > std::min(y.rows(), y.cols())) throw DomainError("k must lie in [1, min(rows, cols)]");
  Matrix r = y;
  const double initial = r.norm();
  VertexSet out;
  for (Index step = 0; step < k; ++step) {
    if (initial == 0.0 || r.norm() <= kProjectionZeroTolerance * initial) break;
    const Vector norms = r.rowwise().squaredNorm();
    Index best = 0;
    for (Index i = 1; i < norms.size(); ++i)
      if (norms(i) > norms(best)) best = i;
    const RowVector u = r.row(best);
    const double uu = u.squaredNorm();
    r -= (r * u.transpose()) * (u / uu);
    out.indices.push_back(best);
  }
  return out;
}

}  // namespace mmdf
