#pragma once

#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mmdf/error.hpp"
#include "mmdf/graph.hpp"
#include "mmdf/membership.hpp"
#include "mmdf/spectral.hpp"

namespace mmdf {

/// Corner matrices with a condition number above this are rejected.
inline constexpr double kMaxCornerCondition = 1e12;

/// A k-th eigenvalue this small relative to the largest one means the
/// input has rank below k; the eigenvector block is then arbitrary.
inline constexpr double kRankTolerance = 1e-12;

struct DfspReport {
  MembershipMatrix memberships;
  VertexSet vertices;
  TopKEigen eigen;
  /// Rows where clipping at zero removed some negative mass.
  std::size_t clipped_rows = 0;
  /// Rows with no positive entry after clipping; set to the uniform PMF.
  std::size_t degenerate_rows = 0;
  /// 2-norm condition number of the corner matrix U(I, :).
  double corner_condition = 0.0;
};

/// Home-base community per node (0-based).
struct HardAssignment {
  std::vector<int> labels;
};

namespace detail {

inline std::string describe(const VertexSet& v) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < v.indices.size(); ++i) os << (i ? "," : "") << v.indices[i] + 1;
  os << '}';
  return os.str();
}

}  // namespace detail

/// Mixed-membership estimate from a precomputed eigendecomposition.
///
/// Steps: take the k leading eigenvectors U; locate k corner rows I by
/// successive projection; solve Z = U * U(I,:)^{-1}; clip Z at zero; scale
/// each row to unit l1 norm. Applied to a noiseless population matrix this
/// recovers the memberships exactly, up to a column permutation.
inline DfspReport dfsp(const SymmetricEigen& eig, Index k) {
  if (k < 1 || k > eig.size()) throw DomainError("k must lie in [1, n]");
  DfspReport report;
  report.eigen = eig.top(k);
  const double lead = std::abs(eig.values()(0));
  if (lead == 0.0 || std::abs(report.eigen.values(k - 1)) <= kRankTolerance * lead) {
    throw EstimationError("eigendecomposition", "input has fewer than " + std::to_string(k) + " nonzero eigenvalues");
  }
  const Matrix& u = report.eigen.vectors;
  const Index n = u.rows();

  report.vertices = successive_projection(u, k);
  if (static_cast<Index>(report.vertices.indices.size()) < k) {
    throw EstimationError("successive projection",
                          "residual vanished after " + std::to_string(report.vertices.indices.size()) + " of " +
                              std::to_string(k) + " vertices");
  }

  Matrix corner(k, k);
  for (Index c = 0; c < k; ++c) corner.row(c) = u.row(report.vertices.indices[static_cast<std::size_t>(c)]);
  const Eigen::JacobiSVD<Matrix> svd(corner);
  const Vector& sv = svd.singularValues();
  report.corner_condition = sv(k - 1) > 0.0 ? sv(0) / sv(k - 1) : std::numeric_limits<double>::infinity();
  if (!(report.corner_condition <= kMaxCornerCondition)) {
    throw EstimationError("vertex inversion", "corner matrix for vertex set " + detail::describe(report.vertices) +
                                                  " is singular (condition " + std::to_string(report.corner_condition) +
                                                  ")");
  }

  // Z = U * corner^{-1}  <=>  corner^T * Z^T = U^T.
  Matrix z = corner.transpose().fullPivLu().solve(u.transpose()).transpose();

  for (Index i = 0; i < n; ++i) {
    bool clipped = false;
    double mass = 0.0;
    for (Index c = 0; c < k; ++c) {
      if (z(i, c) < 0.0) {
        z(i, c) = 0.0;
        clipped = true;
      }
      mass += z(i, c);
    }
    if (clipped) ++report.clipped_rows;
    if (mass > 0.0) {
      z.row(i) /= mass;
    } else {
      z.row(i).setConstant(1.0 / static_cast<double>(k));
      ++report.degenerate_rows;
    }
  }
  report.memberships = MembershipMatrix(std::move(z));
  return report;
}

inline DfspReport dfsp(const Matrix& a, Index k) {
  if (k < 1 || k > a.rows()) throw DomainError("k must lie in [1, n]");
  return dfsp(SymmetricEigen(a), k);
}

inline DfspReport dfsp(const WeightedGraph& g, Index k) { return dfsp(g.weights(), k); }

/// Per-row argmax; the smallest community index wins exact ties.
inline HardAssignment harden(const MembershipMatrix& m) {
  HardAssignment out;
  out.labels.resize(static_cast<std::size_t>(m.nodes()));
  for (Index i = 0; i < m.nodes(); ++i) {
    int best = 0;
    for (Index c = 1; c < m.communities(); ++c)
      if (m(i, c) > m(i, best)) best = static_cast<int>(c);
    out.labels[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

}  // namespace mmdf
