#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "mmdf/dfsp.hpp"
#include "mmdf/error.hpp"
#include "mmdf/membership.hpp"

namespace mmdf {

/// Above this many communities, permutation searches switch from full
/// enumeration to optimal linear assignment.
inline constexpr Index kExhaustivePermutationLimit = 8;

/// Optimal assignment for a square cost matrix (Hungarian method with
/// potentials, O(K^3)). Returns col_of_row.
inline std::vector<Index> solve_assignment(const Matrix& cost) {
  const Index n = cost.rows();
  if (cost.cols() != n) throw ContractError("assignment cost matrix must be square");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<Index> p(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> col_of_row(static_cast<std::size_t>(n), 0);
  for (Index j = 1; j <= n; ++j) col_of_row[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return col_of_row;
}

namespace detail {

/// Minimize sum_c cost(c, perm[c]) over permutations.
inline std::vector<Index> best_permutation(const Matrix& cost) {
  const Index k = cost.rows();
  if (k > kExhaustivePermutationLimit) return solve_assignment(cost);
  std::vector<Index> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::vector<Index> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (Index r = 0; r < k; ++r) c += cost(r, perm[static_cast<std::size_t>(r)]);
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace detail

/// Permutation-minimized membership errors. `permutation[c]` is the truth
/// column matched to estimate column c under the Hamming-optimal matching;
/// `relative_permutation` is the Frobenius-optimal one.
struct ErrorPair {
  double hamming = 0.0;
  double relative = 0.0;
  std::vector<Index> permutation;
  std::vector<Index> relative_permutation;
};

/// hamming  = min_P (1/n) sum_ij |estimate - truth P|
/// relative = min_P ||estimate - truth P||_F / ||truth||_F
/// Both objectives split into per-column-pair costs, so each minimum is an
/// assignment problem over the K x K cost matrix.
inline ErrorPair membership_errors(const MembershipMatrix& estimate, const MembershipMatrix& truth) {
  if (estimate.nodes() != truth.nodes() || estimate.communities() != truth.communities()) {
    throw DomainError("membership matrices differ in shape");
  }
  const Index k = truth.communities();
  const Index n = truth.nodes();
  Matrix l1(k, k), l2(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b) {
      const auto diff = (estimate.matrix().col(a) - truth.matrix().col(b)).array();
      l1(a, b) = diff.abs().sum();
      l2(a, b) = diff.square().sum();
    }
  ErrorPair out;
  out.permutation = detail::best_permutation(l1);
  out.relative_permutation = detail::best_permutation(l2);
  double h = 0.0, f = 0.0;
  for (Index a = 0; a < k; ++a) {
    h += l1(a, out.permutation[static_cast<std::size_t>(a)]);
    f += l2(a, out.relative_permutation[static_cast<std::size_t>(a)]);
  }
  out.hamming = n > 0 ? h / static_cast<double>(n) : 0.0;
  const double norm = truth.matrix().norm();
  out.relative = norm > 0.0 ? std::sqrt(f) / norm : 0.0;
  return out;
}

/// Minimum number of disagreeing nodes over relabelings of the estimate.
inline std::size_t mislabel_count(std::span<const int> estimate, std::span<const int> truth) {
  if (estimate.size() != truth.size()) throw DomainError("label vectors differ in length");
  if (estimate.empty()) return 0;
  int k = 0;
  for (int v : estimate) k = std::max(k, v + 1);
  for (int v : truth) k = std::max(k, v + 1);
  for (std::size_t i = 0; i < estimate.size(); ++i)
    if (estimate[i] < 0 || truth[i] < 0) throw DomainError("labels must be nonnegative");
  Matrix agree = Matrix::Zero(k, k);
  for (std::size_t i = 0; i < estimate.size(); ++i) agree(estimate[i], truth[i]) += 1.0;
  const Matrix cost = -agree;
  const auto perm = detail::best_permutation(cost);
  double matched = 0.0;
  for (Index a = 0; a < k; ++a) matched += agree(a, perm[static_cast<std::size_t>(a)]);
  return estimate.size() - static_cast<std::size_t>(std::llround(matched));
}

inline std::size_t mislabel_count(const HardAssignment& estimate, std::span<const int> truth) {
  return mislabel_count(std::span<const int>(estimate.labels), truth);
}

/// Fraction of runs whose estimated community count equals `true_k`.
inline double accuracy_rate(std::span<const Index> estimates, Index true_k) {
  if (estimates.empty()) throw DomainError("accuracy rate of an empty list");
  const auto hits = std::count(estimates.begin(), estimates.end(), true_k);
  return static_cast<double>(hits) / static_cast<double>(estimates.size());
}

inline constexpr double kHighlyMixedThreshold = 0.7;
inline constexpr double kHighlyPureThreshold = 0.9;

struct MixednessIndices {
  double eta_mixed = 0.0;  ///< share of nodes with max membership <= 0.7
  double eta_pure = 0.0;   ///< share of nodes with max membership >= 0.9
};

inline MixednessIndices mixedness_indices(const MembershipMatrix& m) {
  MixednessIndices out;
  if (m.nodes() == 0) return out;
  Index mixed = 0, pure = 0;
  for (Index i = 0; i < m.nodes(); ++i) {
    const double top = m.row(i).maxCoeff();
    if (top <= kHighlyMixedThreshold) ++mixed;
    if (top >= kHighlyPureThreshold) ++pure;
  }
  out.eta_mixed = static_cast<double>(mixed) / static_cast<double>(m.nodes());
  out.eta_pure = static_cast<double>(pure) / static_cast<double>(m.nodes());
  return out;
}

}  // namespace mmdf
