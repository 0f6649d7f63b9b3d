#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mmdf/dfsp.hpp"
#include "mmdf/error.hpp"
#include "mmdf/graph.hpp"
#include "mmdf/membership.hpp"
#include "mmdf/spectral.hpp"

namespace mmdf {

/// Fuzzy weighted modularity and its positive/negative parts.
/// q = pos_weight * q_pos - neg_weight * q_neg.
struct ModularityValue {
  double q = 0.0;
  double q_pos = 0.0;
  double q_neg = 0.0;
  double pos_weight = 0.0;
  double neg_weight = 0.0;
};

namespace detail {

/// (1/2m) * sum_ij (X(i,j) - d(i) d(j) / 2m) <M(i,:), M(j,:)> for a
/// nonnegative symmetric X with degrees d and total 2m.
///
/// Evaluated as (tr(M' X M) - |M' d|^2 / 2m) / 2m. (X M)(i,c) is a column
/// dot product, the same kernel that produced d(i) = X(:,i) . 1, so a single
/// all-ones column reproduces 2m bit for bit and gives exactly zero.
inline double signed_part(const Matrix& x, const Vector& degrees, double two_m, const Matrix& m) {
  if (two_m <= 0.0) return 0.0;
  const Index n = x.rows();
  const Index k = m.cols();
  Matrix xm(n, k);
  for (Index c = 0; c < k; ++c) {
    for (Index i = 0; i < n; ++i) xm(i, c) = x.col(i).dot(m.col(c));
  }
  double observed = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < k; ++c) observed += xm(i, c) * m(i, c);
  }
  Vector mass = Vector::Zero(k);
  for (Index i = 0; i < n; ++i) mass.noalias() += degrees(i) * m.row(i).transpose();
  double expected = 0.0;
  for (Index c = 0; c < k; ++c) expected += mass(c) * (mass(c) / two_m);
  return (observed - expected) / two_m;
}

}  // namespace detail

inline ModularityValue fuzzy_weighted_modularity(const SignSplit& split, const MembershipMatrix& m) {
  if (m.nodes() != split.pos.rows()) throw DomainError("membership rows do not match graph size");
  ModularityValue v;
  const double two_pos = 2.0 * split.pos_mass;
  const double two_neg = 2.0 * split.neg_mass;
  const double total = two_pos + two_neg;
  if (total == 0.0) return v;
  v.q_pos = detail::signed_part(split.pos, split.pos_degrees, two_pos, m.matrix());
  v.q_neg = detail::signed_part(split.neg, split.neg_degrees, two_neg, m.matrix());
  v.pos_weight = two_pos / total;
  v.neg_weight = two_neg / total;
  v.q = v.pos_weight * v.q_pos - v.neg_weight * v.q_neg;
  return v;
}

inline ModularityValue fuzzy_weighted_modularity(const WeightedGraph& g, const MembershipMatrix& m) {
  if (m.nodes() != g.size()) throw DomainError("membership rows do not match graph size");
  return fuzzy_weighted_modularity(sign_split(g), m);
}

// =============================================================================
// Choosing the number of communities
// =============================================================================

struct KScanPoint {
  Index k = 0;
  std::optional<ModularityValue> value;
  /// Failing stage and reason when the estimator could not run at this k.
  std::string failure;
};

struct KScanResult {
  Index best_k = 0;
  Index k_max = 0;
  std::vector<KScanPoint> curve;
};

struct KScanOptions {
  /// Stop at the first k whose Q does not exceed the previous successful Q.
  bool stop_when_not_increasing = false;
};

inline Index default_k_max(Index n) { return std::max<Index>(1, std::min<Index>(15, n - 1)); }

/// Score dfsp at k = 1..k_max by fuzzy weighted modularity and keep the
/// best (smallest k on ties). Values of k where the estimator fails are
/// recorded and skipped.
///
/// `eig` must be the decomposition of `g.weights()`; passing it lets callers
/// that also run dfsp at a fixed k share one decomposition.
inline KScanResult estimate_k(const WeightedGraph& g, const SymmetricEigen& eig, Index k_max,
                              const KScanOptions& options = {}) {
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  if (eig.size() != g.size()) throw ContractError("eigendecomposition does not match the graph");
  const Index limit = std::min(k_max, g.size());
  const SignSplit split = sign_split(g);
  KScanResult out;
  out.k_max = k_max;
  std::optional<double> best;
  std::optional<double> previous;
  for (Index k = 1; k <= limit; ++k) {
    KScanPoint point;
    point.k = k;
    try {
      const DfspReport report = dfsp(eig, k);
      point.value = fuzzy_weighted_modularity(split, report.memberships);
    } catch (const EstimationError& e) {
      point.failure = e.what();
    }
    out.curve.push_back(point);
    if (!point.value) continue;
    const double q = point.value->q;
    if (!best || q > *best) {
      best = q;
      out.best_k = k;
    }
    if (options.stop_when_not_increasing && previous && !(q > *previous)) break;
    previous = q;
  }
  if (!best) throw EstimationError("model selection", "dfsp failed for every k in [1, " + std::to_string(limit) + "]");
  return out;
}

inline KScanResult estimate_k(const WeightedGraph& g, Index k_max, const KScanOptions& options = {}) {
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  return estimate_k(g, SymmetricEigen(g.weights()), k_max, options);
}

}  // namespace mmdf
