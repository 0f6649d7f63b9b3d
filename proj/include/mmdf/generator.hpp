#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mmdf/error.hpp"
#include "mmdf/graph.hpp"
#include "mmdf/membership.hpp"
#include "mmdf/rng.hpp"

namespace mmdf {

// =============================================================================
// Edge-weight distributions
// =============================================================================

enum class Family { normal, bernoulli, poisson, uniform, signed_binary, point_mass };

/// Distribution of an edge weight given its mean Omega(i,j).
///
///   normal        Normal(mean, variance)
///   bernoulli     Bernoulli(mean), mean in [0, 1]
///   poisson       Poisson(mean), mean >= 0
///   uniform       Uniform(0, 2 * mean)
///   signed_binary +1 with probability (1 + mean) / 2, else -1; mean in [-1, 1]
///   point_mass    exactly the mean
struct EdgeDistribution {
  Family family = Family::normal;
  double variance = 2.0;  ///< normal family only

  static EdgeDistribution normal(double variance) { return {Family::normal, variance}; }
  static EdgeDistribution of(Family f) { return {f, 2.0}; }

  std::string_view name() const {
    switch (family) {
      case Family::normal: return "normal";
      case Family::bernoulli: return "bernoulli";
      case Family::poisson: return "poisson";
      case Family::uniform: return "uniform";
      case Family::signed_binary: return "signed";
      case Family::point_mass: return "point_mass";
    }
    return "unknown";
  }

  static EdgeDistribution parse(std::string_view name, double variance = 2.0) {
    for (Family f : {Family::normal, Family::bernoulli, Family::poisson, Family::uniform, Family::signed_binary,
                     Family::point_mass}) {
      EdgeDistribution d{f, variance};
      if (d.name() == name) {
        d.validate();
        return d;
      }
    }
    throw ConfigError("unknown edge distribution '" + std::string(name) + "'");
  }

  void validate() const {
    if (family == Family::normal && !(variance > 0.0 && std::isfinite(variance))) {
      throw DomainError("normal family needs a positive finite variance");
    }
  }

  /// Scaling parameters the family can realize.
  bool admits_rho(double rho) const {
    if (!(rho > 0.0) || !std::isfinite(rho)) return false;
    switch (family) {
      case Family::bernoulli: return rho <= 1.0;
      case Family::signed_binary: return rho < 1.0;
      default: return true;
    }
  }

  std::string rho_range() const {
    switch (family) {
      case Family::bernoulli: return "(0, 1]";
      case Family::signed_binary: return "(0, 1)";
      default: return "(0, inf)";
    }
  }

  /// Families whose mean must be nonnegative need a nonnegative P.
  bool requires_nonnegative_connectivity() const {
    return family == Family::bernoulli || family == Family::poisson || family == Family::uniform;
  }

  /// Closed interval the mean must lie in, for bounded families.
  std::optional<std::pair<double, double>> mean_domain() const {
    if (family == Family::bernoulli) return std::pair{0.0, 1.0};
    if (family == Family::signed_binary) return std::pair{-1.0, 1.0};
    return std::nullopt;
  }

  /// Variance of a single edge weight whose mean is `mean`.
  double variance_at(double mean) const {
    switch (family) {
      case Family::normal: return variance;
      case Family::bernoulli: return mean * (1.0 - mean);
      case Family::poisson: return mean;
      case Family::uniform: return mean * mean / 3.0;
      case Family::signed_binary: return 1.0 - mean * mean;
      case Family::point_mass: return 0.0;
    }
    return 0.0;
  }

  template <class Engine>
  double draw(double mean, Engine& engine) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    switch (family) {
      case Family::normal: {
        std::normal_distribution<double> z(0.0, 1.0);
        return mean + std::sqrt(variance) * z(engine);
      }
      case Family::bernoulli: return unit(engine) < mean ? 1.0 : 0.0;
      case Family::poisson: {
        if (mean == 0.0) return 0.0;
        std::poisson_distribution<long long> pois(mean);
        return static_cast<double>(pois(engine));
      }
      case Family::uniform: return 2.0 * mean * unit(engine);
      case Family::signed_binary: return unit(engine) < (1.0 + mean) / 2.0 ? 1.0 : -1.0;
      case Family::point_mass: return mean;
    }
    return mean;
  }
};

/// Bounds on the noise parameters tau = max |A - Omega| and
/// gamma = max Var(A) / rho for a family at scaling rho, together with the
/// family-specific form of the sparsity requirement gamma*rho*n >= tau^2 log n.
/// Unknown bounds are left empty.
struct NoiseDiagnostics {
  std::optional<double> tau_bound;
  double gamma_bound = 0.0;
  std::string requirement;
  std::optional<bool> requirement_holds;
};

inline NoiseDiagnostics noise_diagnostics(const EdgeDistribution& d, double rho, Index n) {
  NoiseDiagnostics out;
  const double nn = static_cast<double>(n);
  const double logn = std::log(nn);
  switch (d.family) {
    case Family::normal:
      out.gamma_bound = d.variance / rho;
      out.requirement = "variance * n >= tau^2 log n (tau unbounded)";
      break;
    case Family::bernoulli:
      out.tau_bound = 1.0;
      out.gamma_bound = 1.0;
      out.requirement = "rho * n >= log n";
      out.requirement_holds = rho * nn >= logn;
      break;
    case Family::poisson:
      out.gamma_bound = 1.0;
      out.requirement = "rho * n >= tau^2 log n (tau unbounded)";
      break;
    case Family::uniform:
      out.tau_bound = 2.0 * rho;
      out.gamma_bound = rho / 3.0;
      out.requirement = "rho^2 >= 3 tau^2 log n / n";
      out.requirement_holds = rho * rho >= 3.0 * 4.0 * rho * rho * logn / nn;
      break;
    case Family::signed_binary:
      out.tau_bound = 2.0;
      out.gamma_bound = 1.0 / rho;
      out.requirement = "n >= 4 log n";
      out.requirement_holds = nn >= 4.0 * logn;
      break;
    case Family::point_mass:
      out.tau_bound = 0.0;
      out.gamma_bound = 0.0;
      out.requirement = "none";
      out.requirement_holds = true;
      break;
  }
  return out;
}

// =============================================================================
// Connectivity matrix
// =============================================================================

enum class ConnectivityIssue { not_square, asymmetric, not_normalized, rank_deficient, sign_inadmissible };

class ConnectivityError : public DomainError {
 public:
  ConnectivityError(ConnectivityIssue issue, const std::string& what) : DomainError(what), issue_(issue) {}
  ConnectivityIssue issue() const noexcept { return issue_; }

 private:
  ConnectivityIssue issue_;
};

/// Validated K x K block matrix: symmetric, full rank, max |entry| = 1.
class ConnectivityMatrix {
 public:
  ConnectivityMatrix() = default;

  const Matrix& entries() const noexcept { return entries_; }
  Index size() const noexcept { return entries_.rows(); }
  /// Smallest singular value; larger means better separated communities.
  double sigma_min() const noexcept { return sigma_min_; }

 private:
  friend ConnectivityMatrix check_connectivity(const Matrix& p, const EdgeDistribution& family);
  Matrix entries_;
  double sigma_min_ = 0.0;
};

inline ConnectivityMatrix check_connectivity(const Matrix& p, const EdgeDistribution& family) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw ConnectivityError(ConnectivityIssue::not_square, "connectivity matrix must be square and non-empty");
  }
  if (!p.allFinite()) throw ConnectivityError(ConnectivityIssue::not_normalized, "connectivity matrix has non-finite entries");
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConnectivityError(ConnectivityIssue::asymmetric, "connectivity matrix must be symmetric");
  }
  const double peak = p.cwiseAbs().maxCoeff();
  if (std::abs(peak - 1.0) > 1e-12) {
    throw ConnectivityError(ConnectivityIssue::not_normalized,
                            "connectivity matrix must have max |entry| = 1, got " + format_double(peak));
  }
  const Eigen::JacobiSVD<Matrix> svd(p);
  const double smin = svd.singularValues()(p.rows() - 1);
  if (!(smin > 1e-10)) {
    throw ConnectivityError(ConnectivityIssue::rank_deficient,
                            "connectivity matrix is rank deficient (sigma_K = " + format_double(smin) + ")");
  }
  if (family.requires_nonnegative_connectivity() && (p.array() < 0.0).any()) {
    throw ConnectivityError(ConnectivityIssue::sign_inadmissible,
                            "family '" + std::string(family.name()) + "' needs a nonnegative connectivity matrix");
  }
  ConnectivityMatrix out;
  out.entries_ = p;
  out.sigma_min_ = smin;
  return out;
}

// =============================================================================
// Membership construction
// =============================================================================

struct MixedRows {
  RowVector pmf;
  Index count = 0;
};

/// Block layout of a membership matrix: `pure_per_community` indicator rows
/// for each community in turn, then the mixed rows in order.
struct MembershipDesign {
  Index n = 0;
  Index k = 0;
  Index pure_per_community = 0;
  std::vector<MixedRows> mixed;
};

inline MembershipMatrix build_membership(Index n, Index k, Index pure_per_community, std::span<const MixedRows> mixed) {
  if (k < 1) throw DomainError("k must be at least 1");
  if (pure_per_community < 1) throw DomainError("every community needs at least one pure node");
  Index total = k * pure_per_community;
  for (const auto& m : mixed) {
    if (m.count < 0) throw DomainError("negative mixed-row multiplicity");
    if (m.pmf.size() != k || !is_pmf(m.pmf)) throw DomainError("mixed row is not a PMF over k communities");
    total += m.count;
  }
  if (total != n) {
    throw DomainError("row counts sum to " + std::to_string(total) + ", expected n = " + std::to_string(n));
  }
  Matrix rows = Matrix::Zero(n, k);
  Index r = 0;
  for (Index c = 0; c < k; ++c)
    for (Index i = 0; i < pure_per_community; ++i) rows(r++, c) = 1.0;
  for (const auto& m : mixed)
    for (Index i = 0; i < m.count; ++i) rows.row(r++) = m.pmf;
  return MembershipMatrix(std::move(rows));
}

inline MembershipMatrix build_membership(const MembershipDesign& d) {
  return build_membership(d.n, d.k, d.pure_per_community, d.mixed);
}

/// K = 3 layout used by the simulation designs: n0 pure nodes per community
/// and four mixed profiles sharing the remaining n - 3 n0 nodes equally.
inline MembershipDesign three_community_design(Index n = 200, Index n0 = 40) {
  if ((n - 3 * n0) % 4 != 0 || n - 3 * n0 < 0) throw DomainError("n - 3 n0 must be a nonnegative multiple of 4");
  const Index each = (n - 3 * n0) / 4;
  MembershipDesign d{n, 3, n0, {}};
  const double third = 1.0 / 3.0;
  for (RowVector pmf : {RowVector{{0.4, 0.4, 0.2}}, RowVector{{0.4, 0.2, 0.4}}, RowVector{{0.2, 0.4, 0.4}},
                        RowVector{{third, third, third}}}) {
    d.mixed.push_back({pmf, each});
  }
  return d;
}

// =============================================================================
// Generator
// =============================================================================

struct GeneratorSpec {
  MembershipMatrix memberships;
  /// Block layout the memberships were built from, when known.
  std::optional<MembershipDesign> design;
  ConnectivityMatrix connectivity;
  double rho = 1.0;
  EdgeDistribution distribution;
  /// Probability that an edge is observed; unset means no masking.
  std::optional<double> sparsity;
  std::uint64_t seed = 0;

  Index n() const noexcept { return memberships.nodes(); }
  Index k() const noexcept { return memberships.communities(); }

  void validate() const {
    distribution.validate();
    if (connectivity.size() != k()) throw DomainError("connectivity matrix size does not match membership columns");
    if (n() < 1) throw DomainError("generator needs at least one node");
    if (!distribution.admits_rho(rho)) {
      throw DomainError("rho = " + format_double(rho) + " outside " + distribution.rho_range() + " for family '" +
                        std::string(distribution.name()) + "'");
    }
    if (distribution.requires_nonnegative_connectivity() && (connectivity.entries().array() < 0.0).any()) {
      throw DomainError("family '" + std::string(distribution.name()) + "' needs a nonnegative connectivity matrix");
    }
    if (sparsity && !(*sparsity >= 0.0 && *sparsity <= 1.0)) throw DomainError("sparsity p must lie in [0, 1]");
  }
};

/// Expected adjacency rho * Pi * P * Pi' (diagonal kept).
struct PopulationMatrix {
  Matrix omega;
};

inline PopulationMatrix population_adjacency(const GeneratorSpec& spec) {
  spec.validate();
  const Matrix& pi = spec.memberships.matrix();
  Matrix omega = spec.rho * (pi * spec.connectivity.entries() * pi.transpose());
  // Symmetrize against rounding in the triple product.
  omega = (0.5 * (omega + omega.transpose())).eval();
  if (const auto dom = spec.distribution.mean_domain()) {
    const double slack = 1e-12;
    for (Index j = 0; j < omega.cols(); ++j)
      for (Index i = 0; i < omega.rows(); ++i) {
        const double v = omega(i, j);
        if (v < dom->first - slack || v > dom->second + slack) {
          throw DomainError("Omega(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") = " + format_double(v) +
                            " outside the mean domain of family '" + std::string(spec.distribution.name()) + "'");
        }
        omega(i, j) = std::clamp(v, dom->first, dom->second);
      }
  }
  return PopulationMatrix{std::move(omega)};
}

struct SampledNetwork {
  WeightedGraph graph;
  GroundTruth truth;
  /// False when the missing-edge mask graph was disconnected.
  bool mask_connected = true;
};

namespace detail {

inline bool mask_is_connected(const std::vector<std::vector<Index>>& adj) {
  const std::size_t n = adj.size();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::queue<Index> q;
  q.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!q.empty()) {
    const Index v = q.front();
    q.pop();
    for (Index w : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++count;
        q.push(w);
      }
    }
  }
  return count == n;
}

inline std::vector<int> argmax_labels(const Matrix& m) {
  std::vector<int> out(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < m.cols(); ++c)
      if (m(i, c) > m(i, best)) best = c;
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

}  // namespace detail

/// Draw one network. Upper-triangular weights come from one stream and the
/// missing-edge mask from another, both derived from `seed`, so a mask with
/// p = 1 leaves the weights untouched.
inline SampledNetwork sample_adjacency(const GeneratorSpec& spec, std::uint64_t seed) {
  const PopulationMatrix pop = population_adjacency(spec);
  const Index n = spec.n();
  if (spec.distribution.family == Family::poisson && (pop.omega.array() < 0.0).any()) {
    throw DomainError("poisson family needs nonnegative means");
  }
  Engine weights_rng = make_engine(derive_seed(seed, {1}));
  Engine mask_rng = make_engine(derive_seed(seed, {2}));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix a = Matrix::Zero(n, n);
  std::vector<std::vector<Index>> mask_adj;
  if (spec.sparsity) mask_adj.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      double w = spec.distribution.draw(pop.omega(i, j), weights_rng);
      if (spec.sparsity) {
        const bool keep = unit(mask_rng) < *spec.sparsity;
        if (keep) {
          mask_adj[static_cast<std::size_t>(i)].push_back(j);
          mask_adj[static_cast<std::size_t>(j)].push_back(i);
        } else {
          w = 0.0;
        }
      }
      a(i, j) = w;
      a(j, i) = w;
    }
  }
  SampledNetwork out;
  out.graph = WeightedGraph(std::move(a));
  out.truth.memberships = spec.memberships;
  out.truth.labels = detail::argmax_labels(spec.memberships.matrix());
  if (spec.sparsity) out.mask_connected = detail::mask_is_connected(mask_adj);
  return out;
}

inline SampledNetwork sample_adjacency(const GeneratorSpec& spec) { return sample_adjacency(spec, spec.seed); }

/// Observed tau: largest off-diagonal |A - Omega|.
inline double empirical_tau(const WeightedGraph& g, const PopulationMatrix& pop) {
  double tau = 0.0;
  for (Index j = 0; j < g.size(); ++j)
    for (Index i = 0; i < g.size(); ++i)
      if (i != j) tau = std::max(tau, std::abs(g.weight(i, j) - pop.omega(i, j)));
  return tau;
}

/// Exact gamma = max_{i != j} Var(A(i,j)) / rho for a spec.
inline double population_gamma(const GeneratorSpec& spec, const PopulationMatrix& pop) {
  double worst = 0.0;
  for (Index j = 0; j < pop.omega.cols(); ++j)
    for (Index i = 0; i < pop.omega.rows(); ++i)
      if (i != j) worst = std::max(worst, spec.distribution.variance_at(pop.omega(i, j)));
  return worst / spec.rho;
}

}  // namespace mmdf
