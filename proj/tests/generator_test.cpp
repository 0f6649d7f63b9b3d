#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "mmdf/generator.hpp"

using namespace mmdf;

namespace {

Matrix p2() {
  Matrix p(3, 3);
  p << 1.0, 0.2, 0.3, 0.2, 0.9, 0.3, 0.3, 0.3, 0.9;
  return p;
}

Matrix p1() {
  Matrix p(3, 3);
  p << 1.0, -0.2, -0.3, -0.2, 0.9, 0.3, -0.3, 0.3, 0.9;
  return p;
}

GeneratorSpec make_spec(EdgeDistribution d, const Matrix& p, double rho, Index n = 40, Index n0 = 8) {
  GeneratorSpec s;
  s.design = three_community_design(n, n0);
  s.memberships = build_membership(*s.design);
  s.connectivity = check_connectivity(p, d);
  s.rho = rho;
  s.distribution = d;
  s.seed = 17;
  return s;
}

ConnectivityIssue issue_of(const Matrix& p, EdgeDistribution d = EdgeDistribution::normal(2.0)) {
  try {
    check_connectivity(p, d);
  } catch (const ConnectivityError& e) {
    return e.issue();
  }
  ADD_FAILURE() << "accepted an invalid connectivity matrix";
  return ConnectivityIssue::not_square;
}

}  // namespace

TEST(Connectivity, EachViolationIsNamed) {
  EXPECT_EQ(issue_of(Matrix::Ones(2, 3)), ConnectivityIssue::not_square);
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 0.5;
  EXPECT_EQ(issue_of(asym), ConnectivityIssue::asymmetric);
  EXPECT_EQ(issue_of(0.5 * p2()), ConnectivityIssue::not_normalized);
  EXPECT_EQ(issue_of(Matrix::Ones(2, 2)), ConnectivityIssue::rank_deficient);
  EXPECT_EQ(issue_of(p1(), EdgeDistribution::of(Family::poisson)), ConnectivityIssue::sign_inadmissible);
  EXPECT_NO_THROW(check_connectivity(p1(), EdgeDistribution::of(Family::signed_binary)));
  EXPECT_NO_THROW(check_connectivity(p1(), EdgeDistribution::normal(2.0)));
}

TEST(Membership, ThreeCommunityDesignLayout) {
  const auto m = build_membership(three_community_design(200, 40));
  EXPECT_EQ(m.nodes(), 200);
  Index pure = 0;
  for (Index i = 0; i < 200; ++i) {
    EXPECT_NEAR(m.row(i).sum(), 1.0, 1e-15);
    if (m.row(i).maxCoeff() == 1.0) ++pure;
  }
  EXPECT_EQ(pure, 120);
  EXPECT_EQ(m(0, 0), 1.0);
  EXPECT_EQ(m(40, 1), 1.0);
  EXPECT_EQ(m(120, 0), 0.4);
  EXPECT_THROW(three_community_design(201, 40), DomainError);
  EXPECT_THROW(build_membership(10, 3, 4, {}), DomainError);
}

TEST(Generator, PopulationMatrixMatchesDirectProduct) {
  const auto s = make_spec(EdgeDistribution::normal(2.0), p1(), 7.5);
  const auto pop = population_adjacency(s);
  const Matrix& pi = s.memberships.matrix();
  for (Index i = 0; i < s.n(); ++i)
    for (Index j = 0; j < s.n(); ++j) {
      double v = 0.0;
      for (Index a = 0; a < 3; ++a)
        for (Index b = 0; b < 3; ++b) v += pi(i, a) * p1()(a, b) * pi(j, b);
      EXPECT_NEAR(pop.omega(i, j), 7.5 * v, 1e-12);
    }
}

TEST(Generator, RhoRangesPerFamily) {
  auto s = make_spec(EdgeDistribution::of(Family::bernoulli), p2(), 1.0);
  EXPECT_NO_THROW(s.validate());
  s.rho = 1.01;
  EXPECT_THROW(s.validate(), DomainError);
  s.rho = 0.0;
  EXPECT_THROW(s.validate(), DomainError);

  auto t = make_spec(EdgeDistribution::of(Family::signed_binary), p1(), 0.99);
  EXPECT_NO_THROW(t.validate());
  t.rho = 1.0;
  EXPECT_THROW(t.validate(), DomainError);

  auto u = make_spec(EdgeDistribution::normal(2.0), p1(), 1e6);
  EXPECT_NO_THROW(u.validate());
  EXPECT_THROW(EdgeDistribution::normal(0.0).validate(), DomainError);
  EXPECT_THROW(EdgeDistribution::parse("cauchy"), ConfigError);
  EXPECT_EQ(EdgeDistribution::parse("signed").family, Family::signed_binary);
}

TEST(Generator, SampleIsSymmetricHollowAndDeterministic) {
  const auto s = make_spec(EdgeDistribution::of(Family::poisson), p2(), 2.0);
  const auto a = sample_adjacency(s, 5);
  const auto b = sample_adjacency(s, 5);
  const auto c = sample_adjacency(s, 6);
  EXPECT_EQ(a.graph.weights(), b.graph.weights());
  EXPECT_NE(a.graph.weights(), c.graph.weights());
  EXPECT_EQ(a.graph.weights(), a.graph.weights().transpose());
  EXPECT_EQ(a.graph.weights().diagonal().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(a.truth.memberships->matrix(), s.memberships.matrix());
}

TEST(Generator, PointMassReproducesOmega) {
  const auto s = make_spec(EdgeDistribution::of(Family::point_mass), p1(), 3.0);
  Matrix expected = population_adjacency(s).omega;
  expected.diagonal().setZero();
  EXPECT_EQ(sample_adjacency(s).graph.weights(), expected);
}

TEST(Generator, SignedAndBernoulliSupports) {
  const auto sg = sample_adjacency(make_spec(EdgeDistribution::of(Family::signed_binary), p1(), 0.6));
  const auto bg = sample_adjacency(make_spec(EdgeDistribution::of(Family::bernoulli), p2(), 0.6));
  std::set<double> sv, bv;
  for (Index i = 0; i < 40; ++i)
    for (Index j = i + 1; j < 40; ++j) {
      sv.insert(sg.graph.weight(i, j));
      bv.insert(bg.graph.weight(i, j));
    }
  EXPECT_EQ(sv, (std::set<double>{-1.0, 1.0}));
  EXPECT_EQ(bv, (std::set<double>{0.0, 1.0}));
}

// Standardized residuals (A - Omega) / sd over 200 seeds should have mean 0
// and variance 1 for every family, and each family's sample moments at a
// single entry should match its closed-form mean and variance.
TEST(Generator, SampleMomentsMatchFamilies) {
  struct Case {
    EdgeDistribution d;
    Matrix p;
    double rho;
  };
  const std::vector<Case> cases{{EdgeDistribution::normal(2.0), p1(), 5.0},
                                {EdgeDistribution::of(Family::bernoulli), p2(), 0.5},
                                {EdgeDistribution::of(Family::poisson), p2(), 2.0},
                                {EdgeDistribution::of(Family::uniform), p2(), 3.0},
                                {EdgeDistribution::of(Family::signed_binary), p1(), 0.5}};
  const int seeds = 200;
  for (const auto& c : cases) {
    const auto s = make_spec(c.d, c.p, c.rho, 24, 4);
    const Matrix omega = population_adjacency(s).omega;
    double sum = 0.0, sum_sq = 0.0;
    double entry_sum = 0.0, entry_sq = 0.0;
    std::size_t count = 0;
    for (int seed = 0; seed < seeds; ++seed) {
      const auto g = sample_adjacency(s, static_cast<std::uint64_t>(seed) + 1000);
      for (Index i = 0; i < 24; ++i)
        for (Index j = i + 1; j < 24; ++j) {
          const double z = (g.graph.weight(i, j) - omega(i, j)) / std::sqrt(c.d.variance_at(omega(i, j)));
          sum += z;
          sum_sq += z * z;
          ++count;
        }
      const double x = g.graph.weight(0, 20);
      entry_sum += x;
      entry_sq += x * x;
    }
    const double n = static_cast<double>(count);
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    EXPECT_LT(std::abs(mean), 5.0 / std::sqrt(n)) << c.d.name();
    EXPECT_NEAR(var, 1.0, 0.05) << c.d.name();

    const double mu = omega(0, 20), sigma2 = c.d.variance_at(mu);
    const double entry_mean = entry_sum / seeds;
    const double entry_var = entry_sq / seeds - entry_mean * entry_mean;
    EXPECT_NEAR(entry_mean, mu, 5.0 * std::sqrt(sigma2 / seeds)) << c.d.name();
    EXPECT_NEAR(entry_var, sigma2, 0.35 * sigma2) << c.d.name();
  }
}

TEST(Generator, MissingEdgeMask) {
  auto s = make_spec(EdgeDistribution::normal(2.0), p1(), 5.0, 60, 12);
  const auto full = sample_adjacency(s, 3);
  s.sparsity = 0.3;
  std::size_t kept = 0, pairs = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = sample_adjacency(s, seed);
    for (Index i = 0; i < 60; ++i)
      for (Index j = i + 1; j < 60; ++j) {
        ++pairs;
        if (g.graph.weight(i, j) != 0.0) ++kept;
        if (seed == 3) {
          const double w = g.graph.weight(i, j);
          EXPECT_TRUE(w == 0.0 || w == full.graph.weight(i, j));
        }
      }
  }
  const double frac = static_cast<double>(kept) / static_cast<double>(pairs);
  EXPECT_NEAR(frac, 0.3, 5.0 * std::sqrt(0.3 * 0.7 / static_cast<double>(pairs)));

  s.sparsity = 0.001;
  EXPECT_FALSE(sample_adjacency(s, 1).mask_connected);
  s.sparsity = 1.0;
  EXPECT_EQ(sample_adjacency(s, 3).graph.weights(), full.graph.weights());
  s.sparsity = 1.5;
  EXPECT_THROW(sample_adjacency(s, 1), DomainError);
}

TEST(Generator, NoiseBoundsHold) {
  for (auto fam : {Family::bernoulli, Family::uniform, Family::signed_binary, Family::point_mass}) {
    const EdgeDistribution d = EdgeDistribution::of(fam);
    const Matrix& p = fam == Family::signed_binary ? p1() : p2();
    const double rho = fam == Family::uniform ? 4.0 : 0.7;
    const auto s = make_spec(d, p, rho);
    const auto pop = population_adjacency(s);
    const auto diag = noise_diagnostics(d, rho, s.n());
    ASSERT_TRUE(diag.tau_bound.has_value());
    EXPECT_LE(empirical_tau(sample_adjacency(s).graph, pop), *diag.tau_bound + 1e-12) << d.name();
    EXPECT_LE(population_gamma(s, pop), diag.gamma_bound + 1e-12) << d.name();
  }
  EXPECT_TRUE(*noise_diagnostics(EdgeDistribution::of(Family::signed_binary), 0.5, 800).requirement_holds);
  EXPECT_FALSE(*noise_diagnostics(EdgeDistribution::of(Family::bernoulli), 0.001, 200).requirement_holds);
}

TEST(Rng, DerivedSeedsSeparateStreams) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {0}), derive_seed(2, {0}));
  auto a = make_engine(99), b = make_engine(99);
  EXPECT_EQ(a(), b());
}
