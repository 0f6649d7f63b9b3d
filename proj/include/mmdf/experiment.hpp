#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mmdf/dfsp.hpp"
#include "mmdf/error.hpp"
#include "mmdf/generator.hpp"
#include "mmdf/metrics.hpp"
#include "mmdf/modularity.hpp"
#include "mmdf/rng.hpp"

namespace mmdf {

enum class Mode { simulate, detect, scan_k, dataset_suite };

/// `paper` runs 100 replicates per sweep value; `ci` runs 25.
enum class Profile { paper, ci };

inline Index default_replications(Profile p) { return p == Profile::paper ? 100 : 25; }

/// Template for the networks drawn in a simulation; the swept parameter
/// overrides the matching field per sweep value.
struct GeneratorDesign {
  MembershipDesign membership;
  Matrix connectivity;
  EdgeDistribution distribution;
  double rho = 1.0;
  std::optional<double> sparsity;
};

struct Sweep {
  /// One of "rho", "p" (sparsity) or "variance" (normal family).
  std::string parameter = "rho";
  std::vector<double> values;
};

struct ExperimentConfig {
  Mode mode = Mode::simulate;
  std::string name;
  Profile profile = Profile::ci;
  GeneratorDesign generator;
  Sweep sweep;
  Index replications = 25;
  /// Community count handed to the estimator; unset means "auto" (the
  /// design's K in simulations, model selection elsewhere).
  std::optional<Index> estimator_k;
  /// Model-selection ceiling; 0 means min(15, n - 1).
  Index k_max = 0;
  std::uint64_t seed = 1;
  /// Worker threads; 0 means one per hardware thread.
  unsigned threads = 0;
  std::filesystem::path graph;
  std::filesystem::path output;
};

// -----------------------------------------------------------------------------
// Reference designs
// -----------------------------------------------------------------------------

/// Signed connectivity matrix of the normal-family design.
inline Matrix signed_connectivity() {
  Matrix p(3, 3);
  p << 1.0, -0.2, -0.3, -0.2, 0.9, 0.3, -0.3, 0.3, 0.9;
  return p;
}

/// Nonnegative connectivity matrix shared by the other designs.
inline Matrix nonnegative_connectivity() {
  Matrix p(3, 3);
  p << 1.0, 0.2, 0.3, 0.2, 0.9, 0.3, 0.3, 0.3, 0.9;
  return p;
}

/// {step, 2 step, ..., count step}. Fractional steps are applied as i / (1 / step)
/// so that 0.05 * 3 prints as 0.15.
inline std::vector<double> arithmetic_grid(double step, int count) {
  std::vector<double> out;
  const double inverse = std::round(1.0 / step);
  const bool reciprocal = step < 1.0 && std::abs(1.0 / inverse - step) < 1e-15;
  for (int i = 1; i <= count; ++i) out.push_back(reciprocal ? i / inverse : step * i);
  return out;
}

inline const std::vector<std::string>& design_names() {
  static const std::vector<std::string> names{"normal", "bernoulli", "poisson", "uniform", "signed", "point_mass"};
  return names;
}

/// Simulation setups: n = 200, K = 3, 40 pure nodes per community (signed:
/// n = 800, 200 pure), rho swept over 20 values.
inline ExperimentConfig named_design(const std::string& name, Profile profile = Profile::ci) {
  ExperimentConfig c;
  c.mode = Mode::simulate;
  c.name = name;
  c.profile = profile;
  c.replications = default_replications(profile);
  c.generator.membership = three_community_design(200, 40);
  c.generator.connectivity = nonnegative_connectivity();
  if (name == "normal") {
    c.generator.connectivity = signed_connectivity();
    c.generator.distribution = EdgeDistribution::normal(2.0);
    c.sweep.values = arithmetic_grid(5.0, 20);
  } else if (name == "bernoulli") {
    c.generator.distribution = EdgeDistribution::of(Family::bernoulli);
    c.sweep.values = arithmetic_grid(0.05, 20);
  } else if (name == "poisson") {
    c.generator.distribution = EdgeDistribution::of(Family::poisson);
    c.sweep.values = arithmetic_grid(0.2, 20);
  } else if (name == "uniform") {
    c.generator.distribution = EdgeDistribution::of(Family::uniform);
    c.sweep.values = arithmetic_grid(1.0, 20);
  } else if (name == "signed") {
    c.generator.membership = three_community_design(800, 200);
    c.generator.distribution = EdgeDistribution::of(Family::signed_binary);
    // The top of the grid is rho = 1, outside the open range of the family;
    // it is capped just below 1.
    c.sweep.values = arithmetic_grid(0.05, 20);
    c.sweep.values.back() = 0.999;
  } else if (name == "point_mass") {
    c.generator.distribution = EdgeDistribution::of(Family::point_mass);
    c.sweep.values = arithmetic_grid(0.5, 10);
  } else {
    throw ConfigError("unknown design '" + name + "'");
  }
  c.generator.rho = c.sweep.values.front();
  return c;
}

// -----------------------------------------------------------------------------
// Monte Carlo sweep
// -----------------------------------------------------------------------------

struct ReplicateOutcome {
  bool success = false;
  double hamming = 0.0;
  double relative = 0.0;
  /// Selected community count, 0 when model selection failed.
  Index k_estimate = 0;
  bool mask_connected = true;
  std::string failure;
};

struct SweepCell {
  double value = 0.0;
  Index replications = 0;
  Index successes = 0;
  Index failures = 0;
  /// Means over successful replicates; NaN when none succeeded.
  double mean_hamming = std::numeric_limits<double>::quiet_NaN();
  double mean_relative = std::numeric_limits<double>::quiet_NaN();
  /// Share of all replicates whose selected K equals the design's K.
  double accuracy = 0.0;
  Index disconnected_masks = 0;
  std::vector<Index> k_estimates;
};

struct SweepReport {
  ExperimentConfig config;
  std::vector<SweepCell> cells;
};

/// Generator spec for one sweep value; inadmissible values raise ConfigError.
inline GeneratorSpec spec_for(const ExperimentConfig& config, double value) {
  GeneratorDesign d = config.generator;
  if (config.sweep.parameter == "rho") {
    d.rho = value;
  } else if (config.sweep.parameter == "p") {
    d.sparsity = value;
  } else if (config.sweep.parameter == "variance") {
    d.distribution.variance = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + config.sweep.parameter + "'");
  }
  try {
    GeneratorSpec spec;
    spec.memberships = build_membership(d.membership);
    spec.design = d.membership;
    spec.connectivity = check_connectivity(d.connectivity, d.distribution);
    spec.rho = d.rho;
    spec.distribution = d.distribution;
    spec.sparsity = d.sparsity;
    spec.seed = config.seed;
    (void)population_adjacency(spec);
    return spec;
  } catch (const DomainError& e) {
    throw ConfigError("sweep value " + format_double(value) + " of '" + config.sweep.parameter +
                      "' is inadmissible: " + e.what());
  }
}

/// Run `task(i)` for i in [0, count) on a small worker pool. Results must be
/// written to per-index slots, which keeps the outcome independent of
/// scheduling.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// One replicate: draw A, estimate memberships at the design's K, score
/// them, then pick K by modularity from the same decomposition.
inline ReplicateOutcome run_replicate(const GeneratorSpec& spec, std::uint64_t seed, Index estimator_k, Index k_max) {
  ReplicateOutcome out;
  const SampledNetwork sample = sample_adjacency(spec, seed);
  out.mask_connected = sample.mask_connected;
  const SymmetricEigen eig(sample.graph.weights());
  try {
    const DfspReport report = dfsp(eig, estimator_k);
    const ErrorPair err = membership_errors(report.memberships, *sample.truth.memberships);
    out.hamming = err.hamming;
    out.relative = err.relative;
    out.success = true;
  } catch (const EstimationError& e) {
    out.failure = e.what();
  }
  try {
    out.k_estimate = estimate_k(sample.graph, eig, k_max).best_k;
  } catch (const EstimationError&) {
    out.k_estimate = 0;
  }
  return out;
}

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

inline SweepReport run_simulation(const ExperimentConfig& config, const ProgressCallback& progress = {}) {
  if (config.mode != Mode::simulate) throw ConfigError("run_simulation needs a simulate-mode config");
  if (config.replications < 1) throw ConfigError("replications must be at least 1");
  if (config.sweep.values.empty()) throw ConfigError("sweep has no values");
  std::vector<GeneratorSpec> specs;
  for (double v : config.sweep.values) specs.push_back(spec_for(config, v));

  const Index n = specs.front().n();
  const Index true_k = specs.front().k();
  const Index estimator_k = config.estimator_k.value_or(true_k);
  if (estimator_k < 1 || estimator_k > n) throw ConfigError("estimator k outside [1, n]");
  const Index k_max = config.k_max > 0 ? config.k_max : default_k_max(n);

  const std::size_t reps = static_cast<std::size_t>(config.replications);
  const std::size_t total = specs.size() * reps;
  std::vector<ReplicateOutcome> outcomes(total);
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  parallel_for(total, config.threads, [&](std::size_t t) {
    const std::size_t cell = t / reps, rep = t % reps;
    outcomes[t] = run_replicate(specs[cell], derive_seed(config.seed, {cell, rep}), estimator_k, k_max);
    const std::size_t d = ++done;
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(d, total);
    }
  });

  SweepReport report;
  report.config = config;
  for (std::size_t cell = 0; cell < specs.size(); ++cell) {
    SweepCell c;
    c.value = config.sweep.values[cell];
    c.replications = config.replications;
    double h = 0.0, r = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const ReplicateOutcome& o = outcomes[cell * reps + rep];
      c.k_estimates.push_back(o.k_estimate);
      if (!o.mask_connected) ++c.disconnected_masks;
      if (!o.success) {
        ++c.failures;
        continue;
      }
      ++c.successes;
      h += o.hamming;
      r += o.relative;
    }
    if (c.successes > 0) {
      c.mean_hamming = h / static_cast<double>(c.successes);
      c.mean_relative = r / static_cast<double>(c.successes);
    }
    c.accuracy = accuracy_rate(c.k_estimates, true_k);
    report.cells.push_back(std::move(c));
  }
  return report;
}

// -----------------------------------------------------------------------------
// Trend statistics
// -----------------------------------------------------------------------------

/// Ranks starting at 1, ties sharing their average rank.
inline std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

/// Spearman rank correlation; NaN when either input is constant.
inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("spearman needs two equal-length samples of size >= 2");
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace mmdf
