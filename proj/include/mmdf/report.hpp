#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mmdf/config.hpp"
#include "mmdf/dfsp.hpp"
#include "mmdf/experiment.hpp"
#include "mmdf/modularity.hpp"

namespace mmdf {

/// Writes `content` to `path`, creating parent directories.
inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

inline Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

/// n x K membership table, one row per node (1-based ids).
inline void write_membership_csv(const MembershipMatrix& m, std::ostream& out,
                                 const std::vector<std::string>& node_labels = {}) {
  out << "node";
  for (Index c = 0; c < m.communities(); ++c) out << ",c" << (c + 1);
  out << '\n';
  for (Index i = 0; i < m.nodes(); ++i) {
    const auto iu = static_cast<std::size_t>(i);
    out << (iu < node_labels.size() ? node_labels[iu] : std::to_string(i + 1));
    for (Index c = 0; c < m.communities(); ++c) out << ',' << format_double(m(i, c));
    out << '\n';
  }
}

inline void write_labels(const HardAssignment& h, std::ostream& out) {
  for (int l : h.labels) out << (l + 1) << '\n';
}

inline void write_kscan_csv(const KScanResult& r, std::ostream& out) {
  out << "k,q\n";
  for (const auto& p : r.curve) out << p.k << ',' << (p.value ? format_double(p.value->q) : std::string()) << '\n';
}

inline Json modularity_to_json(const ModularityValue& v) {
  return {{"q", v.q}, {"q_pos", v.q_pos}, {"q_neg", v.q_neg}, {"pos_weight", v.pos_weight}, {"neg_weight", v.neg_weight}};
}

inline Json kscan_to_json(const KScanResult& r) {
  Json curve = Json::array();
  Json failures = Json::array();
  for (const auto& p : r.curve) {
    Json point = {{"k", p.k}};
    if (p.value) {
      point.update(modularity_to_json(*p.value));
    } else {
      point["failure"] = p.failure;
      failures.push_back({{"k", p.k}, {"reason", p.failure}});
    }
    curve.push_back(std::move(point));
  }
  return {{"best_k", r.best_k}, {"k_max", r.k_max}, {"failures", failures}, {"curve", curve}};
}

inline void write_sweep_csv(const SweepReport& r, std::ostream& out) {
  out << r.config.sweep.parameter
      << ",replications,successes,failures,mean_hamming,mean_relative,accuracy,disconnected_masks\n";
  for (const auto& c : r.cells) {
    out << format_double(c.value) << ',' << c.replications << ',' << c.successes << ',' << c.failures << ','
        << csv_number(c.mean_hamming) << ',' << csv_number(c.mean_relative) << ',' << format_double(c.accuracy) << ','
        << c.disconnected_masks << '\n';
  }
}

struct SweepTrend {
  double hamming = std::numeric_limits<double>::quiet_NaN();
  double relative = std::numeric_limits<double>::quiet_NaN();
  double accuracy = std::numeric_limits<double>::quiet_NaN();
};

/// Spearman correlations of the swept value against each cell statistic,
/// over cells where the statistic is defined.
inline SweepTrend sweep_trend(const SweepReport& r) {
  auto corr = [&](auto field) {
    std::vector<double> x, y;
    for (const auto& c : r.cells) {
      const double v = field(c);
      if (!std::isfinite(v)) continue;
      x.push_back(c.value);
      y.push_back(v);
    }
    return x.size() < 2 ? std::numeric_limits<double>::quiet_NaN() : spearman(x, y);
  };
  SweepTrend t;
  t.hamming = corr([](const SweepCell& c) { return c.mean_hamming; });
  t.relative = corr([](const SweepCell& c) { return c.mean_relative; });
  t.accuracy = corr([](const SweepCell& c) { return c.accuracy; });
  return t;
}

/// Config as stored next to results; the output directory is left out so
/// that reruns into different directories produce identical files.
inline Json config_record(const ExperimentConfig& c) {
  Json j = config_to_json(c);
  j.erase("output");
  return j;
}

inline Json sweep_to_json(const SweepReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"value", c.value},
                     {"replications", c.replications},
                     {"successes", c.successes},
                     {"failures", c.failures},
                     {"mean_hamming", json_number(c.mean_hamming)},
                     {"mean_relative", json_number(c.mean_relative)},
                     {"accuracy", c.accuracy},
                     {"disconnected_masks", c.disconnected_masks},
                     {"k_estimates", c.k_estimates}});
  }
  const SweepTrend t = sweep_trend(r);
  return {{"config", config_record(r.config)},
          {"seed", r.config.seed},
          {"trend",
           {{"spearman_hamming", json_number(t.hamming)},
            {"spearman_relative", json_number(t.relative)},
            {"spearman_accuracy", json_number(t.accuracy)}}},
          {"cells", cells}};
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace mmdf
