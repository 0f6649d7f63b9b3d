#pragma once

#include <algorithm>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mmdf/dfsp.hpp"
#include "mmdf/graph.hpp"
#include "mmdf/metrics.hpp"
#include "mmdf/modularity.hpp"
#include "mmdf/report.hpp"

namespace mmdf {

/// Published summary numbers for a real network, used as regression targets.
struct DatasetReference {
  Index nodes = 0;
  Index edges = 0;
  double max_weight = 0.0;
  double min_weight = 0.0;
  Index k = 0;
  double modularity = 0.0;
  double eta_mixed = 0.0;
  double eta_pure = 0.0;
  std::optional<std::size_t> mislabels;
};

struct DatasetEntry {
  std::string name;
  std::string title;
  std::filesystem::path graph;
  EdgeListOptions options;
  std::optional<std::filesystem::path> truth;
  /// Shipped in data/ rather than fetched into data/cache/.
  bool bundled = false;
  DatasetReference reference;
};

/// The real networks known to the suite. Bundled files live in `data_dir`;
/// the rest are fetched into `data_dir/cache` by scripts/fetch_datasets.py.
inline std::vector<DatasetEntry> dataset_catalog(const std::filesystem::path& data_dir) {
  const auto cache = data_dir / "cache";
  const auto truth = data_dir / "truth";
  std::vector<DatasetEntry> out;
  auto add = [&](std::string name, std::string title, std::filesystem::path graph, bool bundled, DatasetReference ref,
                 std::optional<std::filesystem::path> labels = std::nullopt) {
    DatasetEntry e;
    e.name = std::move(name);
    e.title = std::move(title);
    e.graph = std::move(graph);
    e.bundled = bundled;
    e.reference = ref;
    e.truth = std::move(labels);
    if (e.graph.extension() == ".net") e.options.format = EdgeListFormat::pajek;
    if (auto names = std::filesystem::path(e.graph).replace_extension(".nodes"); std::filesystem::exists(names)) {
      e.options.node_file = names;
    }
    out.push_back(std::move(e));
  };
  add("gahuku_gama", "Gahuku-Gama subtribes", cache / "gahuku_gama.txt", false,
      {16, 58, 1, -1, 3, 0.4000, 0.0625, 0.8750, 0}, truth / "gahuku_gama.labels");
  add("karate_weighted", "Karate-club-weighted", data_dir / "karate_weighted.txt", true,
      {34, 78, 7, 0, 2, 0.3734, 0.0588, 0.7941, 0}, truth / "karate_weighted.labels");
  add("slovene_parliament", "Slovene Parliamentary Party", cache / "slovene_parliament.net", false,
      {10, 45, 235, -254, 2, 0.4492, 0.0, 0.9, std::nullopt});
  add("train_bombing", "Train bombing", cache / "train_bombing.txt", false,
      {64, 243, 4, 0, 2, 0.3066, 0.0938, 0.7969, std::nullopt});
  add("les_miserables", "Les Miserables", data_dir / "les_miserables.txt", true,
      {77, 254, 31, 0, 2, 0.3630, 0.0130, 0.9351, std::nullopt});
  add("political_blogs", "Political blogs", cache / "political_blogs.txt", false,
      {1222, 16714, 1, 0, 2, 0.4001, 0.0393, 0.8781, 64}, cache / "political_blogs.labels");
  return out;
}

inline const DatasetEntry& find_dataset(const std::vector<DatasetEntry>& catalog, const std::string& name) {
  for (const auto& e : catalog) {
    if (e.name == name) return e;
  }
  throw ConfigError("unknown dataset '" + name + "'");
}

struct EigenDiagnostics {
  /// |lambda_1| >= ... >= |lambda_{K+1}| (fewer when n <= K).
  std::vector<double> magnitudes;
  /// |lambda_K| - |lambda_{K+1}|; NaN when n <= K.
  double gap = std::numeric_limits<double>::quiet_NaN();
};

inline EigenDiagnostics eigen_diagnostics(const SymmetricEigen& eig, Index k) {
  EigenDiagnostics d;
  const Index top = std::min(k + 1, eig.size());
  for (Index i = 0; i < top; ++i) d.magnitudes.push_back(std::abs(eig.values()(i)));
  if (top == k + 1) d.gap = d.magnitudes[static_cast<std::size_t>(k - 1)] - d.magnitudes[static_cast<std::size_t>(k)];
  return d;
}

struct DetectReport {
  Index k = 0;
  std::optional<KScanResult> scan;
  MembershipMatrix memberships;
  HardAssignment labels;
  ModularityValue modularity;
  MixednessIndices eta;
  EigenDiagnostics eigen;
  std::size_t degenerate_rows = 0;
};

/// Fit one graph. With no `k` the community count is chosen by modularity
/// over 1..k_max (k_max = 0 picks the default ceiling).
inline DetectReport detect(const WeightedGraph& g, std::optional<Index> k, Index k_max = 0) {
  if (g.size() == 0) throw EstimationError("eigendecomposition", "graph has no nodes");
  const SymmetricEigen eig(g.weights());
  DetectReport out;
  if (k) {
    out.k = *k;
  } else {
    out.scan = estimate_k(g, eig, k_max > 0 ? k_max : default_k_max(g.size()));
    out.k = out.scan->best_k;
  }
  if (out.k < 1 || out.k > g.size()) throw DomainError("k must lie in [1, n]");
  const DfspReport fit = dfsp(eig, out.k);
  out.memberships = fit.memberships;
  out.labels = harden(fit.memberships);
  out.modularity = fuzzy_weighted_modularity(g, fit.memberships);
  out.eta = mixedness_indices(fit.memberships);
  out.eigen = eigen_diagnostics(eig, out.k);
  out.degenerate_rows = fit.degenerate_rows;
  return out;
}

inline Json detect_to_json(const DetectReport& r) {
  Json j;
  j["k"] = r.k;
  j["q"] = r.modularity.q;
  j["modularity"] = modularity_to_json(r.modularity);
  j["eta_mixed"] = r.eta.eta_mixed;
  j["eta_pure"] = r.eta.eta_pure;
  j["eigenvalue_magnitudes"] = r.eigen.magnitudes;
  j["eigen_gap"] = json_number(r.eigen.gap);
  j["degenerate_rows"] = r.degenerate_rows;
  if (r.scan) j["k_scan"] = kscan_to_json(*r.scan);
  return j;
}

struct DatasetResult {
  std::string name;
  bool available = false;
  std::string notice;
  Index nodes = 0;
  Index edges = 0;
  double max_weight = 0.0;
  double min_weight = 0.0;
  std::optional<Index> true_k;
  /// Selected count and the fit at that count.
  std::optional<DetectReport> fit;
  /// Misclustered nodes of the hard labels at the true count.
  std::optional<std::size_t> mislabels;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_records = 0;
};

inline DatasetResult run_dataset(const DatasetEntry& entry, Index k_max = 0) {
  DatasetResult r;
  r.name = entry.name;
  if (!std::filesystem::exists(entry.graph)) {
    r.notice = "missing " + entry.graph.generic_string() + (entry.bundled ? "" : " (run scripts/fetch_datasets.py)");
    return r;
  }
  const LoadedGraph loaded = load_edge_list(entry.graph, entry.options);
  const WeightedGraph& g = loaded.graph;
  r.available = true;
  r.nodes = g.size();
  r.edges = static_cast<Index>(g.edge_count());
  r.max_weight = g.max_weight();
  r.min_weight = g.min_weight();
  r.self_loops_dropped = loaded.self_loops_dropped;
  r.duplicate_records = loaded.duplicate_records;

  std::optional<std::vector<int>> truth;
  if (entry.truth && std::filesystem::exists(*entry.truth)) {
    truth = load_community_labels(*entry.truth);
    if (static_cast<Index>(truth->size()) != g.size()) {
      throw ParseError(entry.truth->string(), 0, "label count does not match the graph");
    }
    r.true_k = *std::max_element(truth->begin(), truth->end()) + 1;
  }
  try {
    r.fit = detect(g, std::nullopt, k_max);
    if (truth) {
      const HardAssignment hard = *r.true_k == r.fit->k ? r.fit->labels : harden(dfsp(g, *r.true_k).memberships);
      r.mislabels = mislabel_count(hard, *truth);
    }
  } catch (const EstimationError& e) {
    r.notice = e.what();
  }
  return r;
}

inline std::vector<DatasetResult> run_dataset_suite(const std::vector<DatasetEntry>& entries, Index k_max = 0) {
  std::vector<DatasetResult> out;
  for (const auto& e : entries) out.push_back(run_dataset(e, k_max));
  return out;
}

inline void write_dataset_table_csv(const std::vector<DatasetResult>& rows, std::ostream& out) {
  out << "dataset,n,edges,max_weight,min_weight,true_k,kdfsp_k,q,eta_mixed,eta_pure,mislabels,status\n";
  for (const auto& r : rows) {
    out << r.name << ',';
    if (!r.available) {
      out << ",,,,,,,,,,skipped\n";
      continue;
    }
    out << r.nodes << ',' << r.edges << ',' << format_double(r.max_weight) << ',' << format_double(r.min_weight) << ','
        << (r.true_k ? std::to_string(*r.true_k) : std::string()) << ',';
    if (r.fit) {
      out << r.fit->k << ',' << format_double(r.fit->modularity.q) << ',' << format_double(r.fit->eta.eta_mixed) << ','
          << format_double(r.fit->eta.eta_pure) << ',';
    } else {
      out << ",,,,";
    }
    out << (r.mislabels ? std::to_string(*r.mislabels) : std::string()) << ',' << (r.fit ? "ok" : "failed") << '\n';
  }
}

inline Json dataset_suite_to_json(const std::vector<DatasetResult>& rows, Index k_max) {
  Json list = Json::array();
  for (const auto& r : rows) {
    Json j = {{"dataset", r.name}, {"available", r.available}};
    if (!r.notice.empty()) j["notice"] = r.notice;
    if (r.available) {
      j["n"] = r.nodes;
      j["edges"] = r.edges;
      j["max_weight"] = r.max_weight;
      j["min_weight"] = r.min_weight;
      j["self_loops_dropped"] = r.self_loops_dropped;
      j["duplicate_records"] = r.duplicate_records;
      if (r.true_k) j["true_k"] = *r.true_k;
      if (r.fit) j["fit"] = detect_to_json(*r.fit);
      if (r.mislabels) j["mislabels"] = *r.mislabels;
    }
    list.push_back(std::move(j));
  }
  return {{"k_max", k_max}, {"datasets", list}};
}

}  // namespace mmdf
