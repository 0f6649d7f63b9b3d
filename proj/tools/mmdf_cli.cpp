#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mmdf/mmdf.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kIo = 3, kEstimation = 4 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::string> profile;
  std::optional<std::string> k;
  std::optional<mmdf::Index> k_max;
};

struct GraphArgs {
  std::string path;
  std::string format;  // empty: pajek for .net files, plain otherwise
  bool numeric_ids = false;
  std::string node_file;
};

mmdf::EdgeListOptions edge_list_options(const GraphArgs& a) {
  mmdf::EdgeListOptions o;
  const std::string format =
      !a.format.empty() ? a.format : std::filesystem::path(a.path).extension() == ".net" ? "pajek" : "plain";
  if (format == "konect") {
    o.format = mmdf::EdgeListFormat::konect;
  } else if (format == "pajek") {
    o.format = mmdf::EdgeListFormat::pajek;
  } else if (format != "plain") {
    throw mmdf::ConfigError("unknown format '" + format + "'");
  }
  if (a.numeric_ids) o.order = mmdf::NodeOrder::numeric;
  if (!a.node_file.empty()) o.node_file = a.node_file;
  return o;
}

/// Base config from --config (if any) with command-line overrides applied.
mmdf::ExperimentConfig resolve_config(const Common& c, mmdf::Mode mode) {
  mmdf::ExperimentConfig cfg;
  if (!c.config.empty()) {
    cfg = mmdf::load_config(c.config);
  }
  cfg.mode = mode;
  if (c.profile) {
    cfg.profile = mmdf::parse_profile(*c.profile);
    cfg.replications = mmdf::default_replications(cfg.profile);
  }
  if (c.seed) cfg.seed = *c.seed;
  if (c.k) {
    if (*c.k == "auto") {
      cfg.estimator_k.reset();
    } else {
      mmdf::Index k = 0;
      try {
        k = std::stoll(*c.k);
      } catch (const std::exception&) {
        throw mmdf::ConfigError("--k expects a count or 'auto'");
      }
      cfg.estimator_k = k;
    }
  }
  if (c.k_max) cfg.k_max = *c.k_max;
  if (!c.out.empty()) cfg.output = c.out;
  if (cfg.output.empty()) cfg.output = "out";
  return cfg;
}

mmdf::LoadedGraph load_graph(const GraphArgs& g, const mmdf::ExperimentConfig& cfg) {
  fs::path path = g.path.empty() ? cfg.graph : fs::path(g.path);
  if (path.empty()) throw mmdf::ConfigError("no graph given");
  return mmdf::load_edge_list(path, edge_list_options(g));
}

void report_load(const mmdf::LoadedGraph& l) {
  if (l.self_loops_dropped) std::cerr << "note: dropped " << l.self_loops_dropped << " self-loop record(s)\n";
  if (l.duplicate_records) std::cerr << "note: summed " << l.duplicate_records << " duplicate edge record(s)\n";
  if (!l.isolated.empty()) std::cerr << "note: " << l.isolated.size() << " isolated node(s)\n";
}

int run_simulate(const Common& c, const std::string& design, std::optional<mmdf::Index> reps, unsigned threads) {
  mmdf::ExperimentConfig cfg;
  if (!design.empty()) {
    if (!c.config.empty()) throw mmdf::ConfigError("--design and --config are exclusive");
    cfg = mmdf::named_design(design, c.profile ? mmdf::parse_profile(*c.profile) : mmdf::Profile::ci);
    Common rest = c;
    rest.profile.reset();
    mmdf::ExperimentConfig over = resolve_config(rest, mmdf::Mode::simulate);
    cfg.seed = c.seed.value_or(cfg.seed);
    cfg.estimator_k = over.estimator_k;
    cfg.k_max = over.k_max;
    cfg.output = over.output;
  } else {
    if (c.config.empty()) throw mmdf::ConfigError("simulate needs --config or --design");
    cfg = resolve_config(c, mmdf::Mode::simulate);
  }
  if (reps) cfg.replications = *reps;
  cfg.threads = threads;
  const auto report = mmdf::run_simulation(cfg, [](std::size_t done, std::size_t total) {
    if (done == total || done % 50 == 0) std::cerr << "\rreplicates " << done << "/" << total << std::flush;
  });
  std::cerr << '\n';
  std::ostringstream csv;
  mmdf::write_sweep_csv(report, csv);
  mmdf::write_text_file(cfg.output / "sweep.csv", csv.str());
  mmdf::write_text_file(cfg.output / "sweep.json", mmdf::dump_json(mmdf::sweep_to_json(report)));
  std::cout << csv.str();
  const auto trend = mmdf::sweep_trend(report);
  std::cout << "spearman(" << cfg.sweep.parameter << ", hamming) = " << mmdf::csv_number(trend.hamming) << '\n';
  return kOk;
}

int run_detect(const Common& c, const GraphArgs& g) {
  const auto cfg = resolve_config(c, mmdf::Mode::detect);
  const auto loaded = load_graph(g, cfg);
  report_load(loaded);
  const auto r = mmdf::detect(loaded.graph, cfg.estimator_k, cfg.k_max);
  std::ostringstream members, labels;
  mmdf::write_membership_csv(r.memberships, members, loaded.graph.node_labels());
  mmdf::write_labels(r.labels, labels);
  mmdf::Json summary = mmdf::detect_to_json(r);
  summary["graph"] = {{"n", loaded.graph.size()}, {"edges", loaded.graph.edge_count()}};
  summary["config"] = mmdf::config_record(cfg);
  mmdf::write_text_file(cfg.output / "memberships.csv", members.str());
  mmdf::write_text_file(cfg.output / "labels.txt", labels.str());
  mmdf::write_text_file(cfg.output / "summary.json", mmdf::dump_json(summary));
  std::cout << "k = " << r.k << "\nQ = " << mmdf::format_double(r.modularity.q)
            << "\neta_mixed = " << mmdf::format_double(r.eta.eta_mixed)
            << "\neta_pure = " << mmdf::format_double(r.eta.eta_pure) << '\n';
  return kOk;
}

int run_scan(const Common& c, const GraphArgs& g, bool stop_early) {
  const auto cfg = resolve_config(c, mmdf::Mode::scan_k);
  const auto loaded = load_graph(g, cfg);
  report_load(loaded);
  const mmdf::Index k_max = cfg.k_max > 0 ? cfg.k_max : mmdf::default_k_max(loaded.graph.size());
  const auto r = mmdf::estimate_k(loaded.graph, k_max, {stop_early});
  std::ostringstream csv;
  mmdf::write_kscan_csv(r, csv);
  mmdf::Json summary = mmdf::kscan_to_json(r);
  summary["config"] = mmdf::config_record(cfg);
  mmdf::write_text_file(cfg.output / "kscan.csv", csv.str());
  mmdf::write_text_file(cfg.output / "kscan.json", mmdf::dump_json(summary));
  std::cout << csv.str() << "best_k = " << r.best_k << '\n';
  return kOk;
}

int run_datasets(const Common& c, const std::string& data_dir, const std::vector<std::string>& only) {
  const auto cfg = resolve_config(c, mmdf::Mode::dataset_suite);
  std::vector<mmdf::DatasetEntry> entries;
  const auto catalog = mmdf::dataset_catalog(data_dir);
  if (only.empty()) {
    entries = catalog;
  } else {
    for (const auto& name : only) entries.push_back(mmdf::find_dataset(catalog, name));
  }
  const auto rows = mmdf::run_dataset_suite(entries, cfg.k_max);
  for (const auto& r : rows) {
    if (!r.notice.empty()) std::cerr << r.name << ": " << r.notice << '\n';
  }
  std::ostringstream csv;
  mmdf::write_dataset_table_csv(rows, csv);
  mmdf::write_text_file(cfg.output / "datasets.csv", csv.str());
  mmdf::write_text_file(cfg.output / "datasets.json", mmdf::dump_json(mmdf::dataset_suite_to_json(rows, cfg.k_max)));
  std::cout << csv.str();
  return kOk;
}

int run_generate(const Common& c) {
  if (c.config.empty()) throw mmdf::ConfigError("generate needs --config with a generator spec");
  mmdf::Json j = mmdf::read_json_file(c.config);
  if (j.contains("generator")) j = j.at("generator");
  auto spec = mmdf::generator_spec_from_json(j);
  if (c.seed) spec.seed = *c.seed;
  const fs::path out = c.out.empty() ? fs::path("out") : fs::path(c.out);
  const auto sample = mmdf::sample_adjacency(spec);
  std::ostringstream graph, members;
  mmdf::write_edge_list(sample.graph, graph);
  mmdf::write_membership_csv(*sample.truth.memberships, members);
  mmdf::write_text_file(out / "graph.txt", graph.str());
  mmdf::write_text_file(out / "memberships.csv", members.str());
  if (!sample.mask_connected) std::cerr << "note: the missing-edge mask is disconnected\n";
  std::cout << "n = " << sample.graph.size() << ", edges = " << sample.graph.edge_count() << '\n';
  return kOk;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON config file");
  app->add_option("--seed", c.seed, "root seed");
  app->add_option("--out", c.out, "output directory");
  app->add_option("--profile", c.profile, "replication profile")->check(CLI::IsMember({"paper", "ci"}));
  app->add_option("--k", c.k, "community count or 'auto'");
  app->add_option("--k-max", c.k_max, "model-selection ceiling")->check(CLI::PositiveNumber);
}

void add_graph(CLI::App* app, GraphArgs& g) {
  app->add_option("graph", g.path, "edge-list file");
  app->add_option("--format", g.format, "plain, konect or pajek (default: pajek for .net, else plain)")->check(CLI::IsMember({"plain", "konect", "pajek"}));
  app->add_flag("--numeric-ids", g.numeric_ids, "treat ids as 1-based matrix positions");
  app->add_option("--nodes", g.node_file, "node label file fixing node order");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-membership community detection for weighted networks"};
  app.require_subcommand(1);

  Common sim_c, det_c, scan_c, data_c, gen_c;
  GraphArgs det_g, scan_g;
  std::string design;
  std::optional<mmdf::Index> reps;
  unsigned threads = 0;
  bool stop_early = false;
  std::string data_dir = "data";
  std::vector<std::string> only;

  auto* sim = app.add_subcommand("simulate", "Monte Carlo sweep over a generator parameter");
  add_common(sim, sim_c);
  sim->add_option("--design", design, "named design")->check(CLI::IsMember(mmdf::design_names()));
  sim->add_option("--replications", reps, "replicates per sweep value")->check(CLI::PositiveNumber);
  sim->add_option("--threads", threads, "worker threads (0: all cores)");

  auto* det = app.add_subcommand("detect", "Estimate mixed memberships of one graph");
  add_common(det, det_c);
  add_graph(det, det_g);

  auto* scan = app.add_subcommand("scan-k", "Modularity curve over k = 1..k_max");
  add_common(scan, scan_c);
  add_graph(scan, scan_g);
  scan->add_flag("--stop-early", stop_early, "stop once modularity stops increasing");

  auto* data = app.add_subcommand("datasets", "Run the real-network table");
  add_common(data, data_c);
  data->add_option("--data-dir", data_dir, "directory holding the networks");
  data->add_option("--only", only, "dataset names");

  auto* gen = app.add_subcommand("generate", "Sample one network from a generator spec");
  add_common(gen, gen_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*sim) return run_simulate(sim_c, design, reps, threads);
    if (*det) return run_detect(det_c, det_g);
    if (*scan) return run_scan(scan_c, scan_g, stop_early);
    if (*data) return run_datasets(data_c, data_dir, only);
    if (*gen) return run_generate(gen_c);
  } catch (const mmdf::EstimationError& e) {
    std::cerr << "estimation failed: " << e.what() << '\n';
    return kEstimation;
  } catch (const mmdf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const mmdf::DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfig;
  } catch (const mmdf::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const mmdf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kIo;
  } catch (const mmdf::ValueError& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
