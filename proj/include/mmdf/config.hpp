#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "mmdf/experiment.hpp"

namespace mmdf {

using Json = nlohmann::ordered_json;

inline std::string mode_name(Mode m) {
  switch (m) {
    case Mode::simulate: return "simulate";
    case Mode::detect: return "detect";
    case Mode::scan_k: return "scan-k";
    case Mode::dataset_suite: return "dataset-suite";
  }
  return "simulate";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "simulate") return Mode::simulate;
  if (s == "detect") return Mode::detect;
  if (s == "scan-k") return Mode::scan_k;
  if (s == "dataset-suite") return Mode::dataset_suite;
  throw ConfigError("unknown mode '" + s + "'");
}

inline std::string profile_name(Profile p) { return p == Profile::paper ? "paper" : "ci"; }

inline Profile parse_profile(const std::string& s) {
  if (s == "paper") return Profile::paper;
  if (s == "ci") return Profile::ci;
  throw ConfigError("unknown profile '" + s + "' (expected paper or ci)");
}

namespace detail {

inline Matrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + " must be a non-empty array of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j.front().size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw ConfigError(std::string(what) + " rows differ in length");
    for (Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

inline Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    out.push_back(std::move(row));
  }
  return out;
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->template get<T>();
}

}  // namespace detail

inline MembershipDesign membership_from_json(const Json& j, Index n, Index k) {
  MembershipDesign d;
  d.n = n;
  d.k = k;
  if (j.contains("n0")) {
    return three_community_design(n, j.at("n0").get<Index>());
  }
  d.pure_per_community = j.at("pure_per_community").get<Index>();
  for (const Json& block : detail::get_or(j, "mixed", Json::array())) {
    const Json& pmf = block.at("pmf");
    MixedRows rows;
    rows.pmf.resize(static_cast<Index>(pmf.size()));
    for (std::size_t c = 0; c < pmf.size(); ++c) rows.pmf(static_cast<Index>(c)) = pmf[c].get<double>();
    rows.count = block.at("count").get<Index>();
    d.mixed.push_back(std::move(rows));
  }
  return d;
}

inline Json membership_to_json(const MembershipDesign& d) {
  Json mixed = Json::array();
  for (const auto& m : d.mixed) {
    Json pmf = Json::array();
    for (Index c = 0; c < m.pmf.size(); ++c) pmf.push_back(m.pmf(c));
    mixed.push_back({{"pmf", pmf}, {"count", m.count}});
  }
  return {{"pure_per_community", d.pure_per_community}, {"mixed", mixed}};
}

inline GeneratorDesign generator_from_json(const Json& j) {
  GeneratorDesign g;
  const Index n = j.at("n").get<Index>();
  const Index k = j.at("k").get<Index>();
  g.membership = membership_from_json(j.at("membership"), n, k);
  g.connectivity = detail::matrix_from_json(j.at("P"), "P");
  const double variance = j.contains("family_params") ? detail::get_or(j.at("family_params"), "variance", 2.0) : 2.0;
  try {
    g.distribution = EdgeDistribution::parse(j.at("family").get<std::string>(), variance);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  g.rho = detail::get_or(j, "rho", 1.0);
  if (j.contains("p") && !j.at("p").is_null()) g.sparsity = j.at("p").get<double>();
  return g;
}

inline Json generator_to_json(const GeneratorDesign& g) {
  Json j;
  j["n"] = g.membership.n;
  j["k"] = g.membership.k;
  j["membership"] = membership_to_json(g.membership);
  j["P"] = detail::matrix_to_json(g.connectivity);
  j["rho"] = g.rho;
  j["family"] = std::string(g.distribution.name());
  if (g.distribution.family == Family::normal) j["family_params"] = {{"variance", g.distribution.variance}};
  j["p"] = g.sparsity ? Json(*g.sparsity) : Json(nullptr);
  return j;
}

/// A standalone generator spec for one network; validated on return.
inline GeneratorSpec generator_spec_from_json(const Json& j) {
  const GeneratorDesign g = generator_from_json(j);
  try {
    GeneratorSpec spec;
    spec.memberships = build_membership(g.membership);
    spec.design = g.membership;
    spec.connectivity = check_connectivity(g.connectivity, g.distribution);
    spec.rho = g.rho;
    spec.distribution = g.distribution;
    spec.sparsity = g.sparsity;
    spec.seed = detail::get_or<std::uint64_t>(j, "seed", 1);
    (void)population_adjacency(spec);
    return spec;
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
}

/// Reads an experiment config. A "design" key starts from one of the named
/// designs; any other key present overrides it.
inline ExperimentConfig config_from_json(const Json& j) {
  try {
    ExperimentConfig c;
    const Profile profile = parse_profile(detail::get_or<std::string>(j, "profile", "ci"));
    if (j.contains("design")) {
      c = named_design(j.at("design").get<std::string>(), profile);
    } else {
      c.profile = profile;
      c.replications = default_replications(profile);
    }
    c.profile = profile;
    c.mode = parse_mode(detail::get_or<std::string>(j, "mode", mode_name(c.mode)));
    c.name = detail::get_or<std::string>(j, "name", c.name);
    if (j.contains("generator")) c.generator = generator_from_json(j.at("generator"));
    if (j.contains("sweep")) {
      const Json& s = j.at("sweep");
      c.sweep.parameter = detail::get_or<std::string>(s, "parameter", "rho");
      c.sweep.values = s.at("values").get<std::vector<double>>();
    }
    if (j.contains("replications")) {
      const auto r = j.at("replications").get<long long>();
      if (r < 1) throw ConfigError("replications must be at least 1");
      c.replications = static_cast<Index>(r);
    }
    if (j.contains("estimator_k")) {
      const Json& k = j.at("estimator_k");
      if (k.is_string()) {
        if (k.get<std::string>() != "auto") throw ConfigError("estimator_k must be a count or \"auto\"");
        c.estimator_k.reset();
      } else {
        c.estimator_k = k.get<Index>();
      }
    }
    c.k_max = detail::get_or<Index>(j, "k_max", c.k_max);
    c.seed = detail::get_or<std::uint64_t>(j, "seed", c.seed);
    c.threads = detail::get_or<unsigned>(j, "threads", c.threads);
    c.graph = detail::get_or<std::string>(j, "graph", c.graph.string());
    c.output = detail::get_or<std::string>(j, "output", c.output.string());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

inline Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["mode"] = mode_name(c.mode);
  if (!c.name.empty()) j["name"] = c.name;
  j["profile"] = profile_name(c.profile);
  if (c.mode == Mode::simulate) {
    j["generator"] = generator_to_json(c.generator);
    j["sweep"] = {{"parameter", c.sweep.parameter}, {"values", c.sweep.values}};
  }
  j["replications"] = c.replications;
  j["estimator_k"] = c.estimator_k ? Json(*c.estimator_k) : Json("auto");
  j["k_max"] = c.k_max;
  j["seed"] = c.seed;
  if (!c.graph.empty()) j["graph"] = c.graph.generic_string();
  if (!c.output.empty()) j["output"] = c.output.generic_string();
  return j;
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline ExperimentConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json_file(path)); }

}  // namespace mmdf
