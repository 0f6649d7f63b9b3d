#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mmdf/error.hpp"
#include "mmdf/membership.hpp"

namespace mmdf {

// =============================================================================
// WeightedGraph
// =============================================================================

/// Undirected weighted network stored as a dense symmetric adjacency matrix.
/// Weights may take any finite sign; the diagonal is always zero.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  explicit WeightedGraph(Matrix weights, std::vector<std::string> labels = {})
      : weights_(std::move(weights)), labels_(std::move(labels)) {
    if (weights_.rows() != weights_.cols()) throw ContractError("adjacency matrix must be square");
    if (!labels_.empty() && static_cast<Index>(labels_.size()) != weights_.rows()) {
      throw ContractError("node label count does not match node count");
    }
    if (!weights_.allFinite()) throw ValueError("adjacency matrix has non-finite entries");
    for (Index j = 0; j < weights_.cols(); ++j) {
      if (weights_(j, j) != 0.0) throw ContractError("adjacency diagonal must be zero");
      for (Index i = j + 1; i < weights_.rows(); ++i) {
        if (weights_(i, j) != weights_(j, i)) throw ContractError("adjacency matrix must be symmetric");
      }
    }
  }

  Index size() const noexcept { return weights_.rows(); }
  const Matrix& weights() const noexcept { return weights_; }
  double weight(Index i, Index j) const { return weights_(i, j); }
  const std::vector<std::string>& node_labels() const noexcept { return labels_; }

  /// Number of unordered node pairs with nonzero weight.
  std::size_t edge_count() const {
    std::size_t count = 0;
    for (Index j = 0; j < size(); ++j)
      for (Index i = j + 1; i < size(); ++i)
        if (weights_(i, j) != 0.0) ++count;
    return count;
  }

  double max_weight() const { return size() == 0 ? 0.0 : weights_.maxCoeff(); }
  double min_weight() const { return size() == 0 ? 0.0 : weights_.minCoeff(); }

  std::vector<Index> isolated_nodes() const {
    std::vector<Index> out;
    for (Index i = 0; i < size(); ++i)
      if ((weights_.col(i).array() == 0.0).all()) out.push_back(i);
    return out;
  }

  /// Relabel nodes: node i of the result is node order[i] of this graph.
  WeightedGraph permuted(std::span<const Index> order) const {
    if (static_cast<Index>(order.size()) != size()) throw ContractError("permutation has wrong length");
    Matrix w(size(), size());
    for (Index a = 0; a < size(); ++a)
      for (Index b = 0; b < size(); ++b) w(a, b) = weights_(order[a], order[b]);
    std::vector<std::string> labels;
    if (!labels_.empty())
      for (Index i : order) labels.push_back(labels_[static_cast<std::size_t>(i)]);
    return WeightedGraph(std::move(w), std::move(labels));
  }

  WeightedGraph scaled(double factor) const { return WeightedGraph(weights_ * factor, labels_); }

 private:
  Matrix weights_;
  std::vector<std::string> labels_;
};

/// Positive and negative parts of a signed adjacency matrix with their
/// degree vectors and total masses (half the degree sums).
struct SignSplit {
  Matrix pos;
  Matrix neg;
  Vector pos_degrees;
  Vector neg_degrees;
  double pos_mass = 0.0;
  double neg_mass = 0.0;
};

inline SignSplit sign_split(const WeightedGraph& g) {
  SignSplit s;
  s.pos = g.weights().cwiseMax(0.0);
  s.neg = (-g.weights()).cwiseMax(0.0);
  const Index n = g.size();
  s.pos_degrees = Vector::Zero(n);
  s.neg_degrees = Vector::Zero(n);
  // Degrees use the column-dot kernel the modularity code applies to X M,
  // and the masses are sequential sums of the degrees; both facts keep the
  // single-community modularity at exactly zero.
  const Vector ones = Vector::Ones(n);
  for (Index i = 0; i < n; ++i) {
    s.pos_degrees(i) = s.pos.col(i).dot(ones);
    s.neg_degrees(i) = s.neg.col(i).dot(ones);
  }
  double tp = 0.0, tn = 0.0;
  for (Index i = 0; i < n; ++i) {
    tp += s.pos_degrees(i);
    tn += s.neg_degrees(i);
  }
  s.pos_mass = tp / 2.0;
  s.neg_mass = tn / 2.0;
  return s;
}

/// Known community structure for a graph, if any. Labels are 0-based.
struct GroundTruth {
  std::optional<std::vector<int>> labels;
  std::optional<MembershipMatrix> memberships;
};

// =============================================================================
// Edge-list ingestion
// =============================================================================

enum class EdgeListFormat {
  plain,   ///< `src dst [weight]`, whitespace or comma separated, `#` comments
  konect,  ///< KONECT `out.*` files: `%` comments, 1-based integer ids
  pajek,   ///< Pajek `.net`: `*Vertices`, `*Edges` or `*Matrix` sections
};

enum class NodeOrder {
  first_appearance,  ///< nodes indexed in the order their ids first appear
  numeric,           ///< ids are 1-based integers and index the matrix directly
};

struct EdgeListOptions {
  EdgeListFormat format = EdgeListFormat::plain;
  NodeOrder order = NodeOrder::first_appearance;
  /// One label per line. When given, it fixes node count and order; ids in the
  /// edge list are matched by label, falling back to 1-based position.
  std::optional<std::filesystem::path> node_file;
};

struct LoadedGraph {
  WeightedGraph graph;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_records = 0;
  std::vector<Index> isolated;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line, bool allow_comma) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [&](char c) { return c == ' ' || c == '\t' || c == '\r' || (allow_comma && c == ','); };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    if (i >= line.size()) break;
    if (line[i] == '"') {
      const auto close = line.find('"', i + 1);
      const auto end = close == std::string_view::npos ? line.size() : close;
      out.push_back(line.substr(i + 1, end - i - 1));
      i = end + 1;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<long long> parse_integer(std::string_view s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// Accumulates (i, j, w) records into a symmetric matrix.
class EdgeAccumulator {
 public:
  EdgeAccumulator(std::string source, const EdgeListOptions& options, std::vector<std::string> fixed_labels)
      : source_(std::move(source)), options_(options), labels_(std::move(fixed_labels)), fixed_(!labels_.empty()) {
    for (std::size_t i = 0; i < labels_.size(); ++i) by_label_.emplace(labels_[i], static_cast<Index>(i));
  }

  void declare_nodes(Index n) { declared_ = std::max(declared_, n); }

  /// Ids are 1-based matrix positions from here on.
  void use_numeric_ids() {
    if (!fixed_ && labels_.empty()) options_.order = NodeOrder::numeric;
  }

  Index resolve(std::string_view id, std::size_t line) {
    if (fixed_) {
      if (auto it = by_label_.find(std::string(id)); it != by_label_.end()) return it->second;
      if (auto v = parse_integer(id); v && *v >= 1 && *v <= static_cast<long long>(labels_.size())) {
        return static_cast<Index>(*v - 1);
      }
      throw ParseError(source_, line, "unknown node '" + std::string(id) + "'");
    }
    if (options_.order == NodeOrder::numeric) {
      const auto v = parse_integer(id);
      if (!v || *v < 1) throw ParseError(source_, line, "expected a positive integer node id, got '" + std::string(id) + "'");
      max_numeric_ = std::max(max_numeric_, static_cast<Index>(*v));
      return static_cast<Index>(*v - 1);
    }
    auto [it, inserted] = by_label_.emplace(std::string(id), static_cast<Index>(labels_.size()));
    if (inserted) labels_.emplace_back(id);
    return it->second;
  }

  void add(Index i, Index j, double w) {
    if (i == j) {
      ++self_loops_;
      return;
    }
    const auto key = std::minmax(i, j);
    auto [it, inserted] = entries_.try_emplace(key, 0.0);
    if (!inserted) ++duplicates_;
    it->second += w;
  }

  LoadedGraph finish() {
    Index n = 0;
    if (fixed_ || options_.order == NodeOrder::first_appearance) {
      n = static_cast<Index>(labels_.size());
    } else {
      n = std::max(max_numeric_, declared_);
    }
    Matrix w = Matrix::Zero(n, n);
    for (const auto& [key, value] : entries_) {
      w(key.first, key.second) = value;
      w(key.second, key.first) = value;
    }
    std::vector<std::string> labels;
    if (fixed_ || options_.order == NodeOrder::first_appearance) labels = labels_;
    LoadedGraph out{WeightedGraph(std::move(w), std::move(labels)), self_loops_, duplicates_, {}};
    out.isolated = out.graph.isolated_nodes();
    return out;
  }

 private:
  std::string source_;
  EdgeListOptions options_;
  std::vector<std::string> labels_;
  bool fixed_;
  std::unordered_map<std::string, Index> by_label_;
  std::map<std::pair<Index, Index>, double> entries_;
  Index max_numeric_ = 0;
  Index declared_ = 0;
  std::size_t self_loops_ = 0;
  std::size_t duplicates_ = 0;
};

inline double parse_weight(std::string_view token, const std::string& source, std::size_t line) {
  const auto w = parse_double(token);
  if (!w) throw ParseError(source, line, "malformed weight '" + std::string(token) + "'");
  if (!std::isfinite(*w)) throw ValueError(source + ":" + std::to_string(line) + ": non-finite weight");
  return *w;
}

inline bool looks_like_header(const std::vector<std::string_view>& fields) {
  static const char* const kWords[] = {"source", "src", "from", "target", "dst", "to", "weight", "node1", "node2"};
  for (std::size_t k = 0; k < fields.size() && k < 3; ++k) {
    const auto word = lower(fields[k]);
    for (const char* w : kWords)
      if (word == w) return true;
  }
  return fields.size() >= 3 && !parse_double(fields[2]).has_value();
}

inline LoadedGraph parse_plain(std::istream& in, const std::string& source, const EdgeListOptions& options,
                               std::vector<std::string> fixed_labels) {
  const bool konect = options.format == EdgeListFormat::konect;
  EdgeAccumulator acc(source, options, std::move(fixed_labels));
  if (konect) acc.use_numeric_ids();
  std::string raw;
  std::size_t line_no = 0;
  bool first_record = true;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    const char comment = konect ? '%' : '#';
    if (line.front() == comment) {
      auto fields = split_fields(line.substr(1), false);
      if (!konect && fields.size() == 2 && lower(fields[0]) == "nodes") {
        if (auto v = parse_integer(fields[1]); v && *v >= 0) {
          acc.declare_nodes(static_cast<Index>(*v));
          acc.use_numeric_ids();
        }
      } else if (konect && fields.size() >= 2 && fields.size() <= 3) {
        // KONECT size line: "% edges rows [cols]".
        bool numeric = true;
        for (auto f : fields) numeric = numeric && parse_integer(f).has_value();
        if (numeric) acc.declare_nodes(static_cast<Index>(*parse_integer(fields.back())));
      }
      continue;
    }
    if (!konect) {
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    }
    const auto fields = split_fields(line, !konect);
    if (first_record) {
      first_record = false;
      if (!konect && looks_like_header(fields)) continue;
    }
    if (fields.size() < 2 || (!konect && fields.size() > 3)) {
      throw ParseError(source, line_no, "expected 'source target [weight]'");
    }
    const double w = fields.size() >= 3 ? parse_weight(fields[2], source, line_no) : 1.0;
    const Index i = acc.resolve(fields[0], line_no);
    const Index j = acc.resolve(fields[1], line_no);
    acc.add(i, j, w);
  }
  return acc.finish();
}

inline LoadedGraph parse_pajek(std::istream& in, const std::string& source) {
  std::string raw;
  std::size_t line_no = 0;
  enum class Section { none, vertices, edges, matrix } section = Section::none;
  Index n = 0;
  std::vector<std::string> labels;
  std::optional<EdgeAccumulator> acc;
  Matrix dense;
  Index matrix_row = 0;
  std::size_t self_loops = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '%') continue;
    if (line.front() == '*') {
      const auto fields = split_fields(line, false);
      const auto head = lower(fields[0]);
      if (head == "*vertices") {
        if (fields.size() < 2 || !parse_integer(fields[1])) throw ParseError(source, line_no, "*Vertices needs a count");
        n = static_cast<Index>(*parse_integer(fields[1]));
        labels.assign(static_cast<std::size_t>(n), std::string());
        for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = std::to_string(i + 1);
        section = Section::vertices;
      } else if (head == "*edges") {
        EdgeListOptions opts;
        opts.order = NodeOrder::numeric;
        acc.emplace(source, opts, std::vector<std::string>{});
        acc->declare_nodes(n);
        section = Section::edges;
      } else if (head == "*matrix") {
        dense = Matrix::Zero(n, n);
        matrix_row = 0;
        section = Section::matrix;
      } else if (head == "*arcs" || head == "*arcslist") {
        throw ParseError(source, line_no, "directed sections are not supported; symmetrize first");
      } else {
        throw ParseError(source, line_no, "unknown section " + std::string(fields[0]));
      }
      continue;
    }
    const auto fields = split_fields(line, false);
    switch (section) {
      case Section::vertices: {
        const auto id = parse_integer(fields[0]);
        if (!id || *id < 1 || *id > n) throw ParseError(source, line_no, "bad vertex id");
        if (fields.size() >= 2) labels[static_cast<std::size_t>(*id - 1)] = std::string(fields[1]);
        break;
      }
      case Section::edges: {
        if (fields.size() < 2) throw ParseError(source, line_no, "expected 'source target [weight]'");
        const double w = fields.size() >= 3 ? parse_weight(fields[2], source, line_no) : 1.0;
        const Index i = acc->resolve(fields[0], line_no);
        const Index j = acc->resolve(fields[1], line_no);
        if (i >= n || j >= n) throw ParseError(source, line_no, "vertex id exceeds *Vertices count");
        acc->add(i, j, w);
        break;
      }
      case Section::matrix: {
        if (matrix_row >= n || static_cast<Index>(fields.size()) != n) {
          throw ParseError(source, line_no, "matrix row has wrong length or too many rows");
        }
        for (Index j = 0; j < n; ++j) dense(matrix_row, j) = parse_weight(fields[static_cast<std::size_t>(j)], source, line_no);
        ++matrix_row;
        break;
      }
      case Section::none:
        throw ParseError(source, line_no, "data before any section header");
    }
  }
  LoadedGraph out;
  if (section == Section::matrix) {
    if (matrix_row != n) throw ParseError(source, line_no, "matrix has too few rows");
    for (Index i = 0; i < n; ++i) {
      if (dense(i, i) != 0.0) ++self_loops;
      dense(i, i) = 0.0;
    }
    if (!(dense.array() == dense.transpose().array()).all()) throw ContractError(source + ": *Matrix is not symmetric");
    out.graph = WeightedGraph(std::move(dense), labels);
    out.self_loops_dropped = self_loops;
  } else {
    if (!acc) {
      EdgeListOptions opts;
      opts.order = NodeOrder::numeric;
      acc.emplace(source, opts, std::vector<std::string>{});
      acc->declare_nodes(n);
    }
    out = acc->finish();
    out.graph = WeightedGraph(out.graph.weights(), labels);
  }
  out.isolated = out.graph.isolated_nodes();
  return out;
}

}  // namespace detail

inline std::vector<std::string> load_node_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open node file " + path.string());
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = detail::trim(line);
    if (!t.empty()) labels.emplace_back(t);
  }
  return labels;
}

/// Parse an edge list from a stream. `source` names the input in messages.
inline LoadedGraph parse_edge_list(std::istream& in, const std::string& source, const EdgeListOptions& options = {}) {
  if (options.format == EdgeListFormat::pajek) return detail::parse_pajek(in, source);
  std::vector<std::string> fixed;
  if (options.node_file) fixed = load_node_labels(*options.node_file);
  return detail::parse_plain(in, source, options, std::move(fixed));
}

inline LoadedGraph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file " + path.string());
  return parse_edge_list(in, path.string(), options);
}

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Write in the plain dialect with 1-based numeric ids and a `# nodes n`
/// directive, so that loading with NodeOrder::numeric restores the matrix.
inline void write_edge_list(const WeightedGraph& g, std::ostream& out) {
  out << "# nodes " << g.size() << '\n';
  for (Index i = 0; i < g.size(); ++i)
    for (Index j = i + 1; j < g.size(); ++j)
      if (g.weight(i, j) != 0.0) out << (i + 1) << ' ' << (j + 1) << ' ' << format_double(g.weight(i, j)) << '\n';
}

/// Community labels, one 1-based integer per line; returned 0-based.
inline std::vector<int> load_community_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open label file " + path.string());
  std::vector<int> labels;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto t = detail::trim(raw);
    if (t.empty() || t.front() == '#') continue;
    const auto v = detail::parse_integer(t);
    if (!v || *v < 1) throw ParseError(path.string(), line_no, "expected a positive community index");
    labels.push_back(static_cast<int>(*v - 1));
  }
  return labels;
}

}  // namespace mmdf
