#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cubhom {

using Vertex = std::uint32_t;

/// Raised by load_graph; carries the 1-based line number of the offending line.
class GraphFormatError : public std::runtime_error {
 public:
  GraphFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/**
 * Finite simple undirected graph on the dense vertex set 0..n-1.
 *
 * Besides the edge list, each vertex keeps a bitset of its closed
 * neighbourhood (itself plus its neighbours).  The cube enumerator intersects
 * these bitsets to find every admissible value for the next Hamming-cube
 * vertex, so they are built once up front.  Immutable after construction.
 */
class Graph {
 public:
  Graph() = default;

  explicit Graph(std::size_t vertex_count)
      : vertex_count_(vertex_count),
        words_((vertex_count + 63) / 64),
        neighbors_(vertex_count),
        closed_(vertex_count * words_, 0) {
    for (std::size_t v = 0; v < vertex_count_; ++v) set_bit(v, v);
  }

  /// Throws std::invalid_argument on self-loops, duplicates or out-of-range endpoints.
  static Graph from_edges(std::size_t vertex_count,
                          std::span<const std::pair<Vertex, Vertex>> edges) {
    Graph g(vertex_count);
    for (auto [u, v] : edges) {
      if (auto problem = g.check_new_edge(u, v); !problem.empty())
        throw std::invalid_argument(problem);
      g.insert_edge(u, v);
    }
    g.finish();
    return g;
  }

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Edges as (u, v) with u < v, sorted lexicographically.
  const std::vector<std::pair<Vertex, Vertex>>& edges() const noexcept { return edges_; }

  const std::vector<Vertex>& neighbors(Vertex v) const {
    check_vertex(v);
    return neighbors_[v];
  }

  /// The reflexive adjacency test: u == v or {u, v} is an edge.
  bool equal_or_adjacent(Vertex u, Vertex v) const {
    check_vertex(u);
    check_vertex(v);
    return test_bit(u, v);
  }

  /// Unchecked variant for hot loops.
  bool equal_or_adjacent_unchecked(Vertex u, Vertex v) const noexcept { return test_bit(u, v); }

  /// Closed neighbourhood of v as a bitset of words_per_set() 64-bit words.
  std::span<const std::uint64_t> closed_neighborhood(Vertex v) const noexcept {
    return {closed_.data() + static_cast<std::size_t>(v) * words_, words_};
  }
  std::size_t words_per_set() const noexcept { return words_; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
  }

 private:
  friend Graph load_graph(std::string_view);

  std::string check_new_edge(Vertex u, Vertex v) const {
    if (u >= vertex_count_ || v >= vertex_count_)
      return "vertex index out of range in edge {" + std::to_string(u) + "," + std::to_string(v) +
             "} (vertex count " + std::to_string(vertex_count_) + ")";
    if (u == v) return "self-loop at vertex " + std::to_string(u);
    if (test_bit(u, v))
      return "duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "}";
    return {};
  }

  void insert_edge(Vertex u, Vertex v) {
    if (u > v) std::swap(u, v);
    edges_.emplace_back(u, v);
    neighbors_[u].push_back(v);
    neighbors_[v].push_back(u);
    set_bit(u, v);
    set_bit(v, u);
  }

  void finish() {
    std::sort(edges_.begin(), edges_.end());
    for (auto& n : neighbors_) std::sort(n.begin(), n.end());
  }

  void check_vertex(Vertex v) const {
    if (v >= vertex_count_)
      throw std::out_of_range("vertex " + std::to_string(v) + " out of range (vertex count " +
                              std::to_string(vertex_count_) + ")");
  }

  void set_bit(std::size_t row, std::size_t col) {
    closed_[row * words_ + col / 64] |= std::uint64_t{1} << (col % 64);
  }
  bool test_bit(std::size_t row, std::size_t col) const noexcept {
    return (closed_[row * words_ + col / 64] >> (col % 64)) & 1U;
  }

  std::size_t vertex_count_ = 0;
  std::size_t words_ = 0;
  std::vector<std::pair<Vertex, Vertex>> edges_;
  std::vector<std::vector<Vertex>> neighbors_;
  std::vector<std::uint64_t> closed_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_index(std::string_view token, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

}  // namespace detail

/**
 * Parses the plain-text graph format: the first non-comment line is the
 * vertex count, every further non-comment line is an edge "u v".  Lines whose
 * first non-blank character is '#' are comments; blank lines are ignored.
 */
inline Graph load_graph(std::string_view text) {
  Graph g;
  bool have_count = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = detail::trim(text.substr(pos, nl - pos));
    ++line_no;
    pos = nl + 1;
    if (line.empty() || line.front() == '#') continue;

    auto tokens = detail::split_ws(line);
    if (!have_count) {
      std::uint64_t n = 0;
      if (tokens.size() != 1 || !detail::parse_index(tokens[0], n))
        throw GraphFormatError(line_no, "expected a single vertex count, got '" +
                                            std::string(line) + "'");
      if (n > (std::uint64_t{1} << 24))
        throw GraphFormatError(line_no, "vertex count " + std::to_string(n) + " too large");
      g = Graph(static_cast<std::size_t>(n));
      have_count = true;
      continue;
    }
    std::uint64_t u = 0, v = 0;
    if (tokens.size() != 2 || !detail::parse_index(tokens[0], u) ||
        !detail::parse_index(tokens[1], v))
      throw GraphFormatError(line_no, "expected an edge 'u v', got '" + std::string(line) + "'");
    if (u >= g.vertex_count() || v >= g.vertex_count())
      throw GraphFormatError(line_no, "vertex index out of range in edge {" + std::to_string(u) +
                                          "," + std::to_string(v) + "} (vertex count " +
                                          std::to_string(g.vertex_count()) + ")");
    auto problem = g.check_new_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
    if (!problem.empty()) throw GraphFormatError(line_no, problem);
    g.insert_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (!have_count) throw GraphFormatError(line_no, "missing vertex count");
  g.finish();
  return g;
}

/// Inverse of load_graph (no comments emitted).
inline std::string serialize_graph(const Graph& g) {
  std::ostringstream out;
  out << g.vertex_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

/**
 * Standard graph families on the canonical labelling:
 *   cycle:k      k >= 3, edges {i, i+1 mod k}
 *   path:k       k >= 1 vertices, edges {i, i+1}
 *   complete:k   k >= 1
 *   hypercube:k  1 <= k <= 16, vertices are bit strings, edges flip one bit
 */
inline Graph build_family(std::string_view name, long long k) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  auto range_error = [&](const std::string& rule) {
    return std::invalid_argument("graph family '" + std::string(name) + "': k = " +
                                 std::to_string(k) + " out of range (" + rule + ")");
  };
  if (name == "cycle") {
    if (k < 3 || k > (1LL << 24)) throw range_error("requires k >= 3");
    for (long long i = 0; i < k; ++i)
      edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % k));
    return Graph::from_edges(static_cast<std::size_t>(k), edges);
  }
  if (name == "path") {
    if (k < 1 || k > (1LL << 24)) throw range_error("requires k >= 1");
    for (long long i = 0; i + 1 < k; ++i)
      edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
    return Graph::from_edges(static_cast<std::size_t>(k), edges);
  }
  if (name == "complete") {
    if (k < 1 || k > 4096) throw range_error("requires 1 <= k <= 4096");
    for (long long i = 0; i < k; ++i)
      for (long long j = i + 1; j < k; ++j)
        edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
    return Graph::from_edges(static_cast<std::size_t>(k), edges);
  }
  if (name == "hypercube") {
    if (k < 1 || k > 16) throw range_error("requires 1 <= k <= 16");
    const Vertex n = Vertex{1} << k;
    for (Vertex a = 0; a < n; ++a)
      for (int i = 0; i < k; ++i)
        if (Vertex b = a ^ (Vertex{1} << i); a < b) edges.emplace_back(a, b);
    return Graph::from_edges(n, edges);
  }
  throw std::invalid_argument("unknown graph family '" + std::string(name) +
                              "' (expected cycle, path, complete or hypercube)");
}

}  // namespace cubhom
