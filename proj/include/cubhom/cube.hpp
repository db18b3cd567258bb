#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "cubhom/graph.hpp"

namespace cubhom {

/// Largest cube dimension any operator will produce.
inline constexpr int kMaxCubeDim = 16;

enum class Sign : std::int8_t { minus = -1, plus = 1 };

constexpr int coefficient(Sign s) noexcept { return static_cast<int>(s); }
constexpr Sign opposite(Sign s) noexcept { return s == Sign::plus ? Sign::minus : Sign::plus; }
constexpr char symbol(Sign s) noexcept { return s == Sign::plus ? '+' : '-'; }
inline constexpr std::array<Sign, 2> kSigns{Sign::minus, Sign::plus};

/**
 * A singular n-cube of a graph: a map from the Hamming cube Q_n to the
 * vertex set, stored as 2^n values.  The entry at index b is the image of
 * (a_1, ..., a_n) where a_i is bit (i-1) of b, so coordinate 1 is the least
 * significant bit.
 *
 * Cubes compare by dimension first and then lexicographically by values;
 * this is the canonical basis ordering everywhere downstream.
 */
class SingularCube {
 public:
  using Storage = boost::container::small_vector<Vertex, 16>;

  SingularCube() : dim_(0), values_(1, 0) {}

  SingularCube(int dim, std::span<const Vertex> values) : dim_(dim) {
    if (dim < 0 || dim > kMaxCubeDim)
      throw std::invalid_argument("cube dimension " + std::to_string(dim) + " out of range");
    if (values.size() != (std::size_t{1} << dim))
      throw std::invalid_argument("a " + std::to_string(dim) + "-cube needs " +
                                  std::to_string(std::size_t{1} << dim) + " values, got " +
                                  std::to_string(values.size()));
    values_.assign(values.begin(), values.end());
  }

  SingularCube(int dim, std::initializer_list<Vertex> values)
      : SingularCube(dim, std::span<const Vertex>(values.begin(), values.size())) {}

  static SingularCube vertex(Vertex v) { return SingularCube(0, {v}); }

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const Vertex> values() const noexcept { return {values_.data(), values_.size()}; }
  Vertex operator[](std::size_t b) const noexcept { return values_[b]; }

  friend bool operator==(const SingularCube& a, const SingularCube& b) noexcept {
    return a.dim_ == b.dim_ && std::equal(a.values_.begin(), a.values_.end(), b.values_.begin(),
                                          b.values_.end());
  }
  friend std::strong_ordering operator<=>(const SingularCube& a, const SingularCube& b) noexcept {
    if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.values_.begin(), a.values_.end(),
                                                  b.values_.begin(), b.values_.end());
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(dim_);
    for (Vertex v : values_) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }

 private:
  friend struct CubeBuilder;
  int dim_;
  Storage values_;
};

struct CubeHash {
  std::size_t operator()(const SingularCube& c) const noexcept { return c.hash(); }
};

/// Builds a cube in place from an operator kernel without an intermediate copy.
struct CubeBuilder {
  template <class Fill>
  static SingularCube make(int dim, Fill&& fill) {
    SingularCube c;
    c.dim_ = dim;
    c.values_.resize(std::size_t{1} << dim);
    fill(std::span<Vertex>(c.values_.data(), c.values_.size()));
    return c;
  }
};

// ---------------------------------------------------------------------------
// Operator kernels.  Indices are 1-based as in the usual cubical notation;
// `in` has 2^n entries.  No range checking here.

namespace kernel {

constexpr std::size_t low_mask(int bits) noexcept { return (std::size_t{1} << bits) - 1; }

/// f_i^a: fix coordinate i to 1 (plus) or 0 (minus).  Writes 2^(n-1) values.
inline void face(std::span<const Vertex> in, int n, int i, Sign a, std::span<Vertex> out) noexcept {
  const std::size_t bit = a == Sign::plus ? 1 : 0;
  const std::size_t count = std::size_t{1} << (n - 1);
  const std::size_t mask = low_mask(i - 1);
  for (std::size_t b = 0; b < count; ++b)
    out[b] = in[(b & mask) | (bit << (i - 1)) | ((b >> (i - 1)) << i)];
}

/// e_i: ignore coordinate i of the (n+1)-cube.  Writes 2^(n+1) values.
inline void degeneracy(std::span<const Vertex> in, int n, int i, std::span<Vertex> out) noexcept {
  const std::size_t count = std::size_t{1} << (n + 1);
  const std::size_t mask = low_mask(i - 1);
  for (std::size_t b = 0; b < count; ++b) out[b] = in[(b & mask) | ((b >> i) << (i - 1))];
}

/// G_i^s: substitute min(a_i, a_{i+1}) (plus) or max (minus) for coordinate i.
inline void connection(std::span<const Vertex> in, int n, int i, Sign s,
                       std::span<Vertex> out) noexcept {
  const std::size_t count = std::size_t{1} << (n + 1);
  const std::size_t mask = low_mask(i - 1);
  for (std::size_t b = 0; b < count; ++b) {
    const std::size_t x = (b >> (i - 1)) & 1U;
    const std::size_t y = (b >> i) & 1U;
    const std::size_t m = s == Sign::plus ? (x & y) : (x | y);
    out[b] = in[(b & mask) | (m << (i - 1)) | ((b >> (i + 1)) << i)];
  }
}

}  // namespace kernel

/**
 * The face, degeneracy and connection operators of the cubical set of a
 * graph.  Verifiers and chain-level code are templates over an operator
 * policy with this interface, which lets tests substitute corrupted doubles.
 */
struct StandardOperators {
  void face_into(std::span<const Vertex> in, int n, int i, Sign a, std::span<Vertex> out) const {
    kernel::face(in, n, i, a, out);
  }
  void degeneracy_into(std::span<const Vertex> in, int n, int i, std::span<Vertex> out) const {
    kernel::degeneracy(in, n, i, out);
  }
  void connection_into(std::span<const Vertex> in, int n, int i, Sign s,
                       std::span<Vertex> out) const {
    kernel::connection(in, n, i, s, out);
  }
};

template <class Ops>
SingularCube apply_face(const Ops& ops, const SingularCube& c, int i, Sign a) {
  return CubeBuilder::make(c.dim() - 1,
                           [&](std::span<Vertex> out) { ops.face_into(c.values(), c.dim(), i, a, out); });
}

template <class Ops>
SingularCube apply_degeneracy(const Ops& ops, const SingularCube& c, int i) {
  return CubeBuilder::make(c.dim() + 1,
                           [&](std::span<Vertex> out) { ops.degeneracy_into(c.values(), c.dim(), i, out); });
}

template <class Ops>
SingularCube apply_connection(const Ops& ops, const SingularCube& c, int i, Sign s) {
  return CubeBuilder::make(c.dim() + 1, [&](std::span<Vertex> out) {
    ops.connection_into(c.values(), c.dim(), i, s, out);
  });
}

namespace detail {
inline void require_index(bool ok, const char* op, int i, int n) {
  if (!ok)
    throw std::out_of_range(std::string(op) + ": index " + std::to_string(i) +
                            " out of range for a " + std::to_string(n) + "-cube");
}
}  // namespace detail

/// f_i^a, 1 <= i <= dim.
inline SingularCube face(const SingularCube& c, int i, Sign a) {
  detail::require_index(c.dim() >= 1 && i >= 1 && i <= c.dim(), "face", i, c.dim());
  return apply_face(StandardOperators{}, c, i, a);
}

/// e_i, 1 <= i <= dim + 1.
inline SingularCube degeneracy(const SingularCube& c, int i) {
  detail::require_index(i >= 1 && i <= c.dim() + 1 && c.dim() < kMaxCubeDim, "degeneracy", i,
                        c.dim());
  return apply_degeneracy(StandardOperators{}, c, i);
}

/// G_i^s, 1 <= i <= dim.  Connections are not defined on 0-cubes.
inline SingularCube connection(const SingularCube& c, int i, Sign s) {
  detail::require_index(c.dim() >= 1 && i >= 1 && i <= c.dim() && c.dim() < kMaxCubeDim,
                        "connection", i, c.dim());
  return apply_connection(StandardOperators{}, c, i, s);
}

/// Hom condition: every Q_n edge maps to equal-or-adjacent vertices.
inline bool is_valid_cube(const Graph& g, const SingularCube& c) {
  for (Vertex v : c.values())
    if (v >= g.vertex_count()) return false;
  for (std::size_t b = 0; b < c.size(); ++b)
    for (int i = 0; i < c.dim(); ++i)
      if (((b >> i) & 1U) && !g.equal_or_adjacent_unchecked(c[b], c[b ^ (std::size_t{1} << i)]))
        return false;
  return true;
}

// ---------------------------------------------------------------------------
// Classification

/// Smallest i with c = e_i f_i^+ c, if any.
template <class Ops = StandardOperators>
std::optional<int> degenerate_index(const SingularCube& c, const Ops& ops = {}) {
  for (int i = 1; i <= c.dim(); ++i)
    if (apply_degeneracy(ops, apply_face(ops, c, i, Sign::plus), i) == c) return i;
  return std::nullopt;
}

template <class Ops = StandardOperators>
bool is_degenerate(const SingularCube& c, const Ops& ops = {}) {
  return degenerate_index(c, ops).has_value();
}

struct ConnectionDecomposition {
  int index;            // t
  Sign sign;            // beta
  SingularCube source;  // tau, with theta = G_t^beta(tau)

  friend bool operator==(const ConnectionDecomposition&, const ConnectionDecomposition&) = default;
};

/**
 * Writes theta as G_t^beta(tau) with the smallest admissible t, preferring
 * beta = minus on a tie.  Since f_t^beta G_t^beta = id, the only candidate
 * source for (t, beta) is f_t^beta(theta).  Cubes of dimension < 2 are never
 * connections.
 */
template <class Ops = StandardOperators>
std::optional<ConnectionDecomposition> connection_decomposition(const SingularCube& theta,
                                                                const Ops& ops = {}) {
  if (theta.dim() < 2) return std::nullopt;
  for (int t = 1; t < theta.dim(); ++t)
    for (Sign beta : kSigns) {
      auto tau = apply_face(ops, theta, t, beta);
      if (apply_connection(ops, tau, t, beta) == theta)
        return ConnectionDecomposition{t, beta, std::move(tau)};
    }
  return std::nullopt;
}

struct CubeClass {
  bool degenerate = false;
  bool connection = false;
  std::optional<ConnectionDecomposition> decomposition;

  /// Neither degenerate nor a connection.
  bool ndc() const noexcept { return !degenerate && !connection; }
};

template <class Ops = StandardOperators>
CubeClass classify(const SingularCube& c, const Ops& ops = {}) {
  CubeClass k;
  k.degenerate = is_degenerate(c, ops);
  k.decomposition = connection_decomposition(c, ops);
  k.connection = k.decomposition.has_value();
  return k;
}

// ---------------------------------------------------------------------------
// Maximal face that is neither degenerate nor a connection

struct OperatorStep {
  enum class Kind : std::uint8_t { degeneracy, connection };
  Kind kind;
  int index;
  Sign sign = Sign::plus;  // unused for degeneracies

  friend bool operator==(const OperatorStep&, const OperatorStep&) = default;
};

inline std::string to_string(const OperatorStep& s) {
  if (s.kind == OperatorStep::Kind::degeneracy) return "e" + std::to_string(s.index);
  return std::string("G") + std::to_string(s.index) + symbol(s.sign);
}

struct MaximalFace {
  SingularCube face;
  /// g_1, ..., g_k with tau = g_k(... g_1(face)).
  std::vector<OperatorStep> steps;
};

/// Applies g_1 first, g_k last.
inline SingularCube replay(const SingularCube& start, std::span<const OperatorStep> steps) {
  SingularCube c = start;
  for (const auto& s : steps)
    c = s.kind == OperatorStep::Kind::degeneracy ? degeneracy(c, s.index)
                                                 : connection(c, s.index, s.sign);
  return c;
}

/**
 * Strips degeneracies (smallest index first) and minimal-index connections
 * until a cube that is neither remains.
 */
inline MaximalFace maximal_ndc_face(const SingularCube& tau) {
  SingularCube cur = tau;
  std::vector<OperatorStep> stripped;
  for (;;) {
    if (auto i = degenerate_index(cur)) {
      stripped.push_back({OperatorStep::Kind::degeneracy, *i});
      cur = face(cur, *i, Sign::plus);
      continue;
    }
    if (auto d = connection_decomposition(cur)) {
      stripped.push_back({OperatorStep::Kind::connection, d->index, d->sign});
      cur = std::move(d->source);
      continue;
    }
    break;
  }
  std::reverse(stripped.begin(), stripped.end());
  return {std::move(cur), std::move(stripped)};
}

// ---------------------------------------------------------------------------
// Text form "n:[v_0,v_1,...]"

inline std::string to_string(const SingularCube& c) {
  std::string s = std::to_string(c.dim()) + ":[";
  for (std::size_t b = 0; b < c.size(); ++b) {
    if (b) s += ',';
    s += std::to_string(c[b]);
  }
  s += ']';
  return s;
}

inline SingularCube parse_cube(std::string_view text) {
  auto fail = [&] { return std::invalid_argument("malformed cube '" + std::string(text) + "'"); };
  auto colon = text.find(':');
  if (colon == std::string_view::npos || text.size() < colon + 3 || text[colon + 1] != '[' ||
      text.back() != ']')
    throw fail();
  std::uint64_t dim = 0;
  if (!detail::parse_index(text.substr(0, colon), dim) || dim > kMaxCubeDim) throw fail();
  std::vector<Vertex> values;
  auto body = text.substr(colon + 2, text.size() - colon - 3);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    auto comma = body.find(',', pos);
    if (comma == std::string_view::npos) comma = body.size();
    std::uint64_t v = 0;
    if (!detail::parse_index(detail::trim(body.substr(pos, comma - pos)), v) || v > UINT32_MAX)
      throw fail();
    values.push_back(static_cast<Vertex>(v));
    pos = comma + 1;
  }
  return SingularCube(static_cast<int>(dim), values);
}

}  // namespace cubhom

template <>
struct std::hash<cubhom::SingularCube> {
  std::size_t operator()(const cubhom::SingularCube& c) const noexcept { return c.hash(); }
};
