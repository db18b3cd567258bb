#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cubhom/cube.hpp"
#include "cubhom/enumerate.hpp"
#include "cubhom/graph.hpp"
#include "cubhom/report.hpp"
#include "cubhom/sparse_matrix.hpp"

namespace cubhom {

/// Which cubes are quotiented away before taking chains.
enum class Normalization {
  degeneracies,                  // basis: non-degenerate cubes
  degeneracies_and_connections,  // basis: cubes neither degenerate nor connections
};

inline std::string_view to_string(Normalization m) {
  return m == Normalization::degeneracies ? "nd" : "quotient";
}

inline Normalization parse_normalization(std::string_view s) {
  if (s == "nd") return Normalization::degeneracies;
  if (s == "quotient") return Normalization::degeneracies_and_connections;
  throw std::invalid_argument("unknown normalization '" + std::string(s) + "' (expected nd or quotient)");
}

struct BuildOptions {
  EnumerationLimits limits;
  unsigned workers = 1;
};

/// Per-dimension cube counts gathered while building a complex.
struct CubeCensus {
  std::size_t total = 0;           // |KG_n|
  std::size_t non_degenerate = 0;  // |K_n^nd|
  std::size_t connections = 0;     // non-degenerate connections, the rank of Con_n
  std::size_t ndc() const noexcept { return non_degenerate - connections; }
};

/**
 * Graded free chain complex over the integers on the cosets of basis cubes.
 * boundaries[n] is the matrix of d_n with rows indexed by bases[n-1] and
 * columns by bases[n]; boundaries[0] is the zero map with no rows.
 */
class ChainComplex {
 public:
  Normalization mode = Normalization::degeneracies;
  int max_dim = 0;
  std::vector<std::vector<SingularCube>> bases;
  std::vector<SparseIntMatrix> boundaries;
  std::vector<CubeCensus> census;
  /// is_connection[n][k]: basis cube k of dimension n is a connection (always false in quotient mode).
  std::vector<std::vector<char>> is_connection;

  std::size_t rank(int n) const { return n < 0 || n > max_dim ? 0 : bases[static_cast<std::size_t>(n)].size(); }

  /// Position of c in its basis; bases are kept in canonical (sorted) order.
  std::optional<std::size_t> index_of(const SingularCube& c) const {
    if (c.dim() < 0 || c.dim() > max_dim) return std::nullopt;
    const auto& b = bases[static_cast<std::size_t>(c.dim())];
    auto it = std::lower_bound(b.begin(), b.end(), c);
    if (it == b.end() || *it != c) return std::nullopt;
    return static_cast<std::size_t>(it - b.begin());
  }
};

namespace detail {

/// Runs body(begin, end) over [0, count) split into contiguous chunks.
template <class Body>
void parallel_chunks(std::size_t count, unsigned workers, Body&& body) {
  if (workers <= 1 || count < 1024) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t b = w * chunk, e = std::min(count, b + chunk);
    if (b < e) pool.emplace_back([&body, b, e] { body(b, e); });
  }
}

/// Boundary column of sigma: sum_i (-1)^i (f_i^- sigma - f_i^+ sigma), faces outside the basis dropped.
inline std::vector<SparseIntMatrix::Cell> boundary_column(const ChainComplex& x, const SingularCube& sigma) {
  std::vector<SparseIntMatrix::Cell> cells;
  const int n = sigma.dim();
  for (int i = 1; i <= n; ++i) {
    const int sign = (i % 2 == 0) ? 1 : -1;
    if (auto k = x.index_of(face(sigma, i, Sign::minus))) cells.emplace_back(*k, Integer(sign));
    if (auto k = x.index_of(face(sigma, i, Sign::plus))) cells.emplace_back(*k, Integer(-sign));
  }
  return cells;
}

}  // namespace detail

/**
 * Enumerates KG_0..KG_d, picks the basis of the requested normalization and
 * assembles every boundary matrix.  Faces that are degenerate (and, in the
 * quotient, connections) are absent from the basis and therefore dropped;
 * coefficients of coinciding faces are summed.
 */
inline ChainComplex build_complex(const Graph& g, int d, Normalization mode, const BuildOptions& options = {}) {
  if (d < 0) throw std::invalid_argument("maximum dimension must be nonnegative");
  ChainComplex x;
  x.mode = mode;
  x.max_dim = d;
  x.bases.resize(d + 1);
  x.census.resize(d + 1);
  x.is_connection.resize(d + 1);

  for (int n = 0; n <= d; ++n) {
    auto cubes = enumerate_cubes(g, n, options.limits, options.workers);
    std::vector<char> degenerate(cubes.size()), conn(cubes.size());
    detail::parallel_chunks(cubes.size(), options.workers, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        degenerate[k] = is_degenerate(cubes[k]);
        conn[k] = !degenerate[k] && connection_decomposition(cubes[k]).has_value();
      }
    });
    auto& c = x.census[n];
    c.total = cubes.size();
    for (std::size_t k = 0; k < cubes.size(); ++k) {
      if (degenerate[k]) continue;
      ++c.non_degenerate;
      if (conn[k]) ++c.connections;
      if (mode == Normalization::degeneracies_and_connections && conn[k]) continue;
      x.bases[n].push_back(std::move(cubes[k]));
      x.is_connection[n].push_back(conn[k]);
    }
    x.bases[n].shrink_to_fit();
  }

  x.boundaries.reserve(d + 1);
  x.boundaries.emplace_back(0, x.rank(0));
  for (int n = 1; n <= d; ++n) {
    const auto& basis = x.bases[n];
    SparseIntMatrix m(x.rank(n - 1), 0);
    // Columns are computed a block at a time to bound the transient memory.
    constexpr std::size_t kBlock = 1 << 16;
    std::vector<std::vector<SparseIntMatrix::Cell>> columns;
    for (std::size_t start = 0; start < basis.size(); start += kBlock) {
      const std::size_t len = std::min(kBlock, basis.size() - start);
      columns.assign(len, {});
      detail::parallel_chunks(len, options.workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) columns[k] = detail::boundary_column(x, basis[start + k]);
      });
      for (auto& col : columns) m.append_column(std::move(col));
    }
    x.boundaries.push_back(std::move(m));
  }
  return x;
}

/// Counts per dimension without storing cubes or building matrices.
inline std::vector<CubeCensus> cube_census(const Graph& g, int d, const EnumerationLimits& limits = {}) {
  if (d < 0) throw std::invalid_argument("maximum dimension must be nonnegative");
  std::vector<CubeCensus> out(d + 1);
  for (int n = 0; n <= d; ++n) {
    auto& c = out[n];
    for_each_cube(
        g, n,
        [&](std::span<const Vertex> v) {
          ++c.total;
          SingularCube cube(n, v);
          if (is_degenerate(cube)) return;
          ++c.non_degenerate;
          if (connection_decomposition(cube)) ++c.connections;
        },
        limits);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chains

/// An n-chain in basis coordinates: basis index -> nonzero coefficient.
struct Chain {
  int dim = 0;
  std::map<std::size_t, Integer> coefficients;

  void add(std::size_t index, const Integer& c) {
    if (c.is_zero()) return;
    auto& v = coefficients[index];
    v += c;
    if (v.is_zero()) coefficients.erase(index);
  }
  bool empty() const { return coefficients.empty(); }
  friend bool operator==(const Chain&, const Chain&) = default;
};

inline Chain boundary(const Chain& c, const ChainComplex& x) {
  if (c.dim < 1 || c.dim > x.max_dim)
    throw std::invalid_argument("boundary: chain dimension " + std::to_string(c.dim) + " outside 1.." +
                                std::to_string(x.max_dim));
  const auto& m = x.boundaries[c.dim];
  Chain out{c.dim - 1, {}};
  for (const auto& [j, a] : c.coefficients) {
    if (j >= m.cols()) throw std::out_of_range("boundary: basis index " + std::to_string(j) + " out of range");
    for (const auto& [i, v] : m.column(j)) out.add(i, a * v);
  }
  return out;
}

/// Basis indices of Con_n: the non-degenerate connections of dimension n.
inline std::vector<std::size_t> con_basis(const ChainComplex& x, int n) {
  if (x.mode != Normalization::degeneracies)
    throw std::invalid_argument("con_basis requires the complex normalized by degeneracies only");
  if (n < 0 || n > x.max_dim) throw std::out_of_range("con_basis: dimension out of range");
  std::vector<std::size_t> out;
  const auto& flags = x.is_connection[n];
  for (std::size_t k = 0; k < flags.size(); ++k)
    if (flags[k]) out.push_back(k);
  return out;
}

/// Checks that the boundary of every Con_n generator is supported on Con_{n-1}.
inline Report verify_con_subcomplex(const ChainComplex& x, int n) {
  Report report;
  const auto id = report.id("subcomplex");
  if (n < 1) return report;
  const auto& below = x.is_connection[n - 1];
  for (std::size_t k : con_basis(x, n)) {
    bool ok = true;
    std::size_t bad = 0;
    for (const auto& [i, v] : x.boundaries[n].column(k))
      if (!below[i]) {
        ok = false;
        bad = i;
        break;
      }
    report.check(id, ok, [&] {
      return "boundary of " + to_string(x.bases[n][k]) + " has coefficient on non-connection " +
             to_string(x.bases[n - 1][bad]);
    });
  }
  return report;
}

/// d_{n-1} d_n = 0 for every n, checked column by column on the exact product.
inline Report verify_boundary_squared(const ChainComplex& x) {
  Report report;
  const auto id = report.id("boundary_squared");
  for (int n = 1; n <= x.max_dim; ++n) {
    auto product = x.boundaries[n - 1] * x.boundaries[n];
    for (std::size_t j = 0; j < product.cols(); ++j)
      report.check(id, product.column(j).empty(), [&] {
        return "d_" + std::to_string(n - 1) + " d_" + std::to_string(n) + " nonzero on " + to_string(x.bases[n][j]);
      });
  }
  return report;
}

/**
 * Derives C/Con from the degeneracy-normalized complex: connection rows are
 * deleted (their coefficients set to zero) and connection columns dropped.
 */
inline ChainComplex quotient_by_connections(const ChainComplex& x) {
  if (x.mode != Normalization::degeneracies)
    throw std::invalid_argument("quotient_by_connections requires the complex normalized by degeneracies only");
  ChainComplex q;
  q.mode = Normalization::degeneracies_and_connections;
  q.max_dim = x.max_dim;
  q.census = x.census;
  std::vector<std::vector<std::size_t>> keep(x.max_dim + 1);
  for (int n = 0; n <= x.max_dim; ++n) {
    std::vector<SingularCube> basis;
    for (std::size_t k = 0; k < x.bases[n].size(); ++k)
      if (!x.is_connection[n][k]) {
        keep[n].push_back(k);
        basis.push_back(x.bases[n][k]);
      }
    q.bases.push_back(std::move(basis));
    q.is_connection.emplace_back(q.bases.back().size(), 0);
  }
  q.boundaries.emplace_back(0, q.rank(0));
  for (int n = 1; n <= x.max_dim; ++n) q.boundaries.push_back(x.boundaries[n].submatrix(keep[n - 1], keep[n]));
  return q;
}

// ---------------------------------------------------------------------------
// Export

/// Every boundary matrix d_0..d_max in the triplet format, lowest dimension first.
inline void export_boundary_matrices(const ChainComplex& x, std::ostream& sink) {
  for (int n = 0; n <= x.max_dim; ++n) write_triplets(sink, n, x.boundaries[n]);
}

inline std::vector<DimensionedMatrix> import_boundary_matrices(std::istream& source) {
  std::vector<DimensionedMatrix> out;
  DimensionedMatrix m;
  while (read_triplets(source, m)) out.push_back(std::move(m));
  return out;
}

}  // namespace cubhom
