#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "cubhom/sparse_matrix.hpp"

namespace cubhom {

struct SnfResult {
  /// d_1 | d_2 | ... | d_r, all positive.
  std::vector<Integer> invariant_factors;
  std::size_t rank = 0;
  /// U * A * V == D was checked on the matrix the dense pass diagonalized.
  bool transform_valid = false;
  /// The dense pass ran on a lattice basis of the columns (or rows) rather than on A itself.
  bool compressed = false;
  std::size_t core_rows = 0;
  std::size_t core_cols = 0;
};

struct SnfOptions {
  /// Matrices with at most this many cells (and both sides <= dense_side_limit)
  /// are diagonalized directly, with transforms tracked on the full matrix.
  std::size_t dense_cell_limit = 250'000;
  std::size_t dense_side_limit = 2'000;
};

namespace detail {

/// Row-major dense integer matrix.
struct DenseMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Integer> a;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}
  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  Integer& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < cols; ++j) std::swap((*this)(i, j), (*this)(k, j));
  }
  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < rows; ++i) std::swap((*this)(i, j), (*this)(i, k));
  }
  /// row_i += q * row_k
  void add_row(std::size_t i, std::size_t k, const Integer& q) {
    for (std::size_t j = 0; j < cols; ++j)
      if (!(*this)(k, j).is_zero()) (*this)(i, j) += q * (*this)(k, j);
  }
  /// col_j += q * col_k
  void add_col(std::size_t j, std::size_t k, const Integer& q) {
    for (std::size_t i = 0; i < rows; ++i)
      if (!(*this)(i, k).is_zero()) (*this)(i, j) += q * (*this)(i, k);
  }

  SparseIntMatrix to_sparse() const {
    SparseIntMatrix m(rows, 0);
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<SparseIntMatrix::Cell> cells;
      for (std::size_t i = 0; i < rows; ++i)
        if (!(*this)(i, j).is_zero()) cells.emplace_back(i, (*this)(i, j));
      m.append_column(std::move(cells));
    }
    return m;
  }

  static DenseMatrix from_sparse(const SparseIntMatrix& s) {
    DenseMatrix m(s.rows(), s.cols());
    for (std::size_t j = 0; j < s.cols(); ++j)
      for (const auto& [i, v] : s.column(j)) m(i, j) = v;
    return m;
  }
};

/**
 * Diagonalizes a dense matrix by unimodular row and column operations while
 * accumulating them into U and V.  The pivot is always an entry of least
 * absolute value; a pivot that fails to divide the rest of the block pulls
 * the offending row in and the step repeats, so the diagonal comes out as a
 * divisibility chain.
 */
inline SnfResult dense_smith(const DenseMatrix& input) {
  DenseMatrix a = input;
  const std::size_t m = a.rows, n = a.cols;
  DenseMatrix u = DenseMatrix::identity(m), v = DenseMatrix::identity(n);

  auto min_abs_in_block = [&](std::size_t t) -> std::optional<std::pair<std::size_t, std::size_t>> {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Integer best_abs;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        const auto& x = a(i, j);
        if (x.is_zero()) continue;
        Integer ax = abs(x);
        if (!best || ax < best_abs) {
          best = {i, j};
          best_abs = std::move(ax);
          if (best_abs == 1) return best;
        }
      }
    return best;
  };

  const std::size_t limit = std::min(m, n);
  std::size_t t = 0;
  for (; t < limit; ++t) {
    auto p = min_abs_in_block(t);
    if (!p) break;
    a.swap_rows(t, p->first);
    u.swap_rows(t, p->first);
    a.swap_cols(t, p->second);
    v.swap_cols(t, p->second);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(t, t).is_zero() || a(i, t).is_zero()) continue;
        Integer q = a(i, t) / a(t, t);
        if (!q.is_zero()) {
          a.add_row(i, t, -q);
          u.add_row(i, t, -q);
        }
        if (!a(i, t).is_zero()) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j).is_zero()) continue;
        Integer q = a(t, j) / a(t, t);
        if (!q.is_zero()) {
          a.add_col(j, t, -q);
          v.add_col(j, t, -q);
        }
        if (!a(t, j).is_zero()) clean = false;
      }
      if (!clean) {
        // Move the smallest remainder in row t or column t onto the pivot.
        std::size_t bi = t, bj = t;
        Integer best = abs(a(t, t));
        for (std::size_t i = t + 1; i < m; ++i)
          if (!a(i, t).is_zero() && abs(a(i, t)) < best) best = abs(a(i, t)), bi = i, bj = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (!a(t, j).is_zero() && abs(a(t, j)) < best) best = abs(a(t, j)), bi = t, bj = j;
        a.swap_rows(t, bi);
        u.swap_rows(t, bi);
        a.swap_cols(t, bj);
        v.swap_cols(t, bj);
        continue;
      }
      // Row and column t are clear; enforce divisibility of the trailing block.
      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < m && !offender; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!a(i, j).is_zero() && !Integer(a(i, j) % a(t, t)).is_zero()) {
            offender = i;
            break;
          }
      if (!offender) break;
      a.add_row(t, *offender, 1);
      u.add_row(t, *offender, 1);
    }
    if (a(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) a(t, j) = -a(t, j);
      for (std::size_t j = 0; j < m; ++j) u(t, j) = -u(t, j);
    }
  }

  SnfResult r;
  r.core_rows = m;
  r.core_cols = n;
  for (std::size_t k = 0; k < t; ++k) r.invariant_factors.push_back(a(k, k));
  r.rank = r.invariant_factors.size();

  // Witness: U * A * V must equal the diagonal we read the factors from.
  DenseMatrix d(m, n);
  for (std::size_t k = 0; k < t; ++k) d(k, k) = a(k, k);
  bool diagonal = true;
  for (std::size_t i = 0; i < m && diagonal; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !a(i, j).is_zero()) {
        diagonal = false;
        break;
      }
  bool chain = true;
  for (std::size_t k = 0; k + 1 < r.rank; ++k)
    if (!Integer(r.invariant_factors[k + 1] % r.invariant_factors[k]).is_zero()) chain = false;
  r.transform_valid =
      diagonal && chain && (u.to_sparse() * input.to_sparse() * v.to_sparse()) == d.to_sparse();
  return r;
}

using SparseVector = std::vector<SparseIntMatrix::Cell>;

/// a - q * b on sorted sparse vectors.
inline SparseVector axpy(const SparseVector& a, const Integer& q, const SparseVector& b) {
  SparseVector out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, -q * b[j].second);
      ++j;
    } else {
      Integer x = a[i].second - q * b[j].second;
      if (!x.is_zero()) out.emplace_back(a[i].first, std::move(x));
      ++i, ++j;
    }
  }
  return out;
}

inline const Integer* entry(const SparseVector& v, std::size_t idx) {
  auto it = std::lower_bound(v.begin(), v.end(), idx,
                             [](const SparseIntMatrix::Cell& c, std::size_t k) { return c.first < k; });
  return it != v.end() && it->first == idx ? &it->second : nullptr;
}

/// floor(a / b) for b > 0.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if (a < 0 && !Integer(a % b).is_zero()) --q;
  return q;
}

/// (g, x, y) with g = x*a + y*b = gcd(a, b) > 0.
inline std::tuple<Integer, Integer, Integer> extended_gcd(Integer a, Integer b) {
  Integer x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (!b.is_zero()) {
    Integer q = a / b;
    Integer r = a - q * b;
    a = std::move(b);
    b = std::move(r);
    Integer nx = x0 - q * x1, ny = y0 - q * y1;
    x0 = std::move(x1), x1 = std::move(nx);
    y0 = std::move(y1), y1 = std::move(ny);
  }
  if (a < 0) a = -a, x0 = -x0, y0 = -y0;
  return {a, x0, y0};
}

/**
 * Echelon basis of the Z-lattice spanned by the inserted vectors.  Basis
 * vectors are keyed by their leading index and carry a positive leading
 * entry.  A new pivot is reduced against later pivots and clears its column
 * in earlier vectors, so with unit pivots the basis stays fully reduced and
 * a dependent vector reduces in as many steps as it has pivot entries.
 */
class LatticeEchelon {
 public:
  explicit LatticeEchelon(std::size_t dimension) : pivot_(dimension) {}

  void insert(SparseVector v) {
    while (!v.empty()) {
      const std::size_t p = v.front().first;
      if (!pivot_[p]) {
        if (v.front().second < 0)
          for (auto& c : v) c.second = -c.second;
        install(p, std::move(v));
        return;
      }
      SparseVector& b = *pivot_[p];
      const Integer a = v.front().second;
      const Integer c = b.front().second;
      if (Integer(a % c).is_zero()) {
        v = axpy(v, a / c, b);
        continue;
      }
      // Unimodular 2x2 step: [b; v] -> [x b + y v; (a/g) b - (c/g) v].
      auto [g, x, y] = extended_gcd(c, a);
      SparseVector nb = axpy(axpy({}, -x, b), -y, v);
      SparseVector nv = axpy(axpy({}, -(a / g), b), c / g, v);
      install(p, std::move(nb));
      v = std::move(nv);
    }
  }

  std::size_t rank() const {
    return static_cast<std::size_t>(std::count_if(pivot_.begin(), pivot_.end(), [](const auto& b) { return b.has_value(); }));
  }

  /// Basis vectors as the rows of an r x dimension matrix, by pivot order.
  DenseMatrix as_rows() const {
    DenseMatrix m(rank(), pivot_.size());
    std::size_t r = 0;
    for (const auto& b : pivot_)
      if (b) {
        for (const auto& [k, x] : *b) m(r, k) = x;
        ++r;
      }
    return m;
  }

 private:
  void install(std::size_t p, SparseVector v) {
    // Reduce against later pivots, in increasing order.
    for (std::size_t k = 1; k < v.size(); ++k) {
      const std::size_t idx = v[k].first;
      if (idx == p || !pivot_[idx]) continue;
      const auto& b = *pivot_[idx];
      Integer q = floor_div(v[k].second, b.front().second);
      if (!q.is_zero()) {
        v = axpy(v, q, b);
        k = 0;  // positions shifted; rescan (entries before idx are unchanged)
      }
    }
    pivot_[p] = std::move(v);
    const auto& nb = *pivot_[p];
    for (std::size_t q = 0; q < p; ++q) {
      if (!pivot_[q]) continue;
      if (const Integer* x = entry(*pivot_[q], p)) {
        Integer f = floor_div(*x, nb.front().second);
        if (!f.is_zero()) pivot_[q] = axpy(*pivot_[q], f, nb);
      }
    }
  }

  std::vector<std::optional<SparseVector>> pivot_;
};

}  // namespace detail

/**
 * Invariant factors of an integer matrix.  Small matrices are diagonalized
 * directly.  Larger ones are first replaced by an echelon basis of the
 * lattice spanned by their longer side (columns of a wide matrix, rows of a
 * tall one); that basis has the same nonzero invariant factors and is then
 * diagonalized densely, with the transform witness checked on it.
 */
inline SnfResult smith_normal_form(const SparseIntMatrix& m, const SnfOptions& options = {}) {
  const bool small = m.rows() * m.cols() <= options.dense_cell_limit && m.rows() <= options.dense_side_limit &&
                     m.cols() <= options.dense_side_limit;
  if (small) return detail::dense_smith(detail::DenseMatrix::from_sparse(m));

  const bool wide = m.cols() >= m.rows();
  const SparseIntMatrix& src = wide ? m : m.transpose();
  detail::LatticeEchelon lattice(src.rows());
  for (std::size_t j = 0; j < src.cols(); ++j) {
    auto col = src.column(j);
    lattice.insert(detail::SparseVector(col.begin(), col.end()));
  }
  auto r = detail::dense_smith(lattice.as_rows());
  r.compressed = true;
  return r;
}

}  // namespace cubhom
