#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cubhom {

/// Arbitrary-precision integer used for every chain coefficient.
using Integer = boost::multiprecision::cpp_int;

/**
 * Sparse integer matrix in compressed-column form.  Entries are nonzero and
 * row indices within a column are strictly increasing.
 */
class SparseIntMatrix {
 public:
  using Cell = std::pair<std::size_t, Integer>;  // (row, value)

  struct Triplet {
    std::size_t row;
    std::size_t col;
    Integer value;
  };

  SparseIntMatrix() : col_ptr_(1, 0) {}
  SparseIntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), col_ptr_(cols + 1, 0) {}

  /// Strict: rejects out-of-range indices and duplicate positions; zeros are dropped.
  static SparseIntMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    SparseIntMatrix m(rows, cols);
    std::size_t k = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      for (; k < triplets.size() && triplets[k].col == j; ++k) {
        const auto& t = triplets[k];
        if (t.row >= rows) throw std::out_of_range("row index " + std::to_string(t.row) + " out of range");
        if (k > 0 && triplets[k - 1].col == j && triplets[k - 1].row == t.row)
          throw std::invalid_argument("duplicate entry at (" + std::to_string(t.row) + ", " +
                                      std::to_string(j) + ")");
        if (!t.value.is_zero()) m.entries_.emplace_back(t.row, t.value);
      }
      m.col_ptr_[j + 1] = m.entries_.size();
    }
    if (k != triplets.size())
      throw std::out_of_range("column index " + std::to_string(triplets[k].col) + " out of range");
    return m;
  }

  /// Appends column `cols()`; repeated rows are summed and zero sums dropped.
  void append_column(std::vector<Cell> cells) {
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < cells.size();) {
      std::size_t row = cells[k].first;
      if (row >= rows_) throw std::out_of_range("row index " + std::to_string(row) + " out of range");
      Integer sum = 0;
      for (; k < cells.size() && cells[k].first == row; ++k) sum += cells[k].second;
      if (!sum.is_zero()) entries_.emplace_back(row, std::move(sum));
    }
    ++cols_;
    col_ptr_.push_back(entries_.size());
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  bool is_zero() const noexcept { return entries_.empty(); }

  std::span<const Cell> column(std::size_t j) const {
    return {entries_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }

  Integer at(std::size_t i, std::size_t j) const {
    auto col = column(j);
    auto it = std::lower_bound(col.begin(), col.end(), i, [](const Cell& c, std::size_t r) { return c.first < r; });
    return it != col.end() && it->first == i ? it->second : Integer(0);
  }

  /// Column-major order.
  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t j = 0; j < cols_; ++j)
      for (const auto& [i, v] : column(j)) out.push_back({i, j, v});
    return out;
  }

  SparseIntMatrix transpose() const {
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (std::size_t j = 0; j < cols_; ++j)
      for (const auto& [i, v] : column(j)) t.push_back({j, i, v});
    return from_triplets(cols_, rows_, std::move(t));
  }

  /// Keeps the listed rows and columns, renumbered in the given order.
  SparseIntMatrix submatrix(std::span<const std::size_t> keep_rows, std::span<const std::size_t> keep_cols) const {
    std::vector<std::size_t> new_row(rows_, static_cast<std::size_t>(-1));
    for (std::size_t k = 0; k < keep_rows.size(); ++k) new_row[keep_rows[k]] = k;
    SparseIntMatrix out(keep_rows.size(), 0);
    for (std::size_t j : keep_cols) {
      std::vector<Cell> cells;
      for (const auto& [i, v] : column(j))
        if (new_row[i] != static_cast<std::size_t>(-1)) cells.emplace_back(new_row[i], v);
      out.append_column(std::move(cells));
    }
    return out;
  }

  friend bool operator==(const SparseIntMatrix& a, const SparseIntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.col_ptr_ == b.col_ptr_ && a.entries_ == b.entries_;
  }

  friend SparseIntMatrix operator*(const SparseIntMatrix& a, const SparseIntMatrix& b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("matrix product: inner dimensions " + std::to_string(a.cols_) + " and " +
                                  std::to_string(b.rows_) + " differ");
    SparseIntMatrix out(a.rows_, 0);
    std::vector<Integer> acc(a.rows_);
    std::vector<char> touched(a.rows_, 0);
    std::vector<std::size_t> rows;
    for (std::size_t j = 0; j < b.cols_; ++j) {
      rows.clear();
      for (const auto& [l, blj] : b.column(j))
        for (const auto& [i, ail] : a.column(l)) {
          if (!touched[i]) {
            touched[i] = 1;
            rows.push_back(i);
            acc[i] = 0;
          }
          acc[i] += ail * blj;
        }
      std::vector<Cell> cells;
      for (auto i : rows) {
        touched[i] = 0;
        if (!acc[i].is_zero()) cells.emplace_back(i, acc[i]);
      }
      out.append_column(std::move(cells));
    }
    return out;
  }

  friend SparseIntMatrix operator+(const SparseIntMatrix& a, const SparseIntMatrix& b) { return combine(a, b, 1); }
  friend SparseIntMatrix operator-(const SparseIntMatrix& a, const SparseIntMatrix& b) { return combine(a, b, -1); }

  static SparseIntMatrix identity(std::size_t n) {
    SparseIntMatrix m(n, 0);
    for (std::size_t j = 0; j < n; ++j) m.append_column({{j, Integer(1)}});
    return m;
  }

 private:
  static SparseIntMatrix combine(const SparseIntMatrix& a, const SparseIntMatrix& b, int sign) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
    SparseIntMatrix out(a.rows_, 0);
    for (std::size_t j = 0; j < a.cols_; ++j) {
      std::vector<Cell> cells(a.column(j).begin(), a.column(j).end());
      for (const auto& [i, v] : b.column(j)) cells.emplace_back(i, sign * v);
      out.append_column(std::move(cells));
    }
    return out;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> col_ptr_;
  std::vector<Cell> entries_;
};

// ---------------------------------------------------------------------------
// Triplet text format:
//   n rows cols nnz
//   i j v          (nnz lines, 0-based row and column, nonzero value)

class TripletFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void write_triplets(std::ostream& out, int n, const SparseIntMatrix& m) {
  out << n << ' ' << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (const auto& [i, v] : m.column(j)) out << i << ' ' << j << ' ' << v << '\n';
  if (!out) throw std::runtime_error("failed to write boundary matrix " + std::to_string(n));
}

struct DimensionedMatrix {
  int n = 0;
  SparseIntMatrix matrix;
};

/// Reads one block; returns false at clean end of input.
inline bool read_triplets(std::istream& in, DimensionedMatrix& result) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    return false;
  };
  if (!next_line()) return false;
  std::istringstream header(line);
  long long n = 0;
  std::size_t rows = 0, cols = 0, nnz = 0;
  std::string extra;
  if (!(header >> n >> rows >> cols >> nnz) || (header >> extra))
    throw TripletFormatError("malformed header '" + line + "'");
  std::vector<SparseIntMatrix::Triplet> t;
  t.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!next_line()) throw TripletFormatError("expected " + std::to_string(nnz) + " entries, got " + std::to_string(k));
    std::istringstream row(line);
    std::size_t i = 0, j = 0;
    std::string value;
    if (!(row >> i >> j >> value) || (row >> extra)) throw TripletFormatError("malformed entry '" + line + "'");
    Integer v;
    try {
      v = Integer(value);
    } catch (const std::exception&) {
      throw TripletFormatError("malformed value '" + value + "'");
    }
    if (v.is_zero()) throw TripletFormatError("zero entry at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    t.push_back({i, j, std::move(v)});
  }
  try {
    result.n = static_cast<int>(n);
    result.matrix = SparseIntMatrix::from_triplets(rows, cols, std::move(t));
  } catch (const std::logic_error& e) {
    throw TripletFormatError(e.what());
  }
  return true;
}

}  // namespace cubhom
