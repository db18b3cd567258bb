#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubhom/chain.hpp"
#include "cubhom/report.hpp"
#include "cubhom/snf.hpp"

namespace cubhom {

struct DimensionHomology {
  std::size_t betti = 0;
  /// Invariant factors of d_{n+1} exceeding 1.
  std::vector<Integer> torsion;

  friend bool operator==(const DimensionHomology&, const DimensionHomology&) = default;
};

/// H_0 .. H_{max_dim-1}; the top dimension is never reported (d_{max+1} is not built).
struct HomologyResult {
  std::vector<DimensionHomology> dims;
  /// Every SNF witness checked out.
  bool transforms_valid = true;

  std::vector<std::size_t> betti() const {
    std::vector<std::size_t> b;
    for (const auto& d : dims) b.push_back(d.betti);
    return b;
  }
  friend bool operator==(const HomologyResult& a, const HomologyResult& b) { return a.dims == b.dims; }
};

/**
 * Integral homology of a graded complex given by its chain ranks and
 * boundary matrices, boundaries[n] = d_n for n = 0..top.
 */
inline HomologyResult homology(const std::vector<std::size_t>& ranks, const std::vector<SparseIntMatrix>& boundaries,
                               const SnfOptions& options = {}) {
  if (ranks.size() != boundaries.size()) throw std::invalid_argument("homology: ranks and boundaries disagree");
  const std::size_t top = ranks.size();
  std::vector<SnfResult> snf(top);
  for (std::size_t n = 1; n < top; ++n) snf[n] = smith_normal_form(boundaries[n], options);

  HomologyResult r;
  for (std::size_t n = 0; n + 1 < top; ++n) {
    DimensionHomology h;
    const std::size_t rank_n = n == 0 ? 0 : snf[n].rank;
    h.betti = ranks[n] - rank_n - snf[n + 1].rank;
    for (const auto& f : snf[n + 1].invariant_factors)
      if (f > 1) h.torsion.push_back(f);
    r.dims.push_back(std::move(h));
  }
  for (std::size_t n = 1; n < top; ++n) r.transforms_valid = r.transforms_valid && snf[n].transform_valid;
  return r;
}

inline HomologyResult homology(const ChainComplex& x, const SnfOptions& options = {}) {
  std::vector<std::size_t> ranks;
  for (int n = 0; n <= x.max_dim; ++n) ranks.push_back(x.rank(n));
  return homology(ranks, x.boundaries, options);
}

// ---------------------------------------------------------------------------
// Field coefficients

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

namespace detail {

/// Rank over Q: fraction-free echelon insertion, vectors kept primitive.
class RationalEchelon {
 public:
  explicit RationalEchelon(std::size_t dimension) : pivot_(dimension) {}

  void insert(SparseVector v) {
    while (!v.empty()) {
      const std::size_t p = v.front().first;
      if (!pivot_[p]) {
        primitive(v);
        ++rank_;
        // Clear column p from earlier pivots so the basis stays reduced.
        for (std::size_t q = 0; q < p; ++q)
          if (pivot_[q])
            if (const Integer* x = entry(*pivot_[q], p)) *pivot_[q] = eliminate(*pivot_[q], *x, v);
        pivot_[p] = std::move(v);
        return;
      }
      v = eliminate(v, v.front().second, *pivot_[p]);
    }
  }

  std::size_t rank() const { return rank_; }

 private:
  /// c*w - x*b where c is b's leading entry and x is w's entry at that position.
  static SparseVector eliminate(const SparseVector& w, const Integer& x, const SparseVector& b) {
    const Integer c = b.front().second;
    Integer g = gcd(c, x);
    SparseVector scaled = w;
    for (auto& e : scaled) e.second *= c / g;
    SparseVector out = axpy(scaled, x / g, b);
    primitive(out);
    return out;
  }

  static void primitive(SparseVector& v) {
    if (v.empty()) return;
    Integer g = 0;
    for (const auto& e : v) g = gcd(g, e.second);
    if (v.front().second < 0) g = -g;
    if (g != 1)
      for (auto& e : v) e.second /= g;
  }

  std::vector<std::optional<SparseVector>> pivot_;
  std::size_t rank_ = 0;
};

/// Rank over F_p, reduced row echelon with unit pivots.
class ModularEchelon {
 public:
  using Entry = std::pair<std::size_t, std::uint64_t>;
  ModularEchelon(std::size_t dimension, std::uint64_t p) : p_(p), pivot_(dimension) {}

  void insert(std::vector<Entry> v) {
    while (!v.empty()) {
      const std::size_t lead = v.front().first;
      if (!pivot_[lead]) {
        const std::uint64_t inv = inverse(v.front().second);
        for (auto& e : v) e.second = e.second * inv % p_;
        for (std::size_t q = 0; q < lead; ++q)
          if (pivot_[q]) {
            auto& w = *pivot_[q];
            for (const auto& e : w)
              if (e.first == lead) {
                w = sub(w, e.second, v);
                break;
              }
          }
        pivot_[lead] = std::move(v);
        ++rank_;
        return;
      }
      v = sub(v, v.front().second, *pivot_[lead]);
    }
  }

  std::size_t rank() const { return rank_; }

 private:
  std::uint64_t inverse(std::uint64_t a) const {
    std::uint64_t r = 1, e = p_ - 2;
    while (e) {
      if (e & 1) r = r * a % p_;
      a = a * a % p_;
      e >>= 1;
    }
    return r;
  }

  /// a - q*b mod p.
  std::vector<Entry> sub(const std::vector<Entry>& a, std::uint64_t q, const std::vector<Entry>& b) const {
    std::vector<Entry> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else {
        const std::uint64_t m = (p_ - q * b[j].second % p_) % p_;
        std::uint64_t x = m;
        std::size_t idx = b[j].first;
        if (i < a.size() && a[i].first == idx) x = (a[i++].second + m) % p_;
        if (x) out.emplace_back(idx, x);
        ++j;
      }
    }
    return out;
  }

  std::uint64_t p_;
  std::vector<std::optional<std::vector<Entry>>> pivot_;
  std::size_t rank_ = 0;
};

}  // namespace detail

/// Rank of an integer matrix over Q (p = 0) or F_p.
inline std::size_t rank_over_field(const SparseIntMatrix& m, std::uint64_t p) {
  if (p != 0 && (!is_prime(p) || p >= (std::uint64_t{1} << 31)))
    throw std::invalid_argument("field characteristic " + std::to_string(p) + " must be 0 or a prime below 2^31");
  if (p == 0) {
    detail::RationalEchelon e(m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      auto col = m.column(j);
      e.insert(detail::SparseVector(col.begin(), col.end()));
    }
    return e.rank();
  }
  detail::ModularEchelon e(m.rows(), p);
  const Integer modulus = p;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::vector<detail::ModularEchelon::Entry> v;
    for (const auto& [i, x] : m.column(j)) {
      Integer r = x % modulus;
      if (r < 0) r += modulus;
      if (!r.is_zero()) v.emplace_back(i, static_cast<std::uint64_t>(r));
    }
    e.insert(std::move(v));
  }
  return e.rank();
}

/// Betti numbers over Q (p = 0) or F_p for n <= max_dim - 1.
inline std::vector<std::size_t> homology_over_field(const ChainComplex& x, std::uint64_t p) {
  std::vector<std::size_t> ranks(x.max_dim + 1, 0);
  for (int n = 1; n <= x.max_dim; ++n) ranks[n] = rank_over_field(x.boundaries[n], p);
  if (x.max_dim == 0) rank_over_field(SparseIntMatrix(), p);  // still validates p
  std::vector<std::size_t> betti;
  for (int n = 0; n < x.max_dim; ++n) betti.push_back(x.rank(n) - ranks[n] - ranks[n + 1]);
  return betti;
}

// ---------------------------------------------------------------------------
// Cross-mode comparison

struct ModeComparison {
  HomologyResult with_connections;  // normalized by degeneracies only
  HomologyResult quotient;          // normalized by degeneracies and connections
  std::vector<CubeCensus> census;
  Report report;
};

/**
 * Builds both normalizations independently and checks H_n(C) = H_n(C/Con)
 * in betti and torsion for every reported n, and that the basis reduction
 * in each dimension equals the rank of Con_n.
 */
inline ModeComparison compare_homology(const Graph& g, int d, const BuildOptions& options = {}) {
  if (d < 1) throw std::invalid_argument("compare_homology needs max dimension >= 1");
  auto nd = build_complex(g, d, Normalization::degeneracies, options);
  auto q = build_complex(g, d, Normalization::degeneracies_and_connections, options);
  ModeComparison c;
  c.with_connections = homology(nd);
  c.quotient = homology(q);
  c.census = nd.census;
  const auto same = c.report.id("homology_equal");
  const auto reduction = c.report.id("reduction");
  const auto witness = c.report.id("snf_witness");
  for (std::size_t n = 0; n < c.with_connections.dims.size(); ++n)
    c.report.check(same, c.with_connections.dims[n] == c.quotient.dims[n],
                   [&] { return "H_" + std::to_string(n) + " differs between modes"; });
  for (int n = 0; n <= d; ++n) {
    std::size_t con = 0;
    for (char f : nd.is_connection[n]) con += f != 0;
    c.report.check(reduction, nd.rank(n) - q.rank(n) == con && con == nd.census[n].connections,
                   [&] { return "basis reduction at n = " + std::to_string(n) + " differs from |Con_n|"; });
  }
  c.report.check(witness, c.with_connections.transforms_valid && c.quotient.transforms_valid,
                 [] { return std::string("Smith normal form witness failed"); });
  return c;
}

}  // namespace cubhom
