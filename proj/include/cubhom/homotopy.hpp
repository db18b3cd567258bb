#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubhom/chain.hpp"
#include "cubhom/cube.hpp"
#include "cubhom/enumerate.hpp"
#include "cubhom/homology.hpp"
#include "cubhom/report.hpp"

namespace cubhom {

/**
 * Finite formal sum of cubes with integer coefficients.  Coefficients are
 * kept on every cube, degenerate or not; `reduced` drops degenerate cubes,
 * which gives the coset in the normalized complex.
 */
struct CubeChain {
  std::map<SingularCube, Integer> terms;

  void add(const SingularCube& c, const Integer& v) {
    if (v.is_zero()) return;
    auto [it, fresh] = terms.try_emplace(c, v);
    if (!fresh) {
      it->second += v;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  CubeChain& operator+=(const CubeChain& o) {
    for (const auto& [c, v] : o.terms) add(c, v);
    return *this;
  }
  CubeChain& operator-=(const CubeChain& o) {
    for (const auto& [c, v] : o.terms) add(c, -v);
    return *this;
  }
  friend CubeChain operator*(const Integer& k, const CubeChain& a) {
    CubeChain r;
    if (!k.is_zero())
      for (const auto& [c, v] : a.terms) r.terms.emplace(c, k * v);
    return r;
  }
  friend CubeChain operator+(CubeChain a, const CubeChain& b) { return a += b; }
  friend CubeChain operator-(CubeChain a, const CubeChain& b) { return a -= b; }
  bool empty() const { return terms.empty(); }

  static CubeChain of(const SingularCube& c, const Integer& v = 1) {
    CubeChain r;
    r.add(c, v);
    return r;
  }

  template <class Ops = StandardOperators>
  CubeChain reduced(const Ops& ops = {}) const {
    CubeChain r;
    for (const auto& [c, v] : terms)
      if (!is_degenerate(c, ops)) r.terms.emplace(c, v);
    return r;
  }
};

inline std::string to_string(const CubeChain& c) {
  if (c.empty()) return "0";
  std::string s;
  for (const auto& [cube, v] : c.terms) {
    if (!s.empty()) s += " + ";
    s += v.str() + "*" + to_string(cube);
  }
  return s;
}

namespace detail {

inline Integer parity(int k) { return k % 2 == 0 ? 1 : -1; }

template <class Ops>
CubeChain chain_boundary(const CubeChain& a, const Ops& ops) {
  CubeChain r;
  for (const auto& [c, v] : a.terms)
    for (int i = 1; i <= c.dim(); ++i) {
      r.add(apply_face(ops, c, i, Sign::minus), parity(i) * v);
      r.add(apply_face(ops, c, i, Sign::plus), -parity(i) * v);
    }
  return r;
}

template <class Ops>
CubeChain chain_connection(const CubeChain& a, int j, Sign b, const Ops& ops) {
  CubeChain r;
  for (const auto& [c, v] : a.terms) {
    if (j < 1 || j > c.dim()) throw std::logic_error("connection index outside the cube dimension");
    r.add(apply_connection(ops, c, j, b), v);
  }
  return r;
}

/// sum_{i=lo}^{hi} (-1)^i (f_i^- - f_i^+)(tau)
template <class Ops>
CubeChain signed_faces(const SingularCube& tau, int lo, int hi, const Ops& ops) {
  CubeChain r;
  for (int i = lo; i <= hi; ++i) {
    r.add(apply_face(ops, tau, i, Sign::minus), parity(i));
    r.add(apply_face(ops, tau, i, Sign::plus), -parity(i));
  }
  return r;
}

template <class Ops>
bool same_coset(const CubeChain& a, const CubeChain& b, const Ops& ops) {
  return (a - b).reduced(ops).empty();
}

template <class Ops>
std::string mismatch(const CubeChain& lhs, const CubeChain& rhs, const Ops& ops) {
  return "lhs " + to_string(lhs.reduced(ops)) + " vs rhs " + to_string(rhs.reduced(ops));
}

/// Runs body(cube, report) over every cube in `cubes` on `workers` threads; chunk reports merge in order.
template <class Body>
Report parallel_report(const std::vector<SingularCube>& cubes, unsigned workers, Body&& body) {
  const unsigned w = std::max(1U, workers);
  const std::size_t chunk = (cubes.size() + w - 1) / w;
  std::vector<Report> parts(w);
  detail::parallel_chunks(cubes.size(), w, [&](std::size_t b, std::size_t e) {
    auto& rep = parts[chunk ? b / chunk : 0];
    for (std::size_t k = b; k < e; ++k) body(cubes[k], rep);
  });
  Report out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Theorem on the boundary of a connection

/// Case label used for the boundary of G_t(tau) with tau of dimension n.
inline std::string bd_case(int t, int n) {
  if (t == 1 && n == 1) return "(i)+(ii)";
  if (t == 1) return "(i)";
  if (t == n) return "(ii)";
  return "(iii)";
}

/**
 * Checks d G_t^b(tau) against the matching case of the theorem:
 *   (i)   t = 1:      -G_1 sum_{i=2}^n (-1)^i (f_i^- - f_i^+) tau
 *   (ii)  t = n:       G_{n-1} sum_{i=1}^{n-1} (-1)^i (f_i^- - f_i^+) tau
 *   (iii) 1 < t < n:   both of the above, split at t
 * With t = n = 1 both sums are empty and d G_1(tau) vanishes mod degeneracies.
 * Returns the case label; the comparison is recorded in `report` under "bd".
 */
template <class Ops = StandardOperators>
std::string verify_thm_bd(const SingularCube& tau, int t, Sign b, Report& report, const Ops& ops = {}) {
  using namespace detail;
  const int n = tau.dim();
  if (n < 1 || t < 1 || t > n) throw std::out_of_range("verify_thm_bd: need 1 <= t <= dim(tau)");
  const auto lhs = chain_boundary(CubeChain::of(apply_connection(ops, tau, t, b)), ops);
  CubeChain rhs;
  if (t > 1) rhs += chain_connection(signed_faces(tau, 1, t - 1, ops), t - 1, b, ops);
  if (t < n) rhs -= chain_connection(signed_faces(tau, t + 1, n, ops), t, b, ops);
  const auto label = bd_case(t, n);
  report.check("bd " + label, same_coset(lhs, rhs, ops), [&] {
    return "G_" + std::to_string(t) + "^" + symbol(b) + " " + to_string(tau) + ": " + mismatch(lhs, rhs, ops);
  });
  return label;
}

/// Every tau in K_n for 1 <= n <= d, every t in [n] and both signs.
template <class Ops = StandardOperators>
Report verify_thm_bd_suite(const Graph& g, int d, const Ops& ops = {}, const BuildOptions& options = {}) {
  Report report;
  for (int n = 1; n <= d; ++n) {
    auto cubes = enumerate_cubes(g, n, options.limits, options.workers);
    report.merge(detail::parallel_report(cubes, options.workers, [&](const SingularCube& tau, Report& r) {
      for (int t = 1; t <= n; ++t)
        for (Sign b : kSigns) verify_thm_bd(tau, t, b, r, ops);
    }));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Corollaries g1, gx and the main lemma

/**
 * For tau in K_n (2 <= n <= d) and both signs, with S_{<=t} = sum_{i<=t} (-1)^i (f_i^- - f_i^+):
 *   g1(i)    d G_1 tau + G_1 d tau = G_1 (f_1^+ - f_1^-) tau
 *   g1(ii)   d G_t tau + G_t d tau = G_{t-1} S_{<t} tau + G_t S_{<=t} tau        2 <= t <= n-1
 *   g1(iii)  sum_{j<=t} (-1)^j (d G_j tau + G_j d tau) = (-1)^t G_t S_{<=t} tau  1 <= t <= n-1
 *   g1(iv)   d sum_{j<=n} (-1)^j G_j tau + sum_{j<n} (-1)^j G_j d tau = 0
 * G_t of an (n-1)-cube needs t <= n-1, hence the ranges.
 *
 * For theta = G_t^b tau with tau in K_{n-1}, 2 <= n <= d, t in [n-1], and
 * C = G_t G_{t-1} S_{<t} tau (zero when t = 1):
 *   gx(i)    d G_t theta + G_t d theta = (-1)^{t+1} b theta + 2 C
 *   gx(ii)   sum_{j<=t} (-1)^j (d G_j theta + G_j d theta) = -b theta + (-1)^t C
 *   lemma    d B theta + B d theta = b theta,  B = (-1)^{t+1} G_t - 2 sum_{j<t} (-1)^j G_j
 */
template <class Ops = StandardOperators>
Report verify_identity_suite(const Graph& g, int d, const Ops& ops = {}, const BuildOptions& options = {}) {
  using namespace detail;
  if (d < 2) throw std::invalid_argument("identity suite needs max dimension >= 2");
  Report report;
  report.note("g1(i) is checked with G_1 (f_1^+ - f_1^-); the face index is taken to be 1");

  // d G_j c + G_j d c for a single cube c
  auto anticommutator = [&](const SingularCube& c, int j, Sign b) {
    return chain_boundary(CubeChain::of(apply_connection(ops, c, j, b)), ops) +
           chain_connection(chain_boundary(CubeChain::of(c), ops), j, b, ops);
  };

  for (int n = 2; n <= d; ++n) {
    auto cubes = enumerate_cubes(g, n, options.limits, options.workers);
    report.merge(parallel_report(cubes, options.workers, [&](const SingularCube& tau, Report& r) {
      for (Sign b : kSigns) {
        auto say = [&](const std::string& what, const CubeChain& l, const CubeChain& rhs) {
          return what + " " + symbol(b) + " on " + to_string(tau) + ": " + mismatch(l, rhs, ops);
        };
        {
          auto l = anticommutator(tau, 1, b);
          auto rhs = chain_connection(CubeChain::of(apply_face(ops, tau, 1, Sign::plus)) -
                                          CubeChain::of(apply_face(ops, tau, 1, Sign::minus)),
                                      1, b, ops);
          r.check("g1(i)", same_coset(l, rhs, ops), [&] { return say("g1(i)", l, rhs); });
        }
        CubeChain alternating;
        for (int t = 1; t <= n - 1; ++t) {
          auto ac = anticommutator(tau, t, b);
          auto s_le = signed_faces(tau, 1, t, ops);
          if (t >= 2) {
            auto rhs = chain_connection(signed_faces(tau, 1, t - 1, ops), t - 1, b, ops) +
                       chain_connection(s_le, t, b, ops);
            r.check("g1(ii)", same_coset(ac, rhs, ops), [&] { return say("g1(ii) t=" + std::to_string(t), ac, rhs); });
          }
          alternating += parity(t) * ac;
          auto rhs = parity(t) * chain_connection(s_le, t, b, ops);
          r.check("g1(iii)", same_coset(alternating, rhs, ops),
                  [&] { return say("g1(iii) t=" + std::to_string(t), alternating, rhs); });
        }
        CubeChain top;
        for (int j = 1; j <= n; ++j) top += parity(j) * CubeChain::of(apply_connection(ops, tau, j, b));
        auto l = chain_boundary(top, ops);
        auto dt = chain_boundary(CubeChain::of(tau), ops);
        for (int j = 1; j <= n - 1; ++j) l += parity(j) * chain_connection(dt, j, b, ops);
        r.check("g1(iv)", same_coset(l, {}, ops), [&] { return say("g1(iv)", l, {}); });
      }
    }));
  }

  for (int n = 2; n <= d; ++n) {
    auto cubes = enumerate_cubes(g, n - 1, options.limits, options.workers);
    report.merge(parallel_report(cubes, options.workers, [&](const SingularCube& tau, Report& r) {
      for (int t = 1; t <= n - 1; ++t)
        for (Sign b : kSigns) {
          const auto theta = apply_connection(ops, tau, t, b);
          const Integer beta = coefficient(b);
          auto say = [&](const std::string& what, const CubeChain& l, const CubeChain& rhs) {
            return what + " theta = G_" + std::to_string(t) + "^" + symbol(b) + " " + to_string(tau) + ": " +
                   mismatch(l, rhs, ops);
          };
          CubeChain inner;
          if (t >= 2)
            inner = chain_connection(chain_connection(signed_faces(tau, 1, t - 1, ops), t - 1, b, ops), t, b, ops);

          auto ac = anticommutator(theta, t, b);
          auto rhs1 = parity(t + 1) * beta * CubeChain::of(theta) + Integer(2) * inner;
          r.check("gx(i)", same_coset(ac, rhs1, ops), [&] { return say("gx(i)", ac, rhs1); });

          CubeChain alternating;
          for (int j = 1; j <= t; ++j) alternating += parity(j) * anticommutator(theta, j, b);
          auto rhs2 = -beta * CubeChain::of(theta) + parity(t) * inner;
          r.check("gx(ii)", same_coset(alternating, rhs2, ops), [&] { return say("gx(ii)", alternating, rhs2); });

          CubeChain lemma = parity(t + 1) * ac;
          for (int j = 1; j < t; ++j) lemma -= Integer(2) * parity(j) * anticommutator(theta, j, b);
          auto rhs3 = beta * CubeChain::of(theta);
          r.check("lemma", same_coset(lemma, rhs3, ops), [&] { return say("lemma", lemma, rhs3); });
        }
    }));
  }
  return report;
}

// ---------------------------------------------------------------------------
// The homotopy phi on connection generators

/**
 * phi(theta) = b [(-1)^{t+1} G_t^b theta - 2 sum_{j<t} (-1)^j G_j^b theta]
 * with theta = G_t^b(tau) the minimal-index decomposition.  Degenerate
 * results are dropped.
 */
template <class Ops = StandardOperators>
CubeChain phi_cubes(const SingularCube& theta, const Ops& ops = {}) {
  if (is_degenerate(theta, ops)) throw std::invalid_argument("phi: " + to_string(theta) + " is degenerate");
  auto dec = connection_decomposition(theta, ops);
  if (!dec) throw std::invalid_argument("phi: " + to_string(theta) + " is not a connection");
  const int t = dec->index;
  const Integer beta = coefficient(dec->sign);
  CubeChain r = beta * detail::parity(t + 1) * CubeChain::of(apply_connection(ops, theta, t, dec->sign));
  for (int j = 1; j < t; ++j)
    r.add(apply_connection(ops, theta, j, dec->sign), -2 * beta * detail::parity(j));
  return r.reduced(ops);
}

/// phi(theta) in basis coordinates of X in dimension dim(theta) + 1.
inline Chain phi_generator(const SingularCube& theta, const ChainComplex& x) {
  const int n = theta.dim();
  if (x.mode != Normalization::degeneracies)
    throw std::invalid_argument("phi needs the complex normalized by degeneracies only");
  if (n + 1 > x.max_dim)
    throw std::out_of_range("phi of a " + std::to_string(n) + "-cube needs the complex built to dimension " +
                            std::to_string(n + 1));
  Chain out{n + 1, {}};
  for (const auto& [c, v] : phi_cubes(theta).terms) {
    auto k = x.index_of(c);
    if (!k) throw std::logic_error("phi: " + to_string(c) + " is missing from the basis");
    out.add(*k, v);
  }
  return out;
}

/**
 * Per-generator form of the homotopy identity: for every non-degenerate
 * connection theta in K_n, d phi(theta) + phi(d theta) = theta mod
 * degeneracies.  Works on cubes directly, so only K_n is enumerated and no
 * (n+1)-dimensional basis is needed.
 */
template <class Ops = StandardOperators>
Report verify_homotopy_generators(const Graph& g, int n, const Ops& ops = {}, const BuildOptions& options = {}) {
  using namespace detail;
  if (n < 2) throw std::invalid_argument("connection generators start in dimension 2");
  auto cubes = enumerate_cubes(g, n, options.limits, options.workers);
  return parallel_report(cubes, options.workers, [&](const SingularCube& theta, Report& r) {
    if (is_degenerate(theta, ops) || !connection_decomposition(theta, ops)) return;
    CubeChain lhs = chain_boundary(phi_cubes(theta, ops), ops);
    for (const auto& [c, v] : chain_boundary(CubeChain::of(theta), ops).reduced(ops).terms) {
      const bool in_con = connection_decomposition(c, ops).has_value();
      r.check("subcomplex", in_con, [&] { return to_string(c) + " in d" + to_string(theta) + " is not a connection"; });
      if (in_con) lhs += v * phi_cubes(c, ops);
    }
    r.check("homotopy", same_coset(lhs, CubeChain::of(theta), ops),
            [&] { return "on " + to_string(theta) + ": " + mismatch(lhs, CubeChain::of(theta), ops); });
  });
}

struct CertificateDimension {
  int n = 0;
  std::size_t con_rank = 0;
  /// Con_n basis -> C_{n+1} basis.
  SparseIntMatrix phi;
  /// Nonzero entries of d_{n+1} phi_n + phi_{n-1} d_n - inclusion.
  std::size_t residual = 0;
};

struct HomotopyCertificate {
  std::vector<CertificateDimension> dims;
  Report report;
  bool ok() const {
    for (const auto& d : dims)
      if (d.residual != 0) return false;
    return report.ok();
  }
};

/**
 * Assembles phi_n for 2 <= n <= d-1 on the Con_n basis of the complex
 * normalized by degeneracies and measures the residual of the homotopy
 * identity.  The residual is taken over all rows of C_n, so a stray
 * coefficient outside Con_n also counts.
 */
inline HomotopyCertificate build_certificate(const ChainComplex& x) {
  if (x.mode != Normalization::degeneracies)
    throw std::invalid_argument("certificate needs the complex normalized by degeneracies only");
  HomotopyCertificate cert;
  const auto residual_id = cert.report.id("homotopy");
  const auto support_id = cert.report.id("subcomplex");
  const int d = x.max_dim;

  std::vector<std::vector<std::size_t>> con(d + 1);
  for (int n = 0; n <= d; ++n) con[n] = con_basis(x, n);

  // phi_{n-1} from the previous step; phi_1 is zero since Con_1 is empty.
  SparseIntMatrix prev_phi(x.rank(2), con[1].size());
  for (int n = 2; n <= d - 1; ++n) {
    CertificateDimension dim;
    dim.n = n;
    dim.con_rank = con[n].size();
    dim.phi = SparseIntMatrix(x.rank(n + 1), 0);
    for (std::size_t k : con[n]) {
      auto c = phi_generator(x.bases[n][k], x);
      dim.phi.append_column(std::vector<SparseIntMatrix::Cell>(c.coefficients.begin(), c.coefficients.end()));
    }

    auto restricted = x.boundaries[n].submatrix(con[n - 1], con[n]);
    // Coefficients of d(theta) outside Con_{n-1} would make phi_{n-1} d_n ill-defined.
    for (std::size_t j = 0; j < con[n].size(); ++j) {
      const auto all = x.boundaries[n].column(con[n][j]).size();
      cert.report.check(support_id, restricted.column(j).size() == all, [&] {
        return "boundary of " + to_string(x.bases[n][con[n][j]]) + " leaves Con_" + std::to_string(n - 1);
      });
    }

    std::vector<SparseIntMatrix::Triplet> inc;
    for (std::size_t j = 0; j < con[n].size(); ++j) inc.push_back({con[n][j], j, Integer(1)});
    auto inclusion = SparseIntMatrix::from_triplets(x.rank(n), con[n].size(), std::move(inc));

    auto lhs = x.boundaries[n + 1] * dim.phi;
    if (n - 1 >= 2) lhs = lhs + prev_phi * restricted;
    auto diff = lhs - inclusion;
    dim.residual = diff.nnz();
    for (std::size_t j = 0; j < diff.cols(); ++j)
      cert.report.check(residual_id, diff.column(j).empty(), [&] {
        return "d phi + phi d differs from the identity on " + to_string(x.bases[n][con[n][j]]);
      });
    prev_phi = dim.phi;
    cert.dims.push_back(std::move(dim));
  }
  return cert;
}

inline HomotopyCertificate build_certificate(const Graph& g, int d, const BuildOptions& options = {}) {
  if (d < 2) throw std::invalid_argument("certificate needs max dimension >= 2");
  return build_certificate(build_complex(g, d, Normalization::degeneracies, options));
}

/// Homology of the subcomplex spanned by the Con_n bases, n <= max_dim - 1.
inline HomologyResult homology_of_con(const ChainComplex& x) {
  std::vector<std::vector<std::size_t>> con(x.max_dim + 1);
  for (int n = 0; n <= x.max_dim; ++n) con[n] = con_basis(x, n);
  std::vector<std::size_t> ranks;
  std::vector<SparseIntMatrix> bounds;
  for (int n = 0; n <= x.max_dim; ++n) {
    ranks.push_back(con[n].size());
    bounds.push_back(n == 0 ? SparseIntMatrix(0, con[0].size()) : x.boundaries[n].submatrix(con[n - 1], con[n]));
  }
  return homology(ranks, bounds);
}

inline HomologyResult homology_of_con(const Graph& g, int d, const BuildOptions& options = {}) {
  if (d < 2) throw std::invalid_argument("homology of Con needs max dimension >= 2");
  return homology_of_con(build_complex(g, d, Normalization::degeneracies, options));
}

}  // namespace cubhom
