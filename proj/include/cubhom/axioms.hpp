#pragma once

#include <span>
#include <string>
#include <vector>

#include "cubhom/cube.hpp"
#include "cubhom/enumerate.hpp"
#include "cubhom/graph.hpp"
#include "cubhom/report.hpp"

namespace cubhom {

namespace detail {

/// Fixed scratch buffers for operator results, sized for cubes up to `max_dim`.
struct Scratch {
  explicit Scratch(int max_dim, int count) : size(std::size_t{1} << max_dim), data(size * count) {}
  std::span<Vertex> operator[](int k) { return {data.data() + size * k, size}; }
  std::size_t size;
  std::vector<Vertex> data;
};

inline bool same(std::span<const Vertex> a, std::span<const Vertex> b, int dim) {
  const std::size_t n = std::size_t{1} << dim;
  for (std::size_t k = 0; k < n; ++k)
    if (a[k] != b[k]) return false;
  return true;
}

inline bool valid_values(const Graph& g, std::span<const Vertex> v, int dim) {
  const std::size_t n = std::size_t{1} << dim;
  for (std::size_t b = 0; b < n; ++b) {
    if (v[b] >= g.vertex_count()) return false;
    for (int i = 0; i < dim; ++i)
      if (((b >> i) & 1U) && !g.equal_or_adjacent_unchecked(v[b], v[b ^ (std::size_t{1} << i)]))
        return false;
  }
  return true;
}

inline std::string show(std::span<const Vertex> v, int dim) {
  return to_string(SingularCube(dim, v.first(std::size_t{1} << dim)));
}

inline std::string sgn(Sign s) { return std::string(1, symbol(s)); }

}  // namespace detail

/**
 * Exhaustively checks the cubical identities on every cube of g up to
 * dimension d:
 *
 *   face_face:              f_i^a f_j^b = f_{j-1}^b f_i^a          (i < j)
 *   degeneracy_degeneracy:  e_i e_j = e_{j+1} e_i                  (i <= j)
 *   face_degeneracy:        f_i^a e_j = e_{j-1} f_i^a | e_j f_{i-1}^a | id
 *   closure:                faces and degeneracies stay graph homomorphisms
 *
 * Each identity is checked only where every intermediate cube has dimension
 * at most d.
 */
template <class Ops = StandardOperators>
Report verify_cubical_axioms(const Graph& g, int d, const Ops& ops = {},
                             const EnumerationLimits& limits = {}) {
  using detail::same;
  using detail::show;
  Report report;
  detail::Scratch s(d + 1, 4);
  // faces[j][beta] of the current cube, for the face_face family
  detail::Scratch faces(d, 2 * (d + 1));
  const auto closure = report.id("closure");
  const auto face_face = report.id("face_face");
  const auto face_degeneracy = report.id("face_degeneracy");
  const auto degeneracy_degeneracy = report.id("degeneracy_degeneracy");

  for (int m = 0; m <= d; ++m) {
    for_each_cube(
        g, m,
        [&](std::span<const Vertex> sigma) {
          auto msg = [&](std::string what) { return what + " on " + show(sigma, m); };

          if (m >= 1) {
            for (int j = 1; j <= m; ++j)
              for (Sign b : kSigns) {
                auto out = faces[2 * j + (b == Sign::plus)];
                ops.face_into(sigma, m, j, b, out);
                report.check(closure, detail::valid_values(g, out, m - 1),
                             [&] { return msg("f_" + std::to_string(j) + "^" + detail::sgn(b)); });
              }
          }

          if (m >= 2) {
            for (int i = 1; i <= m; ++i)
              for (int j = i + 1; j <= m; ++j)
                for (Sign a : kSigns)
                  for (Sign b : kSigns) {
                    ops.face_into(faces[2 * j + (b == Sign::plus)], m - 1, i, a, s[0]);
                    ops.face_into(faces[2 * i + (a == Sign::plus)], m - 1, j - 1, b, s[1]);
                    report.check(face_face, same(s[0], s[1], m - 2), [&] {
                      return msg("f_" + std::to_string(i) + "^" + detail::sgn(a) + " f_" +
                                 std::to_string(j) + "^" + detail::sgn(b));
                    });
                  }
          }

          if (m + 1 <= d) {
            for (int j = 1; j <= m + 1; ++j) {
              ops.degeneracy_into(sigma, m, j, s[2]);
              report.check(closure, detail::valid_values(g, s[2], m + 1),
                           [&] { return msg("e_" + std::to_string(j)); });
              for (int i = 1; i <= m + 1; ++i)
                for (Sign a : kSigns) {
                  ops.face_into(s[2], m + 1, i, a, s[0]);
                  std::span<const Vertex> rhs = sigma;
                  if (i < j) {
                    ops.face_into(sigma, m, i, a, s[3]);
                    ops.degeneracy_into(s[3], m - 1, j - 1, s[1]);
                    rhs = s[1];
                  } else if (i > j) {
                    ops.face_into(sigma, m, i - 1, a, s[3]);
                    ops.degeneracy_into(s[3], m - 1, j, s[1]);
                    rhs = s[1];
                  }
                  report.check(face_degeneracy, same(s[0], rhs, m), [&] {
                    return msg("f_" + std::to_string(i) + "^" + detail::sgn(a) + " e_" +
                               std::to_string(j));
                  });
                }
            }
          }

          if (m + 2 <= d) {
            for (int j = 1; j <= m + 1; ++j)
              for (int i = 1; i <= j; ++i) {
                ops.degeneracy_into(sigma, m, j, s[2]);
                ops.degeneracy_into(s[2], m + 1, i, s[0]);
                ops.degeneracy_into(sigma, m, i, s[3]);
                ops.degeneracy_into(s[3], m + 1, j + 1, s[1]);
                report.check(degeneracy_degeneracy, same(s[0], s[1], m + 2), [&] {
                  return msg("e_" + std::to_string(i) + " e_" + std::to_string(j));
                });
              }
          }
        },
        limits);
  }
  return report;
}

/**
 * Exhaustively checks the connection identities on every cube of g up to
 * dimension d:
 *
 *   connection_connection:  G_i^a G_j^b = G_{j+1}^b G_i^a          (i < j, or i = j and a = b)
 *   connection_degeneracy:  G_i^a e_j = e_{j+1} G_i^a | e_j G_{i-1}^a | e_i e_i = e_{i+1} e_i
 *   face_connection:        f_i^a G_j^b = G_{j-1}^b f_i^a | G_j^b f_{i-1}^a | id | e_j f_j^a
 *   closure:                connections stay graph homomorphisms
 *
 * For i in {j, j+1} with a != b the degenerate case is e_j f_j^a: with i = j+1
 * the operator pair e_i f_i^a would fix the wrong coordinate.  G_j^a G_j^b
 * with a != b does not commute past itself (min and max do not associate),
 * so i = j is checked only for equal signs.
 */
template <class Ops = StandardOperators>
Report verify_connection_axioms(const Graph& g, int d, const Ops& ops = {},
                                const EnumerationLimits& limits = {}) {
  using detail::same;
  using detail::show;
  Report report;
  report.note("face_connection: for i = j, j+1 and a != b the expected value is e_j f_j^a");
  report.note("connection_connection: i = j is checked only for equal signs");
  detail::Scratch s(d + 1, 5);
  const auto closure = report.id("closure");
  const auto face_connection = report.id("face_connection");
  const auto connection_connection = report.id("connection_connection");
  const auto connection_degeneracy = report.id("connection_degeneracy");
  const auto degeneracy_square = report.id("degeneracy_square");

  for (int m = 0; m + 1 <= d; ++m) {
    for_each_cube(
        g, m,
        [&](std::span<const Vertex> sigma) {
          auto msg = [&](std::string what) { return what + " on " + show(sigma, m); };

          // face_connection and closure: G_j^b sigma has dimension m + 1 <= d.
          for (int j = 1; j <= m; ++j)
            for (Sign b : kSigns) {
              ops.connection_into(sigma, m, j, b, s[0]);
              report.check(closure, detail::valid_values(g, s[0], m + 1), [&] {
                return msg("G_" + std::to_string(j) + "^" + detail::sgn(b));
              });
              for (int i = 1; i <= m + 1; ++i)
                for (Sign a : kSigns) {
                  ops.face_into(s[0], m + 1, i, a, s[1]);
                  std::span<const Vertex> rhs = sigma;
                  if (i < j) {
                    ops.face_into(sigma, m, i, a, s[3]);
                    ops.connection_into(s[3], m - 1, j - 1, b, s[2]);
                    rhs = s[2];
                  } else if (i > j + 1) {
                    ops.face_into(sigma, m, i - 1, a, s[3]);
                    ops.connection_into(s[3], m - 1, j, b, s[2]);
                    rhs = s[2];
                  } else if (a != b) {
                    ops.face_into(sigma, m, j, a, s[3]);
                    ops.degeneracy_into(s[3], m - 1, j, s[2]);
                    rhs = s[2];
                  }
                  report.check(face_connection, same(s[1], rhs, m), [&] {
                    return msg("f_" + std::to_string(i) + "^" + detail::sgn(a) + " G_" +
                               std::to_string(j) + "^" + detail::sgn(b));
                  });
                }
            }

          if (m + 2 > d) return;

          for (int j = 1; j <= m; ++j)
            for (int i = 1; i <= j; ++i)
              for (Sign a : kSigns)
                for (Sign b : kSigns) {
                  if (i == j && a != b) continue;
                  ops.connection_into(sigma, m, j, b, s[1]);
                  ops.connection_into(s[1], m + 1, i, a, s[0]);
                  ops.connection_into(sigma, m, i, a, s[3]);
                  ops.connection_into(s[3], m + 1, j + 1, b, s[2]);
                  report.check(connection_connection, same(s[0], s[2], m + 2), [&] {
                    return msg("G_" + std::to_string(i) + "^" + detail::sgn(a) + " G_" +
                               std::to_string(j) + "^" + detail::sgn(b));
                  });
                }

          for (int j = 1; j <= m + 1; ++j) {
            ops.degeneracy_into(sigma, m, j, s[1]);
            for (int i = 1; i <= m + 1; ++i)
              for (Sign a : kSigns) {
                ops.connection_into(s[1], m + 1, i, a, s[0]);
                auto name = [&] {
                  return msg("G_" + std::to_string(i) + "^" + detail::sgn(a) + " e_" +
                             std::to_string(j));
                };
                if (i < j) {
                  ops.connection_into(sigma, m, i, a, s[3]);
                  ops.degeneracy_into(s[3], m + 1, j + 1, s[2]);
                  report.check(connection_degeneracy, same(s[0], s[2], m + 2), name);
                } else if (i > j) {
                  ops.connection_into(sigma, m, i - 1, a, s[3]);
                  ops.degeneracy_into(s[3], m + 1, j, s[2]);
                  report.check(connection_degeneracy, same(s[0], s[2], m + 2), name);
                } else {
                  ops.degeneracy_into(sigma, m, i, s[3]);
                  ops.degeneracy_into(s[3], m + 1, i, s[2]);
                  ops.degeneracy_into(s[3], m + 1, i + 1, s[4]);
                  report.check(connection_degeneracy, same(s[0], s[2], m + 2), name);
                  report.check(degeneracy_square, same(s[2], s[4], m + 2), name);
                }
              }
          }
        },
        limits);
  }
  return report;
}

}  // namespace cubhom
