#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cubhom/cube.hpp"
#include "cubhom/graph.hpp"

namespace cubhom {

/// Raised when a configured dimension or cube-count cap would be exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumerationLimits {
  int max_dim = 4;
  std::size_t max_cubes = 10'000'000;  // per dimension
};

namespace detail {

inline void check_dim(int n, const EnumerationLimits& limits) {
  if (n < 0) throw std::invalid_argument("cube dimension must be nonnegative");
  if (n > limits.max_dim || n > kMaxCubeDim)
    throw ResourceLimitError("dimension " + std::to_string(n) + " exceeds the dimension cap " +
                             std::to_string(std::min(limits.max_dim, kMaxCubeDim)));
}

/**
 * Depth-first assignment of values[0], values[1], ... in index order.  The
 * candidates for index b are the common closed neighbours of the values at
 * the already-assigned Hamming neighbours b ^ 2^i (bit i set in b), so every
 * complete assignment is a cube and the visit order is lexicographic.
 *
 * Returns false if `visit` asked to stop.
 */
template <class Visit>
bool backtrack(const Graph& g, int n, Vertex first_lo, Vertex first_hi, Visit&& visit) {
  const std::size_t count = std::size_t{1} << n;
  const std::size_t words = g.words_per_set();
  if (g.vertex_count() == 0 || first_lo >= first_hi) return true;

  std::vector<Vertex> values(count, 0);
  std::vector<std::uint64_t> cand(count * words, 0);
  std::vector<std::size_t> cursor(count, 0);

  auto init = [&](std::size_t b) {
    std::uint64_t* c = cand.data() + b * words;
    if (b == 0) {
      for (std::size_t w = 0; w < words; ++w) c[w] = 0;
      for (Vertex v = first_lo; v < first_hi; ++v) c[v / 64] |= std::uint64_t{1} << (v % 64);
    } else {
      bool first = true;
      for (int i = 0; i < n; ++i) {
        if (!((b >> i) & 1U)) continue;
        auto nb = g.closed_neighborhood(values[b ^ (std::size_t{1} << i)]);
        if (first) {
          for (std::size_t w = 0; w < words; ++w) c[w] = nb[w];
          first = false;
        } else {
          for (std::size_t w = 0; w < words; ++w) c[w] &= nb[w];
        }
      }
    }
    cursor[b] = 0;
  };

  auto next = [&](std::size_t b) -> std::int64_t {
    const std::uint64_t* c = cand.data() + b * words;
    std::size_t pos = cursor[b];
    for (std::size_t w = pos / 64; w < words; ++w) {
      std::uint64_t bits = c[w];
      if (w == pos / 64) bits &= ~std::uint64_t{0} << (pos % 64);
      if (bits) return static_cast<std::int64_t>(w * 64 + std::countr_zero(bits));
    }
    return -1;
  };

  std::size_t b = 0;
  init(0);
  for (;;) {
    auto v = next(b);
    if (v < 0) {
      if (b == 0) return true;
      --b;
      continue;
    }
    values[b] = static_cast<Vertex>(v);
    cursor[b] = static_cast<std::size_t>(v) + 1;
    if (b + 1 == count) {
      if (!visit(std::span<const Vertex>(values.data(), count))) return false;
      continue;
    }
    ++b;
    init(b);
  }
}

}  // namespace detail

/**
 * Streams every n-cube of g to `visit(std::span<const Vertex>)` in
 * lexicographic order without materialising them.  Returns the count.
 * Throws ResourceLimitError once more than limits.max_cubes are produced.
 */
template <class Visit>
std::size_t for_each_cube(const Graph& g, int n, Visit&& visit, const EnumerationLimits& limits = {}) {
  detail::check_dim(n, limits);
  std::size_t count = 0;
  detail::backtrack(g, n, 0, static_cast<Vertex>(g.vertex_count()), [&](std::span<const Vertex> v) {
    if (++count > limits.max_cubes)
      throw ResourceLimitError("more than " + std::to_string(limits.max_cubes) + " cubes in dimension " +
                               std::to_string(n));
    visit(v);
    return true;
  });
  return count;
}

/**
 * All n-cubes of g, each exactly once, sorted lexicographically by values.
 * With workers > 1 the search is split by the value at index 0; partial
 * results are concatenated in vertex order so the output never depends on
 * the worker count.
 */
inline std::vector<SingularCube> enumerate_cubes(const Graph& g, int n,
                                                 const EnumerationLimits& limits = {},
                                                 unsigned workers = 1) {
  detail::check_dim(n, limits);
  const auto nv = static_cast<Vertex>(g.vertex_count());
  std::vector<std::vector<SingularCube>> parts(nv);
  std::atomic<std::size_t> total{0};
  std::atomic<bool> over{false};
  std::atomic<Vertex> next_task{0};

  auto run = [&] {
    for (Vertex v = next_task++; v < nv && !over; v = next_task++) {
      detail::backtrack(g, n, v, v + 1, [&](std::span<const Vertex> values) {
        if (total.fetch_add(1) + 1 > limits.max_cubes) {
          over = true;
          return false;
        }
        parts[v].emplace_back(n, values);
        return true;
      });
    }
  };

  if (workers <= 1 || nv <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < std::min<unsigned>(workers, nv); ++w) pool.emplace_back(run);
  }
  if (over)
    throw ResourceLimitError("more than " + std::to_string(limits.max_cubes) + " cubes in dimension " +
                             std::to_string(n));

  std::vector<SingularCube> out;
  out.reserve(total.load());
  for (auto& p : parts)
    for (auto& c : p) out.push_back(std::move(c));
  return out;
}

}  // namespace cubhom
