// Independent reference computations for the tests. Nothing here uses the
// library's elimination, transfer or synthesis code: vectors are plain
// std::vector<int64_t>, and answers come from enumeration or direct counting.
#ifndef SUMNET_TESTS_ORACLES_HPP
#define SUMNET_TESTS_ORACLES_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "sumnet/coding.hpp"

namespace oracle {

using Vec = std::vector<std::int64_t>;
using Rows = std::vector<Vec>;

inline std::int64_t mod(std::int64_t a, std::int64_t p) { return ((a % p) + p) % p; }

/// Calls f with every vector in {0..p-1}^n.
inline void for_each_vector(std::size_t n, std::int64_t p, const std::function<void(const Vec&)>& f) {
  Vec v(n, 0);
  while (true) {
    f(v);
    std::size_t i = 0;
    while (i < n && ++v[i] == p) v[i++] = 0;
    if (i == n) return;
  }
}

/// Size of the row space, found by enumerating every coefficient vector.
inline std::size_t row_space_size(const Rows& rows, std::int64_t p, std::size_t cols) {
  std::set<Vec> seen;
  for_each_vector(rows.size(), p, [&](const Vec& coeff) {
    Vec acc(cols, 0);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) acc[j] = mod(acc[j] + coeff[i] * rows[i][j], p);
    seen.insert(acc);
  });
  return seen.size();
}

inline std::size_t rank(const Rows& rows, std::int64_t p, std::size_t cols) {
  std::size_t size = row_space_size(rows, p, cols);
  std::size_t r = 0;
  while (size > 1) {
    size /= static_cast<std::size_t>(p);
    ++r;
  }
  return r;
}

/// Every D (d_rows x a.size()) with D * A = B, by enumeration.
inline std::vector<Rows> solutions(const Rows& a, const Rows& b, std::int64_t p, std::size_t cols) {
  const std::size_t n = a.size();
  const std::size_t d_rows = b.size();
  std::vector<Rows> out;
  for_each_vector(d_rows * n, p, [&](const Vec& flat) {
    for (std::size_t i = 0; i < d_rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        std::int64_t s = 0;
        for (std::size_t k = 0; k < n; ++k) s += flat[i * n + k] * a[k][j];
        if (mod(s, p) != mod(b[i][j], p)) return;
      }
    Rows d(d_rows, Vec(n));
    for (std::size_t i = 0; i < d_rows; ++i)
      for (std::size_t k = 0; k < n; ++k) d[i][k] = flat[i * n + k];
    out.push_back(std::move(d));
  });
  return out;
}

inline std::int64_t choose2(std::int64_t m) { return m * (m - 1) / 2; }

struct Counts {
  std::int64_t sources = 0;
  std::int64_t terminals = 0;
  std::int64_t intermediates = 0;
  std::int64_t middles = 0;
  std::int64_t edges = 0;
};

// Closed forms from the construction lists: listed edges plus, for each
// terminal, one direct edge per source outside the union of its taps' reach.
inline Counts n1_counts(std::int64_t m, std::int64_t q) {
  const std::int64_t w = q + 1;
  const std::int64_t mid = m * w;
  const std::int64_t triples = choose2(m) * w;
  const std::int64_t s = m + mid + triples;
  Counts c;
  c.sources = s;
  c.terminals = s;
  c.intermediates = 2 * mid;
  c.middles = mid;
  const std::int64_t listed = 5 * mid + 4 * triples;
  const std::int64_t reach = m + 1;  // |S_ij|
  const std::int64_t direct = m * (s - (1 + mid)) + mid * (s - reach) + triples * (s - (2 * reach - 1));
  c.edges = listed + direct;
  return c;
}

inline Counts n2_counts(std::int64_t m, std::int64_t q) {
  const std::int64_t w = q + 1;
  const std::int64_t mid = m * w;
  const std::int64_t triples = choose2(m) * w;
  const std::int64_t s = mid + triples;
  Counts c;
  c.sources = s;
  c.terminals = m + mid + triples + choose2(m);
  c.intermediates = 2 * mid;
  c.middles = mid;
  const std::int64_t listed = mid + mid * q + triples * 2 * q + 2 * mid + 2 * triples + mid * (m - 1);
  const std::int64_t reach = q * m;  // |S_ij|
  const std::int64_t direct = m * (s - mid) + mid * (s - reach) + triples * (s - (2 * reach - q)) +
                              choose2(m) * (s - w * (2 * m - 1));
  c.edges = listed + direct;
  return c;
}

/// Bottleneck2 at (1,1): enumerate every scalar encoder (two source edges, the
/// middle edge's two local coefficients, the two tap edges) and both decoders;
/// returns the distinct composites (coefficient of X1, of X2 on the middle
/// edge) that belong to at least one solution.
inline std::set<std::pair<std::int64_t, std::int64_t>> bottleneck2_solution_composites(std::int64_t p) {
  std::set<std::pair<std::int64_t, std::int64_t>> out;
  for_each_vector(8, p, [&](const Vec& v) {
    const std::int64_t a = v[0], b = v[1], c1 = v[2], c2 = v[3], e1 = v[4], e2 = v[5], d1 = v[6], d2 = v[7];
    const std::int64_t x1 = mod(c1 * a, p);
    const std::int64_t x2 = mod(c2 * b, p);
    auto decodes = [&](std::int64_t e, std::int64_t d) { return mod(d * e * x1, p) == 1 && mod(d * e * x2, p) == 1; };
    if (decodes(e1, d1) && decodes(e2, d2)) out.insert({x1, x2});
  });
  return out;
}

/// Runs the code on concrete source blocks by propagating messages edge by
/// edge (recursively, memoized), and checks that every terminal outputs the
/// sum. Uses only the code's raw entries.
inline bool simulate(const sumnet::SumNetwork& net, const sumnet::FracLinCode& code, std::uint64_t seed, int trials = 3) {
  using namespace sumnet;
  const std::int64_t p = static_cast<std::int64_t>(code.field.modulus());
  auto apply = [p](const Mat& m, const Vec& x) {
    const auto e = m.entries();
    Vec y(static_cast<std::size_t>(m.rows()), 0);
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j)
        y[static_cast<std::size_t>(i)] = mod(y[static_cast<std::size_t>(i)] + e[static_cast<std::size_t>(i * m.cols() + j)] * x[static_cast<std::size_t>(j)], p);
    return y;
  };
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::map<std::size_t, Vec> x;
    Vec sum(static_cast<std::size_t>(code.r), 0);
    for (NodeId s : net.sources()) {
      Vec v(static_cast<std::size_t>(code.r));
      for (auto& c : v) c = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p));
      for (std::size_t i = 0; i < v.size(); ++i) sum[i] = mod(sum[i] + v[i], p);
      x[s.index] = std::move(v);
    }
    std::map<std::size_t, Vec> memo;
    std::function<Vec(EdgeId)> message = [&](EdgeId e) -> Vec {
      if (auto it = memo.find(e.index); it != memo.end()) return it->second;
      const Edge& edge = net.edge(e);
      const auto& maps = code.edge_maps[e.index];
      Vec y(static_cast<std::size_t>(code.l), 0);
      if (net.node(edge.tail).role == Role::Source) {
        y = apply(maps.front(), x[edge.tail.index]);
      } else {
        const auto in = net.in_edges(edge.tail);
        for (std::size_t k = 0; k < in.size(); ++k) {
          const Vec part = apply(maps[k], message(in[k]));
          for (std::size_t i = 0; i < y.size(); ++i) y[i] = mod(y[i] + part[i], p);
        }
      }
      memo[e.index] = y;
      return y;
    };
    for (NodeId term : net.terminals()) {
      Vec z(static_cast<std::size_t>(code.r), 0);
      const auto in = net.in_edges(term);
      for (std::size_t k = 0; k < in.size(); ++k) {
        const Vec part = apply(code.decoders[term.index][k], message(in[k]));
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = mod(z[i] + part[i], p);
      }
      if (z != sum) return false;
    }
  }
  return true;
}

}  // namespace oracle

#endif  // SUMNET_TESTS_ORACLES_HPP
