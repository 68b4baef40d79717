#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "steiner/embed.hpp"
#include "steiner/geometry.hpp"
#include "steiner/tree.hpp"

namespace test_support {

using steiner::Point;

inline Point random_point(std::mt19937& rng, std::size_t dim, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> c(dim);
  for (auto& x : c) x = u(rng);
  return Point(std::move(c));
}

inline Point random_direction(std::mt19937& rng, std::size_t dim) {
  std::normal_distribution<double> g;
  std::vector<double> c(dim);
  double n = 0.0;
  for (auto& x : c) {
    x = g(rng);
    n += x * x;
  }
  n = std::sqrt(n);
  for (auto& x : c) x /= n;
  return Point(std::move(c));
}

// Householder reflection I - 2 v v^T applied to p.
inline Point reflect(const Point& p, const Point& unit_v) {
  return p - unit_v * (2.0 * steiner::dot(p, unit_v));
}

// Weighted-average iteration for the point minimizing the summed distance to
// `pts`; started at the centroid and stopped at a vertex if it lands on one.
inline Point geometric_median(const std::vector<Point>& pts, int iterations = 20000) {
  Point x = steiner::centroid(pts);
  for (int it = 0; it < iterations; ++it) {
    Point num = Point::zeros(x.dim());
    double den = 0.0;
    bool hit = false;
    for (const auto& p : pts) {
      const double d = steiner::distance(x, p);
      if (d < 1e-15) {
        hit = true;
        break;
      }
      num += p * (1.0 / d);
      den += 1.0 / d;
    }
    if (hit) break;
    x = num * (1.0 / den);
  }
  return x;
}

// G(n, p) graph with isolated vertices kept.
inline steiner::Graph random_graph(std::mt19937& rng, int n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<steiner::Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v);
    }
  }
  return steiner::Graph(n, std::move(edges));
}

// Random tree over `terminals`: with probability 1/2 a full topology grown by
// subdividing random edges, otherwise a random spanning tree on the terminals
// alone. Steiner points are random convex combinations of the terminals.
inline steiner::SteinerTree random_tree(std::mt19937& rng, const std::vector<Point>& terminals) {
  const int n = static_cast<int>(terminals.size());
  std::vector<steiner::Edge> edges;
  int n_steiner = 0;
  if (n >= 3 && std::bernoulli_distribution(0.5)(rng)) {
    n_steiner = n - 2;
    edges = {{0, n}, {1, n}, {2, n}};
    for (int t = 3; t < n; ++t) {
      const int s = n + (t - 2);
      const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng);
      const auto [a, b] = edges[pick];
      edges[pick] = {std::min(a, s), std::max(a, s)};
      edges.emplace_back(std::min(b, s), std::max(b, s));
      edges.emplace_back(t, s);
    }
  } else {
    for (int v = 1; v < n; ++v) edges.emplace_back(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
  }
  std::vector<Point> positions = terminals;
  std::exponential_distribution<double> w;
  for (int j = 0; j < n_steiner; ++j) {
    Point p = Point::zeros(terminals.front().dim());
    double total = 0.0;
    for (const auto& t : terminals) {
      const double x = w(rng);
      p += t * x;
      total += x;
    }
    positions.push_back(p * (1.0 / total));
  }
  return steiner::make_tree(steiner::Topology(n, n_steiner, std::move(edges)), std::move(positions));
}

// Random triangle-free graph on n vertices: candidate edges in random order,
// each kept with probability p unless it closes a triangle.
inline steiner::Graph random_triangle_free(std::mt19937& rng, int n, double p) {
  std::vector<steiner::Edge> candidates;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) candidates.emplace_back(u, v);
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  std::bernoulli_distribution coin(p);
  std::vector<steiner::Edge> edges;
  for (const auto& [u, v] : candidates) {
    if (!coin(rng)) continue;
    bool closes = false;
    for (int w = 0; w < n && !closes; ++w) closes = adj[u][w] && adj[v][w];
    if (closes) continue;
    adj[u][v] = adj[v][u] = true;
    edges.emplace_back(u, v);
  }
  return steiner::Graph(n, std::move(edges));
}

// Isomorphism of graphs without isolated vertices by trying every bijection
// of the non-isolated vertices.
inline bool isomorphic_graphs(const steiner::Graph& a, const steiner::Graph& b) {
  auto active = [](const steiner::Graph& g) {
    std::vector<int> out;
    for (int v = 0; v < g.n_vertices(); ++v) {
      if (g.degree(v) > 0) out.push_back(v);
    }
    return out;
  };
  const std::vector<int> va = active(a);
  std::vector<int> vb = active(b);
  if (va.size() != vb.size() || a.n_edges() != b.n_edges()) return false;
  do {
    bool ok = true;
    for (std::size_t x = 0; x < va.size() && ok; ++x) {
      for (std::size_t y = x + 1; y < va.size() && ok; ++y) ok = a.has_edge(va[x], va[y]) == b.has_edge(vb[x], vb[y]);
    }
    if (ok) return true;
  } while (std::next_permutation(vb.begin(), vb.end()));
  return false;
}

}  // namespace test_support
