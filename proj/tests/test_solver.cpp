#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "steiner/solver.hpp"
#include "support.hpp"

using namespace steiner;
using test_support::random_point;

namespace {

// Barycentric coordinates of x with respect to d+1 affinely independent
// points in R^d, by Gaussian elimination with partial pivoting.
std::vector<double> barycentric(const std::vector<Point>& simplex, const Point& x) {
  const std::size_t n = simplex.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r][c] = r + 1 < n ? simplex[c][r] : 1.0;
    a[r][n] = r + 1 < n ? x[r] : 1.0;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
    std::swap(a[c], a[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) out[r] = a[r][n] / a[r][r];
  return out;
}

// Cost of a four-terminal tree pairing (a, b) at s and (c, d) at t.
double pair_cost(const std::array<Point, 4>& p, const std::array<double, 4>& x) {
  auto d = [](double x0, double y0, const Point& q) { return std::hypot(x0 - q[0], y0 - q[1]); };
  return d(x[0], x[1], p[0]) + d(x[0], x[1], p[1]) + std::hypot(x[0] - x[2], x[1] - x[3]) + d(x[2], x[3], p[2]) +
         d(x[2], x[3], p[3]);
}

// Coarse-to-fine grid search over both Steiner points for one pairing. The
// cost is convex in the Steiner positions, so shrinking around the grid
// minimum keeps the global minimum inside the box.
double grid_oracle(const std::array<Point, 4>& p) {
  constexpr int kSteps = 20;
  std::array<double, 4> center{0.5, 0.5, 0.5, 0.5};
  double half = 0.5;
  double best = pair_cost(p, center);
  for (int level = 0; level < 14; ++level) {
    std::array<double, 4> best_x = center;
    std::array<double, 4> x{};
    for (int i0 = 0; i0 <= kSteps; ++i0) {
      x[0] = center[0] - half + 2 * half * i0 / kSteps;
      for (int i1 = 0; i1 <= kSteps; ++i1) {
        x[1] = center[1] - half + 2 * half * i1 / kSteps;
        for (int i2 = 0; i2 <= kSteps; ++i2) {
          x[2] = center[2] - half + 2 * half * i2 / kSteps;
          for (int i3 = 0; i3 <= kSteps; ++i3) {
            x[3] = center[3] - half + 2 * half * i3 / kSteps;
            const double c = pair_cost(p, x);
            if (c < best) {
              best = c;
              best_x = x;
            }
          }
        }
      }
    }
    center = best_x;
    half *= 0.25;
  }
  return best;
}

void check_fixed_point(const SteinerTree& tree) {
  const Topology& t = tree.topology;
  for (int v = t.n_terminals(); v < t.n_nodes(); ++v) {
    const auto& nb = t.neighbors(v);
    std::vector<double> out(tree.dim());
    detail::fermat_into(tree.position(nb[0]).coords(), tree.position(nb[1]).coords(),
                        tree.position(nb[2]).coords(), out);
    CHECK(distance(Point(out), tree.position(v)) < 1e-8);
  }
}

}  // namespace

TEST_CASE("relatively minimal trees on small simplices") {
  SUBCASE("3-simplex star") {
    const auto tree = relatively_minimal(simplex_points(3), conjectured_topology(3));
    CHECK(tree.converged);
    for (std::size_t i = 0; i < 3; ++i) CHECK(tree.position(3)[i] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(tree.cost == doctest::Approx(std::sqrt(6.0)).epsilon(1e-12));
  }
  SUBCASE("4-simplex") {
    const auto tree = relatively_minimal(simplex_points(4), conjectured_topology(4));
    CHECK(tree.converged);
    const double a = 0.5 - 1 / (2 * std::sqrt(6.0));
    const double b = 1 / (2 * std::sqrt(6.0));
    std::vector<std::vector<double>> expected{{a, a, b, b}, {b, b, a, a}};
    std::vector<std::vector<double>> got;
    for (int j = 0; j < 2; ++j) got.push_back(tree.position(4 + j).values());
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t i = 0; i < 4; ++i) CHECK(got[j][i] == doctest::Approx(expected[j][i]).epsilon(1e-10));
    CHECK(tree.cost == doctest::Approx(4 * std::sqrt(2.0 / 3) + 2 * (0.5 - 1 / std::sqrt(6.0))).epsilon(1e-12));
    CHECK(tree.cost == doctest::Approx(3.4494897).epsilon(1e-7));
  }
  SUBCASE("6-simplex") {
    const auto tree = relatively_minimal(simplex_points(6), conjectured_topology(6));
    CHECK(tree.converged);
    const double closed = 6 * std::sqrt(2.0 / 3) + 3 * (1 / std::sqrt(3.0) - 1 / std::sqrt(6.0));
    CHECK(tree.cost == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("solver output invariants") {
  std::mt19937 rng(99);
  std::vector<std::pair<std::vector<Point>, Topology>> cases;
  for (int d = 3; d <= 7; ++d) cases.emplace_back(simplex_points(d), conjectured_topology(d));
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 5;
    const std::size_t dim = 2 + trial % 4;
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back(random_point(rng, dim));
    const auto topologies = enumerate_full_topologies(n);
    cases.emplace_back(pts, topologies[static_cast<std::size_t>(trial) % topologies.size()]);
  }

  for (const auto& [terminals, topology] : cases) {
    const auto tree = relatively_minimal(terminals, topology);
    CHECK(tree.converged);
    for (int i = 0; i < topology.n_terminals(); ++i) CHECK(tree.position(i) == terminals[static_cast<std::size_t>(i)]);
    CHECK(std::abs(tree.cost - tree.recompute_cost()) <= 1e-12 * tree.cost);
    CHECK(tree.lower_bound <= tree.cost + 1e-12);
    CHECK(tree.cost - tree.lower_bound <= kGapCertificate * tree.cost);
    CHECK(tree.collapsed == collapsed_edges(tree));
    check_fixed_point(tree);

    // Uniqueness probe: a random start converges to the same tree.
    std::vector<Point> start;
    for (int j = 0; j < topology.n_steiner(); ++j) start.push_back(random_point(rng, terminals.front().dim(), -2, 2));
    const auto other = relatively_minimal(terminals, topology, SolveOptions{}, start);
    CHECK(other.cost == doctest::Approx(tree.cost).epsilon(1e-8));
    CHECK(max_steiner_displacement(tree, other) < 1e-6);
  }
}

TEST_CASE("Steiner points stay in the convex hull") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 3 + trial % 2;
    std::vector<Point> pts;
    for (int i = 0; i <= dim; ++i) pts.push_back(random_point(rng, static_cast<std::size_t>(dim)));
    const auto report = optimal_steiner_tree(pts);
    for (int v = report.best.topology.n_terminals(); v < report.best.topology.n_nodes(); ++v) {
      const auto lambda = barycentric(pts, report.best.position(v));
      for (double l : lambda) CHECK(l >= -1e-9);
    }
  }
  for (int d = 3; d <= 7; ++d) {
    const auto tree = relatively_minimal(simplex_points(d), conjectured_topology(d));
    for (int v = d; v < tree.topology.n_nodes(); ++v) {
      double sum = 0.0;
      for (std::size_t i = 0; i < tree.dim(); ++i) {
        CHECK(tree.position(v)[i] >= -1e-9);
        sum += tree.position(v)[i];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("sweep cost is non-increasing in the sweep budget") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 7; ++i) pts.push_back(random_point(rng, 4));
    const Topology t = enumerate_full_topologies(7)[static_cast<std::size_t>(trial) * 97];
    double previous = HUGE_VAL;
    for (int sweeps = 1; sweeps <= 60; ++sweeps) {
      SolveOptions options;
      options.max_sweeps = sweeps;
      options.gap_tol = HUGE_VAL;
      const double cost = relatively_minimal(pts, t, options).cost;
      CHECK(cost <= previous + 1e-15 * previous);
      previous = cost;
    }
  }
}

TEST_CASE("degenerate topologies collapse and still converge") {
  // Pairing the diagonals of the unit square forces both Steiner points to
  // the center.
  const std::vector<Point> square{Point{0, 0}, Point{1, 1}, Point{1, 0}, Point{0, 1}};
  const Topology crossed(4, 2, {{0, 4}, {1, 4}, {4, 5}, {2, 5}, {3, 5}});
  const auto tree = relatively_minimal(square, crossed);
  CHECK(tree.converged);
  CHECK(tree.cost == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-10));
  CHECK(tree.collapsed.size() == 1);
  CHECK(tree.edge_length({4, 5}) < 1e-9);

  // A wide angle pins the Steiner point to a terminal.
  const auto pinned = relatively_minimal({Point{0, 0}, Point{1, 0}, Point{-1, 0.1}}, conjectured_topology(3));
  CHECK(pinned.converged);
  CHECK(distance(pinned.position(3), Point{0, 0}) < 1e-9);
  CHECK(pinned.cost == doctest::Approx(1 + std::hypot(1.0, 0.1)).epsilon(1e-10));
}

TEST_CASE("relatively_minimal argument errors") {
  CHECK_THROWS_AS(relatively_minimal(simplex_points(3), conjectured_topology(4)), SizeError);
  CHECK_THROWS_AS(relatively_minimal({Point{0, 0}, Point{1, 0}, Point{0, 0, 1}}, conjectured_topology(3)),
                  DimensionError);
  CHECK_THROWS_AS(relatively_minimal(simplex_points(4), Topology(4, 1, {{0, 4}, {1, 4}, {2, 4}, {3, 4}})),
                  TopologyError);
  CHECK_THROWS(relatively_minimal(simplex_points(3), conjectured_topology(3), -1.0));
}

TEST_CASE("dual lower bound never exceeds the minimum") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(random_point(rng, 3));
    const Topology t = enumerate_full_topologies(6)[static_cast<std::size_t>(trial) * 5];
    const auto tree = relatively_minimal(pts, t);
    auto moved = tree.positions;
    for (int v = 6; v < t.n_nodes(); ++v) moved[static_cast<std::size_t>(v)] += random_point(rng, 3, -0.3, 0.3);
    CHECK(dual_lower_bound(make_tree(t, moved)) <= tree.cost + 1e-12);
    CHECK(tree.cost - dual_lower_bound(tree) <= kGapCertificate * tree.cost);
  }
}

TEST_CASE("mst_cost") {
  for (int d = 2; d <= 10; ++d) CHECK(mst_cost(simplex_points(d)) == doctest::Approx((d - 1) * std::sqrt(2.0)));
  CHECK(mst_cost({Point{0.0}, Point{1.0}}) == 1.0);
  CHECK(mst_cost({Point{0, 0}, Point{1, 0}, Point{2, 0}, Point{2, 5}}) == doctest::Approx(7.0));
  // Embedded star with m edges: e_center + e_i.
  for (int m = 2; m <= 6; ++m) {
    std::vector<Point> pts;
    for (int i = 1; i <= m; ++i) pts.push_back(Point::basis(static_cast<std::size_t>(m + 1), 0) +
                                               Point::basis(static_cast<std::size_t>(m + 1), static_cast<std::size_t>(i)));
    CHECK(mst_cost(pts) == doctest::Approx((m - 1) * std::sqrt(2.0)).epsilon(1e-14));
  }
}

TEST_CASE("exact search on regular simplices") {
  CHECK(steiner_ratio(simplex_points(3)) == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
  CHECK(std::abs(steiner_ratio(simplex_points(4)) - 0.8130524) < 1e-6);
  for (int d = 3; d <= 7; ++d) {
    const auto report = optimal_steiner_tree(simplex_points(d));
    CHECK(report.best.converged);
    CHECK(isomorphic(report.best.topology, conjectured_topology(d)));
    double min_cost = HUGE_VAL;
    for (const auto& c : report.all_costs) min_cost = std::min(min_cost, c.cost);
    CHECK(report.best.cost == doctest::Approx(min_cost).epsilon(1e-12));
    CHECK(std::find(report.ties.begin(), report.ties.end(), report.best_id) != report.ties.end());
  }
}

TEST_CASE("exact search matches a grid-search oracle in the plane") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    std::array<Point, 4> p{random_point(rng, 2, 0, 1), random_point(rng, 2, 0, 1), random_point(rng, 2, 0, 1),
                           random_point(rng, 2, 0, 1)};
    double oracle = HUGE_VAL;
    for (const auto& pairing : {std::array<int, 4>{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}) {
      oracle = std::min(oracle, grid_oracle({p[pairing[0]], p[pairing[1]], p[pairing[2]], p[pairing[3]]}));
    }
    const auto report = optimal_steiner_tree({p[0], p[1], p[2], p[3]});
    CHECK(std::abs(report.best.cost - oracle) < 1e-3);
    CHECK(report.best.cost <= oracle + 1e-9);
  }
}

TEST_CASE("exact search is independent of the worker count") {
  SolveOptions one;
  one.workers = 1;
  SolveOptions many;
  many.workers = 4;
  std::mt19937 rng(5);
  std::vector<Point> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(random_point(rng, 3));
  const auto a = optimal_steiner_tree(pts, one);
  const auto b = optimal_steiner_tree(pts, many);
  CHECK(a.best_id == b.best_id);
  CHECK(a.ties == b.ties);
  CHECK(a.best.positions == b.best.positions);
  REQUIRE(a.all_costs.size() == b.all_costs.size());
  for (std::size_t i = 0; i < a.all_costs.size(); ++i) CHECK(a.all_costs[i].cost == b.all_costs[i].cost);
}

TEST_CASE("exact search limits") {
  CHECK_THROWS_AS(optimal_steiner_tree(simplex_points(2)), SizeError);
  CHECK_THROWS_AS(optimal_steiner_tree(simplex_points(10)), SizeError);
  SolveOptions options;
  options.cap = 5;
  CHECK_THROWS_AS(optimal_steiner_tree(simplex_points(6), options), SizeError);
}

TEST_CASE("resolve_workers") {
  CHECK(resolve_workers(3) == 3);
  CHECK(resolve_workers(0) >= 1);
}
