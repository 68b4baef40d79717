#include "steiner/construct.hpp"

#include <algorithm>
#include <string>

#include "steiner/solver.hpp"

namespace steiner {

namespace {

const double kInvSqrt6 = 1.0 / std::sqrt(6.0);

std::vector<Point> basis_terminals(int d) { return simplex_points(d); }

double min_angle(const SteinerTree& tree) {
  double best = 180.0;
  const Topology& t = tree.topology;
  for (int v = 0; v < t.n_nodes(); ++v) {
    const auto& nb = t.neighbors(v);
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        const Point u = tree.position(nb[a]) - tree.position(v);
        const Point w = tree.position(nb[b]) - tree.position(v);
        if (u.norm() < kCollapseTolerance || w.norm() < kCollapseTolerance) continue;
        best = std::min(best, detail::angle_rad(u.coords(), w.coords()) * 180.0 / std::numbers::pi);
      }
    }
  }
  return best;
}

}  // namespace

CandidateTree make_candidate(SteinerTree tree, std::vector<double> fermat_margins) {
  CandidateTree out{std::move(tree), 180.0, false, false, {}};
  const Topology& t = out.tree.topology;
  out.min_angle_deg = min_angle(out.tree);
  out.steiner_degrees_ok = true;
  out.terminals_are_leaves = true;
  for (int v = 0; v < t.n_nodes(); ++v) {
    if (t.is_terminal(v)) {
      out.terminals_are_leaves = out.terminals_are_leaves && t.degree(v) == 1;
    } else {
      out.steiner_degrees_ok = out.steiner_degrees_ok && t.degree(v) == 3;
    }
  }
  out.fermat_margins = std::move(fermat_margins);
  return out;
}

SteinerTree simplex_base_tree(int d) {
  if (d < 3) throw SizeError("simplex_base_tree: need d >= 3");
  if (d == 3) {
    const Topology star(3, 1, {{0, 3}, {1, 3}, {2, 3}});
    auto positions = basis_terminals(3);
    positions.push_back(Point{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    return make_tree(star, std::move(positions));
  }
  if (d == 4) return pow2_simplex_tree(2).tree;
  return optimal_steiner_tree(basis_terminals(d)).best;
}

CandidateTree double_tree(const SteinerTree& t) {
  const Topology& old = t.topology;
  const int d = old.n_terminals();
  if (d < 3) throw SizeError("double_tree: need at least 3 terminals");
  if (!old.is_full()) throw TopologyError("double_tree: input topology is not full");
  if (!has_simplex_terminals(t)) {
    throw ConstructionError("double_tree: terminals must be the basis vectors of R^" + std::to_string(d));
  }

  const int nd = 2 * d;
  const int old_steiner = old.n_steiner();
  auto split_index = [&](int old_node) { return nd + (old_node - d); };
  auto new_index = [&](int old_terminal) { return nd + old_steiner + old_terminal; };

  std::vector<Point> positions = basis_terminals(nd);
  positions.reserve(static_cast<std::size_t>(nd + old_steiner + d));
  for (int j = 0; j < old_steiner; ++j) positions.push_back(split(t.position(old.steiner_node(j))));

  std::vector<double> margins(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const int neighbour = old.neighbors(i).front();
    const Point& s_split = positions[static_cast<std::size_t>(split_index(neighbour))];
    const Point c = split(t.position(i));
    margins[static_cast<std::size_t>(i)] = distance(c, s_split);
    if (!(margins[static_cast<std::size_t>(i)] > kInvSqrt6)) {
      throw ConstructionError("double_tree: no Fermat point for terminal T" + std::to_string(i) + " (margin " +
                              std::to_string(margins[static_cast<std::size_t>(i)]) + " <= 1/sqrt(6))");
    }
    const FermatResult f = fermat_point(positions[static_cast<std::size_t>(2 * i)],
                                        positions[static_cast<std::size_t>(2 * i + 1)], s_split);
    if (!f.is_interior) {
      throw ConstructionError("double_tree: Fermat point for terminal T" + std::to_string(i) +
                              " coincides with a vertex");
    }
    positions.push_back(f.point);
  }

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(nd + old_steiner + d - 1));
  for (const auto& [u, v] : old.edges()) {
    if (!old.is_terminal(u) && !old.is_terminal(v)) {
      edges.emplace_back(split_index(u), split_index(v));
      continue;
    }
    const int terminal = old.is_terminal(u) ? u : v;
    const int steiner = terminal == u ? v : u;
    edges.emplace_back(2 * terminal, new_index(terminal));
    edges.emplace_back(2 * terminal + 1, new_index(terminal));
    edges.emplace_back(split_index(steiner), new_index(terminal));
  }
  return make_candidate(make_tree(Topology(nd, old_steiner + d, std::move(edges)), std::move(positions)),
                        std::move(margins));
}

CandidateTree iterate_double(const SteinerTree& t, int k) {
  if (k < 0) throw std::invalid_argument("iterate_double: k must be non-negative");
  CandidateTree current = make_candidate(t);
  for (int step = 0; step < k; ++step) current = double_tree(current.tree);
  return current;
}

CandidateTree pow2_simplex_tree(int k) {
  if (k < 2) throw SizeError("pow2_simplex_tree: need k >= 2");
  if (k > 20) throw SizeError("pow2_simplex_tree: k too large");
  const int d = 1 << k;

  // Steiner labels of length 1..k-1 in BFS order: the label of length j with
  // value v has index (2^j - 2) + v.
  auto steiner_index = [&](int length, int value) { return d + (1 << length) - 2 + value; };

  // Coordinates along the all-zero branch, one vector per label length.
  std::vector<std::vector<double>> zero_branch(static_cast<std::size_t>(k));
  {
    const double a = 0.5 - 0.5 * kInvSqrt6;
    const double b = 0.5 * kInvSqrt6;
    const double scale = 1.0 / static_cast<double>(1 << (k - 2));
    auto& s = zero_branch[1];
    s.assign(static_cast<std::size_t>(d), scale * b);
    std::fill(s.begin(), s.begin() + d / 2, scale * a);
  }
  for (int j = 2; j <= k - 1; ++j) {
    const double prefix = (0.5 - 0.5 / std::numbers::sqrt2) / static_cast<double>(1 << (k - j - 1));
    const int width = 1 << (k - j);
    auto& s = zero_branch[static_cast<std::size_t>(j)];
    s.resize(static_cast<std::size_t>(d));
    for (int y = 0; y < d; ++y) {
      s[static_cast<std::size_t>(y)] =
          zero_branch[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(y)] / std::numbers::sqrt2 +
          (y < width ? prefix : 0.0);
    }
  }

  std::vector<Point> positions = basis_terminals(d);
  std::vector<Edge> edges;
  for (int length = 1; length <= k - 1; ++length) {
    const auto& base = zero_branch[static_cast<std::size_t>(length)];
    for (int value = 0; value < (1 << length); ++value) {
      const int mask = value << (k - length);
      std::vector<double> coords(static_cast<std::size_t>(d));
      for (int y = 0; y < d; ++y) coords[static_cast<std::size_t>(y)] = base[static_cast<std::size_t>(y ^ mask)];
      positions.emplace_back(std::move(coords));
    }
  }
  edges.emplace_back(steiner_index(1, 0), steiner_index(1, 1));
  for (int length = 1; length <= k - 1; ++length) {
    for (int value = 0; value < (1 << length); ++value) {
      for (int bit = 0; bit < 2; ++bit) {
        const int child = 2 * value + bit;
        edges.emplace_back(steiner_index(length, value),
                           length + 1 == k ? child : steiner_index(length + 1, child));
      }
    }
  }
  return make_candidate(make_tree(Topology(d, d - 2, std::move(edges)), std::move(positions)));
}

RatioSequence ratio_sequence(double l0, int d, int K) {
  if (d < 3) throw SizeError("ratio_sequence: need d >= 3");
  if (!(l0 > 0.0 && l0 <= 1.0)) throw std::invalid_argument("ratio_sequence: l0 must lie in (0, 1]");
  if (K < 0) throw std::invalid_argument("ratio_sequence: K must be non-negative");
  RatioSequence seq;
  seq.d0 = d;
  seq.values.reserve(static_cast<std::size_t>(K) + 1);
  seq.values.push_back(l0);
  seq.warning = l0 <= kRatioLimit;
  const double sqrt_two_thirds = std::sqrt(2.0 / 3.0);
  double D = d;
  for (int k = 0; k < K; ++k) {
    const double l = seq.values.back();
    const double next = (l * (D - 1.0) - D * kInvSqrt6 + 2.0 * D * sqrt_two_thirds) /
                        ((2.0 * D - 1.0) * std::numbers::sqrt2);
    seq.values.push_back(next);
    D *= 2.0;
  }
  return seq;
}

double simplex_ratio(const SteinerTree& tree) {
  return tree.cost / ((tree.topology.n_terminals() - 1) * std::numbers::sqrt2);
}

}  // namespace steiner
