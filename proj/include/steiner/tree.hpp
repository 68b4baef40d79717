#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "steiner/geometry.hpp"
#include "steiner/topology.hpp"

namespace steiner {

/// Steiner–Steiner edges shorter than this are reported as collapsed.
inline constexpr double kCollapseTolerance = 1e-9;

/// A topology with coordinates for every node. positions is indexed by node
/// index, so terminals come first.
struct SteinerTree {
  Topology topology;
  std::vector<Point> positions;
  double cost = 0.0;
  bool converged = true;
  /// Last relative cost change of the optimizer (0 for constructed trees).
  double residual = 0.0;
  /// Dual lower bound on the relatively minimal cost, NaN when not computed.
  double lower_bound = std::numeric_limits<double>::quiet_NaN();
  std::vector<Edge> collapsed;

  const Point& position(int node) const { return positions[static_cast<std::size_t>(node)]; }
  std::span<const Point> terminals() const {
    return std::span<const Point>(positions).first(static_cast<std::size_t>(topology.n_terminals()));
  }
  std::size_t dim() const { return positions.front().dim(); }
  double edge_length(const Edge& e) const { return distance(position(e.first), position(e.second)); }
  double recompute_cost() const;
};

/// Builds a tree from explicit coordinates and fills cost and collapsed edges.
/// Throws DimensionError when the position count or dimensions disagree.
SteinerTree make_tree(Topology topology, std::vector<Point> positions);

/// Steiner–Steiner edges of `tree` shorter than `tol`.
std::vector<Edge> collapsed_edges(const SteinerTree& tree, double tol = kCollapseTolerance);

/// True when terminal i of `tree` is the basis vector e_i of R^n.
bool has_simplex_terminals(const SteinerTree& tree);

/// For every Steiner node, the partition of the terminals induced by its
/// branches, as a canonical string. Two trees over the same terminals whose
/// topologies agree up to Steiner relabeling have the same signature set.
std::vector<std::string> steiner_signatures(const Topology& t);

/// map[j] = Steiner index in `b` matching Steiner j of `a` by signature.
/// Throws TopologyError when the topologies differ.
std::vector<int> align_steiner(const Topology& a, const Topology& b);

/// Largest distance between matched Steiner points of two trees on the same
/// topology up to Steiner relabeling.
double max_steiner_displacement(const SteinerTree& a, const SteinerTree& b);

}  // namespace steiner
