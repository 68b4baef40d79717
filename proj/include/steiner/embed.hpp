#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "steiner/solver.hpp"
#include "steiner/tree.hpp"

namespace steiner {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Simple undirected graph on vertices 0..n-1. Edges are stored with
/// first < second in the order given.
class Graph {
 public:
  Graph() = default;
  /// Throws GraphError on loops, repeated edges, or out-of-range endpoints.
  Graph(int n_vertices, std::vector<Edge> edges);

  int n_vertices() const { return n_vertices_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
  bool has_edge(int u, int v) const;

 private:
  int n_vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

Graph star_graph(int m);
Graph cycle_graph(int n);
Graph path_graph(int n);

inline const double kUnitScale = 1.0 / std::numbers::sqrt2;

/// One point per edge, in edge order: edge (i, j) maps to scale (e_i + e_j).
struct EmbeddedConfig {
  std::vector<Point> points;
  double scale = 1.0;
  Graph source;
};

/// scale must be 1 or 1/sqrt(2).
EmbeddedConfig embed_graph(const Graph& g, double scale = 1.0);

/// N[i] and N[j] share no vertex.
bool disjoint_closed_neighborhoods(const Graph& g, int i, int j);
/// The lexicographically first such pair, if any.
std::optional<std::pair<int, int>> find_disjoint_pair(const Graph& g);

/// Hop diameter, or -1 when the graph without isolated vertices is
/// disconnected.
int diameter(const Graph& g);

/// Sets x_i = max(x_i, x_j) and then x_j = 0 on every point. Throws
/// GraphError unless i and j have disjoint closed neighborhoods.
std::vector<Point> contract_pair(const Graph& g, const std::vector<Point>& points, int i, int j);

/// The graph whose embedding contract_pair produces: edges at j move to i.
Graph contract_graph(const Graph& g, int i, int j);

/// True when some edge joins a terminal p and a Steiner point s with
/// min(p_i, p_j) = 0 and s_i, s_j > 0; contract_pair then strictly shortens
/// the tree.
bool contraction_is_strict(const SteinerTree& tree, int i, int j);

/// Isomorphism-invariant string: sorted per-component minimum adjacency
/// strings over all vertex orders. Isolated vertices are ignored.
std::string canonical_form(const Graph& g);

/// All graphs with m edges and no isolated vertices, one per isomorphism
/// class, in canonical-form order.
std::vector<Graph> enumerate_graphs(int m);

struct ScanEntry {
  Graph graph;
  std::string canonical;
  bool is_star = false;
  /// Vertices with disjoint closed neighborhoods; such graphs are pruned.
  std::optional<std::pair<int, int>> pruned_by;
  int diameter = 0;
  bool solved = false;
  double cost = std::nan("");
  double mst = 0.0;
};

struct ScanOptions {
  int cap = 6;
  /// Also solve pruned graphs (cross-check).
  bool solve_pruned = false;
  double tie_tol = 1e-9;
  SolveOptions solve;
};

struct ScanReport {
  int m = 0;
  std::vector<ScanEntry> entries;
  double star_cost = 0.0;
  /// Star cost <= every solved cost + tie_tol.
  bool star_minimal = false;
  /// Indices into entries of non-star graphs tied with the star.
  std::vector<int> ties;
  /// Index into entries of a graph beating the star, if any.
  std::optional<int> counterexample;
};

ScanReport star_scan(int m, const ScanOptions& options = {});

std::optional<std::array<int, 3>> find_triangle(const Graph& g);

struct ReductionInstance {
  EmbeddedConfig config;
  int m = 0;
  Graph source;
  bool triangle_free = true;
};

/// Scale-1/sqrt(2) embedding of a triangle-free graph. Throws GraphError
/// naming the triangle otherwise.
ReductionInstance make_reduction_instance(const Graph& g);

struct PartitionCheck {
  bool ok = false;
  /// Covering vertex per part, sorted and deduplicated, when ok.
  std::vector<int> cover;
  /// Index of the offending part and the point indices witnessing it.
  int part = -1;
  std::vector<int> offending;
  std::string violation;
};

/// Checks that every part's edges pairwise share a vertex and have a common
/// vertex; returns the induced vertex cover. Throws GraphError when the parts
/// do not split the point indices.
PartitionCheck partition_to_cover(const ReductionInstance& instance, const std::vector<std::vector<int>>& partition);

/// Assigns each edge to its lowest-index endpoint in `cover`. Throws
/// GraphError naming an uncovered edge.
std::vector<std::vector<int>> cover_to_partition(const ReductionInstance& instance, const std::vector<int>& cover);

}  // namespace steiner
