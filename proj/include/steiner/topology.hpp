#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace steiner {

class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TopologyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Undirected edge between node indices, stored with first < second.
using Edge = std::pair<int, int>;

/// A combinatorial tree over terminal nodes T0..T(n-1) (indices 0..n-1) and
/// Steiner nodes S0..S(k-1) (indices n..n+k-1).
///
/// Construction only checks that the edges form a tree on all nodes; the
/// Steiner degree and leaf conditions of full topologies are queried with
/// is_full() so that checkers can be handed malformed trees.
class Topology {
 public:
  Topology(int n_terminals, int n_steiner, std::vector<Edge> edges);

  int n_terminals() const { return n_terminals_; }
  int n_steiner() const { return n_steiner_; }
  int n_nodes() const { return n_terminals_ + n_steiner_; }
  bool is_terminal(int node) const { return node < n_terminals_; }
  int steiner_node(int j) const { return n_terminals_ + j; }

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int node) const { return adjacency_[static_cast<std::size_t>(node)]; }
  int degree(int node) const { return static_cast<int>(neighbors(node).size()); }

  /// Terminals are leaves, Steiner nodes have degree 3, n_steiner = n - 2.
  bool is_full() const;

  /// "T<i>" or "S<j>".
  std::string node_name(int node) const;
  /// Inverse of node_name; throws TopologyError on unknown names.
  int node_index(const std::string& name) const;

  /// Canonical form up to Steiner relabeling, terminal labels fixed.
  std::string canonical_encoding() const;
  /// Canonical form up to any relabeling that preserves node kinds.
  std::string shape_encoding() const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.n_terminals_ == b.n_terminals_ && a.n_steiner_ == b.n_steiner_ && a.edges_ == b.edges_;
  }

 private:
  int n_terminals_;
  int n_steiner_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

bool isomorphic(const Topology& a, const Topology& b);

inline constexpr int kDefaultTopologyCap = 9;

/// Every full topology on n labeled terminals, once each up to Steiner
/// relabeling, in generation order (terminal k inserted into every edge of
/// each topology on k terminals).
std::vector<Topology> enumerate_full_topologies(int n, int cap = kDefaultTopologyCap);

/// Rooted binary tree. Node 0 is the root; leaves have no children.
struct BinaryTree {
  struct Node {
    int left = -1;
    int right = -1;
    bool is_leaf() const { return left < 0; }
  };
  std::vector<Node> nodes;

  int root() const { return 0; }
  int leaf_count() const;
  int height() const;
  int min_leaf_depth() const;
  /// Every internal node has two children and all leaves share a depth.
  bool is_full_binary() const;
  /// Leaves in left-to-right order.
  std::vector<int> leaves() const;
  int height_of(int node) const;
  int leaf_count_of(int node) const;
};

BinaryTree full_binary_tree(int height);

struct GoodTree {
  BinaryTree tree;
  int height = 0;
};

/// The unique good binary tree with `leaves` leaves (height ceil(log2 leaves)).
GoodTree good_tree(int leaves);

/// True if `tree` is a good binary tree of the given height.
bool is_good_tree(const BinaryTree& tree, int height);

/// Good tree on d leaves with its root removed and the two former children
/// joined. Leaves become T0..T(d-1) in left-to-right order.
Topology conjectured_topology(int d);

/// Sum of leaf-to-leaf hop distances. Computed both pairwise and as the
/// edge-cut product sum; throws std::logic_error if they disagree.
long long terminal_wiener(const Topology& t);
long long terminal_wiener_pairwise(const Topology& t);
long long terminal_wiener_edge_cut(const Topology& t);

bool is_semi_regular(const Topology& t);

struct LabeledBinaryTree {
  BinaryTree tree;
  std::vector<std::string> labels;  // indexed like tree.nodes
};

LabeledBinaryTree label_full_binary(const BinaryTree& tree, const std::string& root_label);

/// Text form: "n_terminals <n>", "n_steiner <k>", then one "u v" edge per line.
std::string to_text(const Topology& t);
Topology topology_from_text(std::istream& in);

}  // namespace steiner
