#include "steiner/topology.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace steiner {

namespace {

std::string encode_labeled(const Topology& t, int node, int parent) {
  std::vector<std::string> parts;
  for (int next : t.neighbors(node)) {
    if (next != parent) parts.push_back(encode_labeled(t, next, node));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = t.is_terminal(node) ? "T" + std::to_string(node) : std::string();
  if (!parts.empty() || !t.is_terminal(node)) {
    out += '(';
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) out += ',';
      out += parts[i];
    }
    out += ')';
  }
  return out;
}

std::string encode_shape(const Topology& t, int node, int parent) {
  std::vector<std::string> parts;
  for (int next : t.neighbors(node)) {
    if (next != parent) parts.push_back(encode_shape(t, next, node));
  }
  std::sort(parts.begin(), parts.end());
  std::string out(1, t.is_terminal(node) ? 't' : 's');
  out += '(';
  for (const auto& p : parts) out += p;
  out += ')';
  return out;
}

std::vector<int> tree_centers(const Topology& t) {
  const int n = t.n_nodes();
  if (n <= 2) {
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<int> degree(static_cast<std::size_t>(n));
  std::vector<int> layer;
  for (int v = 0; v < n; ++v) {
    degree[static_cast<std::size_t>(v)] = t.degree(v);
    if (t.degree(v) <= 1) layer.push_back(v);
  }
  int remaining = n;
  while (remaining > 2) {
    remaining -= static_cast<int>(layer.size());
    std::vector<int> next;
    for (int leaf : layer) {
      for (int w : t.neighbors(leaf)) {
        if (--degree[static_cast<std::size_t>(w)] == 1) next.push_back(w);
      }
    }
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

// Parent array of a BFS from `root`; parent[root] = -1.
std::vector<int> bfs_parents(const Topology& t, int root) {
  std::vector<int> parent(static_cast<std::size_t>(t.n_nodes()), -2);
  std::queue<int> q;
  parent[static_cast<std::size_t>(root)] = -1;
  q.push(root);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : t.neighbors(v)) {
      if (parent[static_cast<std::size_t>(w)] == -2) {
        parent[static_cast<std::size_t>(w)] = v;
        q.push(w);
      }
    }
  }
  return parent;
}

std::vector<int> bfs_distances(const Topology& t, int source) {
  std::vector<int> dist(static_cast<std::size_t>(t.n_nodes()), -1);
  std::queue<int> q;
  dist[static_cast<std::size_t>(source)] = 0;
  q.push(source);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : t.neighbors(v)) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

// Number of terminals (or leaves) in the component containing `node` once
// the edge to `away_from` is removed.
class SideCounts {
 public:
  template <typename Pred>
  SideCounts(const Topology& t, Pred counted) : parent_(bfs_parents(t, 0)) {
    const auto n = static_cast<std::size_t>(t.n_nodes());
    below_.assign(n, 0);
    // BFS order reversed gives children before parents.
    std::vector<int> order;
    order.reserve(n);
    std::queue<int> q;
    q.push(0);
    std::vector<bool> seen(n, false);
    seen[0] = true;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      order.push_back(v);
      for (int w : t.neighbors(v)) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          q.push(w);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      if (counted(v)) ++below_[static_cast<std::size_t>(v)];
      const int p = parent_[static_cast<std::size_t>(v)];
      if (p >= 0) below_[static_cast<std::size_t>(p)] += below_[static_cast<std::size_t>(v)];
    }
    total_ = below_[0];
  }

  long long side(int node, int away_from) const {
    if (parent_[static_cast<std::size_t>(node)] == away_from) return below_[static_cast<std::size_t>(node)];
    return total_ - below_[static_cast<std::size_t>(away_from)];
  }
  long long total() const { return total_; }

 private:
  std::vector<int> parent_;
  std::vector<long long> below_;
  long long total_ = 0;
};

BinaryTree join(const BinaryTree& left, const BinaryTree& right) {
  BinaryTree out;
  out.nodes.reserve(1 + left.nodes.size() + right.nodes.size());
  out.nodes.push_back({});
  const int left_offset = 1;
  const int right_offset = 1 + static_cast<int>(left.nodes.size());
  for (auto node : left.nodes) {
    if (!node.is_leaf()) {
      node.left += left_offset;
      node.right += left_offset;
    }
    out.nodes.push_back(node);
  }
  for (auto node : right.nodes) {
    if (!node.is_leaf()) {
      node.left += right_offset;
      node.right += right_offset;
    }
    out.nodes.push_back(node);
  }
  out.nodes[0].left = left_offset;
  out.nodes[0].right = right_offset;
  return out;
}

BinaryTree leaf_tree() {
  BinaryTree t;
  t.nodes.push_back({});
  return t;
}

BinaryTree build_good(int leaves) {
  if (leaves == 1) return leaf_tree();
  if (leaves == 2) return full_binary_tree(1);
  // 2^k < leaves <= 2^(k+1); the tree has height k + 1.
  int k = 0;
  while ((1 << (k + 1)) < leaves) ++k;
  const int pow_k = 1 << k;
  if (leaves <= pow_k + pow_k / 2) {
    return join(full_binary_tree(k - 1), build_good(leaves - pow_k / 2));
  }
  return join(full_binary_tree(k), build_good(leaves - pow_k));
}

BinaryTree subtree(const BinaryTree& tree, int node) {
  if (tree.nodes[static_cast<std::size_t>(node)].is_leaf()) return leaf_tree();
  const auto& n = tree.nodes[static_cast<std::size_t>(node)];
  return join(subtree(tree, n.left), subtree(tree, n.right));
}

}  // namespace

Topology::Topology(int n_terminals, int n_steiner, std::vector<Edge> edges)
    : n_terminals_(n_terminals), n_steiner_(n_steiner), edges_(std::move(edges)) {
  if (n_terminals_ < 1 || n_steiner_ < 0) {
    throw TopologyError("Topology: need at least one terminal and a non-negative Steiner count");
  }
  const int n = n_nodes();
  if (static_cast<int>(edges_.size()) != n - 1) {
    throw TopologyError("Topology: a tree on " + std::to_string(n) + " nodes needs " + std::to_string(n - 1) +
                        " edges, got " + std::to_string(edges_.size()));
  }
  adjacency_.assign(static_cast<std::size_t>(n), {});
  for (auto& [u, v] : edges_) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw TopologyError("Topology: edge endpoint out of range");
    }
    if (u == v) throw TopologyError("Topology: self loop at " + node_name(u));
    if (u > v) std::swap(u, v);
    auto& adj = adjacency_[static_cast<std::size_t>(u)];
    if (std::find(adj.begin(), adj.end(), v) != adj.end()) {
      throw TopologyError("Topology: duplicate edge " + node_name(u) + " " + node_name(v));
    }
    adj.push_back(v);
    adjacency_[static_cast<std::size_t>(v)].push_back(u);
  }
  const auto parent = bfs_parents(*this, 0);
  if (std::count(parent.begin(), parent.end(), -2) > 0) {
    throw TopologyError("Topology: edges do not connect all nodes");
  }
}

bool Topology::is_full() const {
  if (n_steiner_ != n_terminals_ - 2) return false;
  for (int v = 0; v < n_nodes(); ++v) {
    if (is_terminal(v) ? degree(v) != 1 : degree(v) != 3) return false;
  }
  return true;
}

std::string Topology::node_name(int node) const {
  return is_terminal(node) ? "T" + std::to_string(node) : "S" + std::to_string(node - n_terminals_);
}

int Topology::node_index(const std::string& name) const {
  if (name.size() >= 2 && (name[0] == 'T' || name[0] == 'S')) {
    std::size_t used = 0;
    int id = -1;
    try {
      id = std::stoi(name.substr(1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == name.size() - 1 && id >= 0) {
      if (name[0] == 'T' && id < n_terminals_) return id;
      if (name[0] == 'S' && id < n_steiner_) return n_terminals_ + id;
    }
  }
  throw TopologyError("unknown node name '" + name + "'");
}

std::string Topology::canonical_encoding() const { return encode_labeled(*this, 0, -1); }

std::string Topology::shape_encoding() const {
  std::string best;
  for (int center : tree_centers(*this)) {
    std::string enc = encode_shape(*this, center, -1);
    if (best.empty() || enc < best) best = std::move(enc);
  }
  return best;
}

bool isomorphic(const Topology& a, const Topology& b) {
  return a.n_terminals() == b.n_terminals() && a.n_steiner() == b.n_steiner() &&
         a.shape_encoding() == b.shape_encoding();
}

std::vector<Topology> enumerate_full_topologies(int n, int cap) {
  if (n < 3) throw SizeError("enumerate_full_topologies: need at least 3 terminals");
  if (n > cap) {
    throw SizeError("enumerate_full_topologies: " + std::to_string(n) + " terminals exceeds the cap of " +
                    std::to_string(cap));
  }
  std::vector<std::vector<Edge>> current{{{0, n}, {1, n}, {2, n}}};
  for (int k = 3; k < n; ++k) {
    const int s = n + (k - 2);
    std::vector<std::vector<Edge>> next;
    next.reserve(current.size() * static_cast<std::size_t>(2 * k - 3));
    for (const auto& edges : current) {
      for (std::size_t e = 0; e < edges.size(); ++e) {
        std::vector<Edge> grown;
        grown.reserve(edges.size() + 2);
        for (std::size_t f = 0; f < edges.size(); ++f) {
          if (f == e) {
            grown.emplace_back(edges[f].first, s);
            grown.emplace_back(edges[f].second, s);
          } else {
            grown.push_back(edges[f]);
          }
        }
        grown.emplace_back(k, s);
        next.push_back(std::move(grown));
      }
    }
    current = std::move(next);
  }

  std::vector<Topology> out;
  out.reserve(current.size());
  std::unordered_set<std::string> seen;
  seen.reserve(current.size());
  for (auto& edges : current) {
    Topology t(n, n - 2, std::move(edges));
    if (seen.insert(t.canonical_encoding()).second) out.push_back(std::move(t));
  }
  return out;
}

int BinaryTree::leaf_count() const { return leaf_count_of(root()); }
int BinaryTree::height() const { return height_of(root()); }

int BinaryTree::leaf_count_of(int node) const {
  const auto& n = nodes[static_cast<std::size_t>(node)];
  return n.is_leaf() ? 1 : leaf_count_of(n.left) + leaf_count_of(n.right);
}

int BinaryTree::height_of(int node) const {
  const auto& n = nodes[static_cast<std::size_t>(node)];
  return n.is_leaf() ? 0 : 1 + std::max(height_of(n.left), height_of(n.right));
}

int BinaryTree::min_leaf_depth() const {
  int best = -1;
  std::vector<std::pair<int, int>> stack{{root(), 0}};
  while (!stack.empty()) {
    auto [v, depth] = stack.back();
    stack.pop_back();
    const auto& n = nodes[static_cast<std::size_t>(v)];
    if (n.is_leaf()) {
      if (best < 0 || depth < best) best = depth;
    } else {
      stack.emplace_back(n.left, depth + 1);
      stack.emplace_back(n.right, depth + 1);
    }
  }
  return best;
}

bool BinaryTree::is_full_binary() const { return min_leaf_depth() == height(); }

std::vector<int> BinaryTree::leaves() const {
  std::vector<int> out;
  std::vector<int> stack{root()};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    const auto& n = nodes[static_cast<std::size_t>(v)];
    if (n.is_leaf()) {
      out.push_back(v);
    } else {
      stack.push_back(n.right);
      stack.push_back(n.left);
    }
  }
  return out;
}

BinaryTree full_binary_tree(int height) {
  if (height < 0) throw SizeError("full_binary_tree: negative height");
  if (height == 0) return leaf_tree();
  const BinaryTree child = full_binary_tree(height - 1);
  return join(child, child);
}

GoodTree good_tree(int leaves) {
  if (leaves < 2) throw SizeError("good_tree: need at least 2 leaves");
  BinaryTree tree = build_good(leaves);
  const int height = tree.height();
  return GoodTree{std::move(tree), height};
}

bool is_good_tree(const BinaryTree& tree, int height) {
  if (tree.height() != height) return false;
  if (height == 0) return tree.nodes.size() == 1;
  const auto& root = tree.nodes[static_cast<std::size_t>(tree.root())];
  if (root.is_leaf()) return false;
  const BinaryTree left = subtree(tree, root.left);
  const BinaryTree right = subtree(tree, root.right);
  auto full_ok = [height](const BinaryTree& t) {
    return t.is_full_binary() && (t.height() == height - 1 || t.height() == height - 2);
  };
  return (full_ok(left) && full_ok(right)) || (is_good_tree(left, height - 1) && full_ok(right)) ||
         (full_ok(left) && is_good_tree(right, height - 1));
}

Topology conjectured_topology(int d) {
  if (d < 3) throw SizeError("conjectured_topology: need at least 3 terminals");
  const GoodTree good = good_tree(d);
  const BinaryTree& tree = good.tree;

  std::vector<int> index(tree.nodes.size(), -1);
  int next_terminal = 0;
  for (int leaf : tree.leaves()) index[static_cast<std::size_t>(leaf)] = next_terminal++;
  int next_steiner = d;
  // Preorder over internal nodes below the root.
  std::vector<int> stack{tree.nodes[0].right, tree.nodes[0].left};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    const auto& n = tree.nodes[static_cast<std::size_t>(v)];
    if (n.is_leaf()) continue;
    index[static_cast<std::size_t>(v)] = next_steiner++;
    stack.push_back(n.right);
    stack.push_back(n.left);
  }

  std::vector<Edge> edges;
  const int root_left = tree.nodes[0].left;
  const int root_right = tree.nodes[0].right;
  edges.emplace_back(index[static_cast<std::size_t>(root_left)], index[static_cast<std::size_t>(root_right)]);
  for (std::size_t v = 1; v < tree.nodes.size(); ++v) {
    const auto& n = tree.nodes[v];
    if (n.is_leaf()) continue;
    edges.emplace_back(index[v], index[static_cast<std::size_t>(n.left)]);
    edges.emplace_back(index[v], index[static_cast<std::size_t>(n.right)]);
  }
  return Topology(d, d - 2, std::move(edges));
}

long long terminal_wiener_pairwise(const Topology& t) {
  std::vector<int> leaves;
  for (int v = 0; v < t.n_nodes(); ++v) {
    if (t.degree(v) == 1) leaves.push_back(v);
  }
  long long total = 0;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const auto dist = bfs_distances(t, leaves[i]);
    for (std::size_t j = i + 1; j < leaves.size(); ++j) total += dist[static_cast<std::size_t>(leaves[j])];
  }
  return total;
}

long long terminal_wiener_edge_cut(const Topology& t) {
  const SideCounts counts(t, [&t](int v) { return t.degree(v) == 1; });
  long long total = 0;
  for (const auto& [u, v] : t.edges()) {
    const long long side = counts.side(u, v);
    total += side * (counts.total() - side);
  }
  return total;
}

long long terminal_wiener(const Topology& t) {
  const long long pairwise = terminal_wiener_pairwise(t);
  const long long cut = terminal_wiener_edge_cut(t);
  if (pairwise != cut) {
    throw std::logic_error("terminal_wiener: pairwise sum " + std::to_string(pairwise) +
                           " disagrees with edge-cut sum " + std::to_string(cut));
  }
  return pairwise;
}

bool is_semi_regular(const Topology& t) {
  const SideCounts counts(t, [&t](int v) { return t.is_terminal(v); });
  const int first = t.n_terminals();
  const int last = t.n_nodes();

  // The two branch sizes at `u` that avoid its neighbour `toward`.
  auto branches = [&](int u, int toward) {
    std::pair<long long, long long> out{-1, -1};
    for (int w : t.neighbors(u)) {
      if (w == toward) continue;
      (out.first < 0 ? out.first : out.second) = counts.side(w, u);
    }
    return std::pair{std::min(out.first, out.second), std::max(out.first, out.second)};
  };

  for (int v = first; v < last; ++v) {
    const auto parent = bfs_parents(t, v);
    for (int u = first; u < v; ++u) {
      const auto [u_min, u_max] = branches(u, parent[static_cast<std::size_t>(u)]);
      // v's next hop toward u is the last node before v on the path.
      int hop = u;
      while (parent[static_cast<std::size_t>(hop)] != v) hop = parent[static_cast<std::size_t>(hop)];
      const auto [v_min, v_max] = branches(v, hop);
      if (!(v_min >= u_max || u_min >= v_max)) return false;
    }
  }
  return true;
}

LabeledBinaryTree label_full_binary(const BinaryTree& tree, const std::string& root_label) {
  LabeledBinaryTree out{tree, std::vector<std::string>(tree.nodes.size())};
  std::vector<int> stack{tree.root()};
  out.labels[static_cast<std::size_t>(tree.root())] = root_label;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    const auto& n = tree.nodes[static_cast<std::size_t>(v)];
    if (n.is_leaf()) continue;
    const std::string& label = out.labels[static_cast<std::size_t>(v)];
    out.labels[static_cast<std::size_t>(n.left)] = label + '0';
    out.labels[static_cast<std::size_t>(n.right)] = label + '1';
    stack.push_back(n.left);
    stack.push_back(n.right);
  }
  return out;
}

std::string to_text(const Topology& t) {
  std::ostringstream out;
  out << "n_terminals " << t.n_terminals() << '\n' << "n_steiner " << t.n_steiner() << '\n';
  for (const auto& [u, v] : t.edges()) out << t.node_name(u) << ' ' << t.node_name(v) << '\n';
  return out.str();
}

namespace {

int parse_count(const std::string& text) {
  int value = -1;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || value < 0) {
    throw TopologyError("topology text: expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

}  // namespace

Topology topology_from_text(std::istream& in) {
  int n_terminals = -1;
  int n_steiner = -1;
  std::vector<std::pair<std::string, std::string>> named;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a;
    std::string b;
    if (!(fields >> a)) continue;
    if (!(fields >> b)) throw TopologyError("topology text: incomplete line '" + line + "'");
    if (a == "n_terminals") {
      n_terminals = parse_count(b);
    } else if (a == "n_steiner") {
      n_steiner = parse_count(b);
    } else {
      named.emplace_back(a, b);
    }
  }
  if (n_terminals < 0 || n_steiner < 0) {
    throw TopologyError("topology text: missing n_terminals or n_steiner header");
  }
  auto resolve = [&](const std::string& name) {
    if (name.size() >= 2 && (name[0] == 'T' || name[0] == 'S')) {
      const int id = parse_count(name.substr(1));
      if (name[0] == 'T' && id < n_terminals) return id;
      if (name[0] == 'S' && id < n_steiner) return n_terminals + id;
    }
    throw TopologyError("topology text: unknown node '" + name + "'");
  };
  std::vector<Edge> edges;
  edges.reserve(named.size());
  for (const auto& [a, b] : named) edges.emplace_back(resolve(a), resolve(b));
  return Topology(n_terminals, n_steiner, std::move(edges));
}

}  // namespace steiner
