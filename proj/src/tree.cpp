#include "steiner/tree.hpp"

#include <algorithm>
#include <map>

namespace steiner {

double SteinerTree::recompute_cost() const {
  double total = 0.0;
  for (const auto& e : topology.edges()) total += edge_length(e);
  return total;
}

SteinerTree make_tree(Topology topology, std::vector<Point> positions) {
  if (positions.size() != static_cast<std::size_t>(topology.n_nodes())) {
    throw DimensionError("make_tree: expected " + std::to_string(topology.n_nodes()) + " positions, got " +
                         std::to_string(positions.size()));
  }
  for (const auto& p : positions) {
    if (p.dim() != positions.front().dim()) throw DimensionError("make_tree: positions differ in dimension");
  }
  SteinerTree tree{std::move(topology), std::move(positions), 0.0, true, 0.0, std::numeric_limits<double>::quiet_NaN(), {}};
  tree.cost = tree.recompute_cost();
  tree.collapsed = collapsed_edges(tree);
  return tree;
}

std::vector<Edge> collapsed_edges(const SteinerTree& tree, double tol) {
  std::vector<Edge> out;
  for (const auto& e : tree.topology.edges()) {
    if (!tree.topology.is_terminal(e.first) && !tree.topology.is_terminal(e.second) && tree.edge_length(e) < tol) {
      out.push_back(e);
    }
  }
  return out;
}

bool has_simplex_terminals(const SteinerTree& tree) {
  const int n = tree.topology.n_terminals();
  if (tree.dim() != static_cast<std::size_t>(n)) return false;
  for (int i = 0; i < n; ++i) {
    if (!(tree.position(i) == Point::basis(tree.dim(), static_cast<std::size_t>(i)))) return false;
  }
  return true;
}

std::vector<std::string> steiner_signatures(const Topology& t) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(t.n_steiner()));
  for (int j = 0; j < t.n_steiner(); ++j) {
    const int s = t.steiner_node(j);
    std::vector<std::vector<int>> branches;
    for (int start : t.neighbors(s)) {
      std::vector<int> terminals;
      std::vector<std::pair<int, int>> stack{{start, s}};
      while (!stack.empty()) {
        auto [v, from] = stack.back();
        stack.pop_back();
        if (t.is_terminal(v)) terminals.push_back(v);
        for (int w : t.neighbors(v)) {
          if (w != from) stack.emplace_back(w, v);
        }
      }
      std::sort(terminals.begin(), terminals.end());
      branches.push_back(std::move(terminals));
    }
    std::sort(branches.begin(), branches.end());
    std::string sig;
    for (const auto& branch : branches) {
      sig += '{';
      for (std::size_t i = 0; i < branch.size(); ++i) {
        if (i > 0) sig += ',';
        sig += std::to_string(branch[i]);
      }
      sig += '}';
    }
    out.push_back(std::move(sig));
  }
  return out;
}

std::vector<int> align_steiner(const Topology& a, const Topology& b) {
  if (a.n_terminals() != b.n_terminals() || a.n_steiner() != b.n_steiner()) {
    throw TopologyError("align_steiner: node counts differ");
  }
  const auto sig_a = steiner_signatures(a);
  const auto sig_b = steiner_signatures(b);
  std::map<std::string, int> index_b;
  for (int j = 0; j < b.n_steiner(); ++j) index_b.emplace(sig_b[static_cast<std::size_t>(j)], j);
  std::vector<int> map;
  map.reserve(sig_a.size());
  for (const auto& sig : sig_a) {
    const auto it = index_b.find(sig);
    if (it == index_b.end()) throw TopologyError("align_steiner: no Steiner node splits terminals as " + sig);
    map.push_back(it->second);
  }
  return map;
}

double max_steiner_displacement(const SteinerTree& a, const SteinerTree& b) {
  const auto map = align_steiner(a.topology, b.topology);
  double worst = 0.0;
  for (int j = 0; j < a.topology.n_steiner(); ++j) {
    const Point& pa = a.position(a.topology.steiner_node(j));
    const Point& pb = b.position(b.topology.steiner_node(map[static_cast<std::size_t>(j)]));
    worst = std::max(worst, distance(pa, pb));
  }
  return worst;
}

}  // namespace steiner
