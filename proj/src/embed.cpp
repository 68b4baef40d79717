#include "steiner/embed.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace steiner {

namespace {

std::string edge_text(const Edge& e) { return "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")"; }

bool share_vertex(const Edge& a, const Edge& b) {
  return a.first == b.first || a.first == b.second || a.second == b.first || a.second == b.second;
}

// Minimum upper-triangle adjacency string of one component over all vertex
// orders.
std::string component_form(const Graph& g, std::vector<int> vertices) {
  std::sort(vertices.begin(), vertices.end());
  const std::size_t k = vertices.size();
  std::string best;
  std::string current(k * (k - 1) / 2, '0');
  do {
    std::size_t pos = 0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) current[pos++] = g.has_edge(vertices[a], vertices[b]) ? '1' : '0';
    }
    if (best.empty() || current > best) best = current;
  } while (std::next_permutation(vertices.begin(), vertices.end()));
  return std::to_string(k) + ":" + best;
}

}  // namespace

Graph::Graph(int n_vertices, std::vector<Edge> edges) : n_vertices_(n_vertices), edges_(std::move(edges)) {
  if (n_vertices_ < 0) throw GraphError("Graph: negative vertex count");
  adjacency_.assign(static_cast<std::size_t>(n_vertices_), {});
  for (auto& [u, v] : edges_) {
    if (u < 0 || v < 0 || u >= n_vertices_ || v >= n_vertices_) {
      throw GraphError("Graph: edge " + edge_text({u, v}) + " has an endpoint outside 0.." +
                       std::to_string(n_vertices_ - 1));
    }
    if (u == v) throw GraphError("Graph: loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (has_edge(u, v)) throw GraphError("Graph: repeated edge " + edge_text({u, v}));
    adjacency_[static_cast<std::size_t>(u)].push_back(v);
    adjacency_[static_cast<std::size_t>(v)].push_back(u);
  }
}

bool Graph::has_edge(int u, int v) const {
  const auto& nb = neighbors(u);
  return std::find(nb.begin(), nb.end(), v) != nb.end();
}

Graph star_graph(int m) {
  std::vector<Edge> edges;
  for (int i = 1; i <= m; ++i) edges.emplace_back(0, i);
  return Graph(m + 1, std::move(edges));
}

Graph cycle_graph(int n) {
  if (n < 3) throw GraphError("cycle_graph: need at least 3 vertices");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(edges));
}

Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, std::move(edges));
}

EmbeddedConfig embed_graph(const Graph& g, double scale) {
  if (std::abs(scale - 1.0) > 1e-15 && std::abs(scale - kUnitScale) > 1e-15) {
    throw std::invalid_argument("embed_graph: scale must be 1 or 1/sqrt(2)");
  }
  EmbeddedConfig out{{}, scale, g};
  out.points.reserve(g.edges().size());
  for (const auto& [u, v] : g.edges()) {
    std::vector<double> coords(static_cast<std::size_t>(g.n_vertices()), 0.0);
    coords[static_cast<std::size_t>(u)] = scale;
    coords[static_cast<std::size_t>(v)] = scale;
    out.points.emplace_back(std::move(coords));
  }
  return out;
}

bool disjoint_closed_neighborhoods(const Graph& g, int i, int j) {
  if (i == j || g.has_edge(i, j)) return false;
  for (int a : g.neighbors(i)) {
    if (a == j || g.has_edge(a, j)) return false;
  }
  return true;
}

std::optional<std::pair<int, int>> find_disjoint_pair(const Graph& g) {
  for (int i = 0; i < g.n_vertices(); ++i) {
    if (g.degree(i) == 0) continue;
    for (int j = i + 1; j < g.n_vertices(); ++j) {
      if (g.degree(j) > 0 && disjoint_closed_neighborhoods(g, i, j)) return std::pair{i, j};
    }
  }
  return std::nullopt;
}

int diameter(const Graph& g) {
  int worst = 0;
  for (int s = 0; s < g.n_vertices(); ++s) {
    if (g.degree(s) == 0) continue;
    std::vector<int> dist(static_cast<std::size_t>(g.n_vertices()), -1);
    std::vector<int> queue{s};
    dist[static_cast<std::size_t>(s)] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (int w : g.neighbors(v)) {
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          queue.push_back(w);
        }
      }
    }
    for (int v = 0; v < g.n_vertices(); ++v) {
      if (g.degree(v) == 0) continue;
      if (dist[static_cast<std::size_t>(v)] < 0) return -1;
      worst = std::max(worst, dist[static_cast<std::size_t>(v)]);
    }
  }
  return worst;
}

std::vector<Point> contract_pair(const Graph& g, const std::vector<Point>& points, int i, int j) {
  if (i < 0 || j < 0 || i >= g.n_vertices() || j >= g.n_vertices()) {
    throw GraphError("contract_pair: vertex out of range");
  }
  if (!disjoint_closed_neighborhoods(g, i, j)) {
    throw GraphError("contract_pair: closed neighborhoods of " + std::to_string(i) + " and " + std::to_string(j) +
                     " overlap");
  }
  std::vector<Point> out;
  out.reserve(points.size());
  for (const Point& p : points) {
    if (p.dim() != static_cast<std::size_t>(g.n_vertices())) {
      throw DimensionError("contract_pair: point dimension differs from the vertex count");
    }
    std::vector<double> coords = p.values();
    coords[static_cast<std::size_t>(i)] = std::max(coords[static_cast<std::size_t>(i)], coords[static_cast<std::size_t>(j)]);
    coords[static_cast<std::size_t>(j)] = 0.0;
    out.emplace_back(std::move(coords));
  }
  return out;
}

Graph contract_graph(const Graph& g, int i, int j) {
  if (!disjoint_closed_neighborhoods(g, i, j)) {
    throw GraphError("contract_graph: closed neighborhoods of " + std::to_string(i) + " and " + std::to_string(j) +
                     " overlap");
  }
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) {
    if (u == j) u = i;
    if (v == j) v = i;
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  return Graph(g.n_vertices(), std::move(edges));
}

bool contraction_is_strict(const SteinerTree& tree, int i, int j) {
  const Topology& t = tree.topology;
  const auto ii = static_cast<std::size_t>(i);
  const auto jj = static_cast<std::size_t>(j);
  for (const auto& [u, v] : t.edges()) {
    if (t.is_terminal(u) == t.is_terminal(v)) continue;
    const Point& p = tree.position(t.is_terminal(u) ? u : v);
    const Point& s = tree.position(t.is_terminal(u) ? v : u);
    if (std::min(p[ii], p[jj]) == 0.0 && s[ii] > 0.0 && s[jj] > 0.0) return true;
  }
  return false;
}

std::string canonical_form(const Graph& g) {
  std::vector<int> component(static_cast<std::size_t>(g.n_vertices()), -1);
  std::vector<std::string> parts;
  for (int s = 0; s < g.n_vertices(); ++s) {
    if (g.degree(s) == 0 || component[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<int> members{s};
    component[static_cast<std::size_t>(s)] = s;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (int w : g.neighbors(members[head])) {
        if (component[static_cast<std::size_t>(w)] < 0) {
          component[static_cast<std::size_t>(w)] = s;
          members.push_back(w);
        }
      }
    }
    parts.push_back(component_form(g, std::move(members)));
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "|") + p;
  return out;
}

std::vector<Graph> enumerate_graphs(int m) {
  if (m < 1) throw SizeError("enumerate_graphs: need at least one edge");
  std::map<std::string, Graph> level;
  const Graph first(2, {{0, 1}});
  level.emplace(canonical_form(first), first);
  for (int edges = 2; edges <= m; ++edges) {
    std::map<std::string, Graph> next;
    for (const auto& [form, g] : level) {
      const int n = g.n_vertices();
      std::vector<std::pair<Edge, int>> candidates;  // new edge, new vertex count
      for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
          if (!g.has_edge(u, v)) candidates.push_back({{u, v}, n});
        }
        candidates.push_back({{u, n}, n + 1});
      }
      candidates.push_back({{n, n + 1}, n + 2});
      for (const auto& [e, count] : candidates) {
        std::vector<Edge> grown = g.edges();
        grown.push_back(e);
        Graph h(count, std::move(grown));
        std::string key = canonical_form(h);
        next.try_emplace(std::move(key), std::move(h));
      }
    }
    level = std::move(next);
  }
  std::vector<Graph> out;
  out.reserve(level.size());
  for (auto& [form, g] : level) out.push_back(std::move(g));
  return out;
}

ScanReport star_scan(int m, const ScanOptions& options) {
  if (m < 3) throw SizeError("star_scan: need m >= 3");
  if (m > options.cap) {
    throw SizeError("star_scan: m = " + std::to_string(m) + " exceeds the cap of " +
                    std::to_string(options.cap));
  }
  ScanReport report;
  report.m = m;
  const std::string star = canonical_form(star_graph(m));
  for (Graph& g : enumerate_graphs(m)) {
    ScanEntry entry;
    entry.canonical = canonical_form(g);
    entry.is_star = entry.canonical == star;
    entry.pruned_by = find_disjoint_pair(g);
    entry.diameter = diameter(g);
    if (!entry.pruned_by || options.solve_pruned) {
      const EmbeddedConfig config = embed_graph(g, 1.0);
      entry.cost = optimal_steiner_tree(config.points, options.solve).best.cost;
      entry.mst = mst_cost(config.points);
      entry.solved = true;
    }
    entry.graph = std::move(g);
    report.entries.push_back(std::move(entry));
  }

  for (const auto& e : report.entries) {
    if (e.is_star) report.star_cost = e.cost;
  }
  report.star_minimal = true;
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    const ScanEntry& e = report.entries[k];
    if (!e.solved || e.is_star) continue;
    if (e.cost < report.star_cost - options.tie_tol) {
      report.star_minimal = false;
      if (!report.counterexample) report.counterexample = static_cast<int>(k);
    } else if (e.cost <= report.star_cost + options.tie_tol) {
      report.ties.push_back(static_cast<int>(k));
    }
  }
  return report;
}

std::optional<std::array<int, 3>> find_triangle(const Graph& g) {
  for (const auto& [u, v] : g.edges()) {
    for (int w : g.neighbors(u)) {
      if (w != v && g.has_edge(v, w)) {
        std::array<int, 3> t{u, v, w};
        std::sort(t.begin(), t.end());
        return t;
      }
    }
  }
  return std::nullopt;
}

ReductionInstance make_reduction_instance(const Graph& g) {
  if (const auto t = find_triangle(g)) {
    throw GraphError("make_reduction_instance: graph contains the triangle (" + std::to_string((*t)[0]) + "," +
                     std::to_string((*t)[1]) + "," + std::to_string((*t)[2]) + ")");
  }
  return ReductionInstance{embed_graph(g, kUnitScale), g.n_edges(), g, true};
}

PartitionCheck partition_to_cover(const ReductionInstance& instance, const std::vector<std::vector<int>>& partition) {
  const auto& edges = instance.source.edges();
  std::vector<int> owner(edges.size(), -1);
  for (std::size_t p = 0; p < partition.size(); ++p) {
    if (partition[p].empty()) throw GraphError("partition_to_cover: part " + std::to_string(p) + " is empty");
    for (int idx : partition[p]) {
      if (idx < 0 || static_cast<std::size_t>(idx) >= edges.size()) {
        throw GraphError("partition_to_cover: point index " + std::to_string(idx) + " out of range");
      }
      if (owner[static_cast<std::size_t>(idx)] >= 0) {
        throw GraphError("partition_to_cover: point " + std::to_string(idx) + " appears in two parts");
      }
      owner[static_cast<std::size_t>(idx)] = static_cast<int>(p);
    }
  }
  for (std::size_t idx = 0; idx < owner.size(); ++idx) {
    if (owner[idx] < 0) throw GraphError("partition_to_cover: point " + std::to_string(idx) + " is in no part");
  }

  PartitionCheck out;
  std::set<int> cover;
  for (std::size_t p = 0; p < partition.size(); ++p) {
    const auto& part = partition[p];
    for (std::size_t a = 0; a < part.size(); ++a) {
      for (std::size_t b = a + 1; b < part.size(); ++b) {
        const Edge& ea = edges[static_cast<std::size_t>(part[a])];
        const Edge& eb = edges[static_cast<std::size_t>(part[b])];
        if (!share_vertex(ea, eb)) {
          out.part = static_cast<int>(p);
          out.offending = {part[a], part[b]};
          out.violation = "edges " + edge_text(ea) + " and " + edge_text(eb) +
                          " are disjoint: their points are sqrt(2) apart, not 1";
          return out;
        }
      }
    }
    const Edge& first = edges[static_cast<std::size_t>(part.front())];
    int common = -1;
    for (int candidate : {first.first, first.second}) {
      const bool everywhere = std::all_of(part.begin(), part.end(), [&](int idx) {
        const Edge& e = edges[static_cast<std::size_t>(idx)];
        return e.first == candidate || e.second == candidate;
      });
      if (everywhere) {
        common = candidate;
        break;
      }
    }
    if (common < 0) {
      // Pairwise-intersecting edges without a common vertex form a triangle.
      const Edge& second = edges[static_cast<std::size_t>(part[1])];
      const int shared = (second.first == first.first || second.second == first.first) ? first.first : first.second;
      const auto third = std::find_if(part.begin(), part.end(), [&](int idx) {
        const Edge& e = edges[static_cast<std::size_t>(idx)];
        return e.first != shared && e.second != shared;
      });
      out.part = static_cast<int>(p);
      out.offending = {part[0], part[1], *third};
      out.violation = "edges " + edge_text(first) + ", " + edge_text(second) + ", " +
                      edge_text(edges[static_cast<std::size_t>(*third)]) + " share no common vertex";
      return out;
    }
    cover.insert(common);
  }
  out.ok = true;
  out.cover.assign(cover.begin(), cover.end());
  return out;
}

std::vector<std::vector<int>> cover_to_partition(const ReductionInstance& instance, const std::vector<int>& cover) {
  const Graph& g = instance.source;
  std::vector<bool> in_cover(static_cast<std::size_t>(g.n_vertices()), false);
  for (int v : cover) {
    if (v < 0 || v >= g.n_vertices()) throw GraphError("cover_to_partition: vertex " + std::to_string(v) + " out of range");
    in_cover[static_cast<std::size_t>(v)] = true;
  }
  std::map<int, std::vector<int>> parts;
  for (std::size_t idx = 0; idx < g.edges().size(); ++idx) {
    const auto& [u, v] = g.edges()[idx];
    if (in_cover[static_cast<std::size_t>(u)]) {
      parts[u].push_back(static_cast<int>(idx));
    } else if (in_cover[static_cast<std::size_t>(v)]) {
      parts[v].push_back(static_cast<int>(idx));
    } else {
      throw GraphError("cover_to_partition: edge " + edge_text({u, v}) + " is not covered");
    }
  }
  std::vector<std::vector<int>> out;
  out.reserve(parts.size());
  for (auto& [v, part] : parts) out.push_back(std::move(part));
  return out;
}

}  // namespace steiner
