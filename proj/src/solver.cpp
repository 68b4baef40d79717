#include "steiner/solver.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <thread>

#include <Eigen/Dense>

namespace steiner {

namespace {

// Flat working copy of a tree: node coordinates in one array, Steiner
// neighbours in fixed triples, and a rooting used by the dual bound and the
// smoothed linear solve.
class Workspace {
 public:
  Workspace(const std::vector<Point>& terminals, const Topology& t)
      : t_(t), n_(t.n_nodes()), nt_(t.n_terminals()), dim_(terminals.front().dim()) {
    x_.assign(static_cast<std::size_t>(n_) * dim_, 0.0);
    for (int i = 0; i < nt_; ++i) {
      std::copy(terminals[static_cast<std::size_t>(i)].values().begin(),
                terminals[static_cast<std::size_t>(i)].values().end(), at(i).begin());
    }
    for (int j = 0; j < t.n_steiner(); ++j) {
      const auto& nb = t.neighbors(t.steiner_node(j));
      if (nb.size() != 3) {
        throw TopologyError("relatively_minimal: Steiner node " + t.node_name(t.steiner_node(j)) + " has degree " +
                            std::to_string(nb.size()));
      }
      triples_.push_back({nb[0], nb[1], nb[2]});
    }

    parent_.assign(static_cast<std::size_t>(n_), -1);
    std::vector<bool> seen(static_cast<std::size_t>(n_), false);
    std::vector<int> queue{0};
    seen[0] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (int w : t.neighbors(v)) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          parent_[static_cast<std::size_t>(w)] = v;
          queue.push_back(w);
        }
      }
    }
    bfs_order_ = std::move(queue);
    edge_weight_.assign(static_cast<std::size_t>(n_), 0.0);

    double diam = 0.0;
    for (int a = 0; a < nt_; ++a) {
      for (int b = a + 1; b < nt_; ++b) diam = std::max(diam, detail::distance(cat(a), cat(b)));
    }
    diameter_ = diam > 0.0 ? diam : 1.0;
  }

  std::span<double> at(int node) { return {x_.data() + static_cast<std::size_t>(node) * dim_, dim_}; }
  std::span<const double> cat(int node) const {
    return {x_.data() + static_cast<std::size_t>(node) * dim_, dim_};
  }
  std::size_t dim() const { return dim_; }
  int n_steiner() const { return n_ - nt_; }
  double diameter() const { return diameter_; }
  std::vector<double>& raw() { return x_; }

  double cost() const {
    double total = 0.0;
    for (const auto& [u, v] : t_.edges()) total += detail::distance(cat(u), cat(v));
    return total;
  }

  void initialize(const std::optional<std::vector<Point>>& initial) {
    if (initial) {
      if (initial->size() != static_cast<std::size_t>(n_steiner())) {
        throw DimensionError("relatively_minimal: expected " + std::to_string(n_steiner()) +
                             " initial Steiner positions");
      }
      for (int j = 0; j < n_steiner(); ++j) {
        const Point& p = (*initial)[static_cast<std::size_t>(j)];
        if (p.dim() != dim_) throw DimensionError("relatively_minimal: initial position dimension mismatch");
        std::copy(p.values().begin(), p.values().end(), at(nt_ + j).begin());
      }
      return;
    }
    std::vector<double> center(dim_, 0.0);
    for (int i = 0; i < nt_; ++i) {
      for (std::size_t c = 0; c < dim_; ++c) center[c] += cat(i)[c] / nt_;
    }
    for (int j = 0; j < n_steiner(); ++j) {
      auto s = at(nt_ + j);
      for (std::size_t c = 0; c < dim_; ++c) {
        s[c] = center[c] + 1e-6 * diameter_ * std::sin(12.9898 * (j + 1) + 78.233 * static_cast<double>(c + 1));
      }
    }
  }

  // One Gauss-Seidel pass of Fermat updates; returns the largest move.
  double sweep() {
    double largest = 0.0;
    std::vector<double>& out = scratch_;
    out.resize(dim_);
    for (int j = 0; j < n_steiner(); ++j) {
      const auto& [a, b, c] = triples_[static_cast<std::size_t>(j)];
      detail::fermat_into(cat(a), cat(b), cat(c), out);
      auto s = at(nt_ + j);
      // Snapping to a vertex within the angle tolerance can cost a little.
      auto local = [&](std::span<const double> x) {
        return detail::distance(x, cat(a)) + detail::distance(x, cat(b)) + detail::distance(x, cat(c));
      };
      if (local(out) > local(s)) continue;
      largest = std::max(largest, detail::distance(s, out));
      std::copy(out.begin(), out.end(), s.begin());
    }
    return std::max(largest, move_clusters());
  }

  // Single-node updates cannot move coincident Steiner points apart from
  // their common location, so each such cluster not sitting on a terminal is
  // moved as a whole to the geometric median of its outside neighbours.
  double move_clusters() {
    const double tiny = 1e-13 * diameter_;
    const int ns = n_steiner();
    std::vector<int> root(static_cast<std::size_t>(ns));
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](int j) {
      while (root[static_cast<std::size_t>(j)] != j) j = root[static_cast<std::size_t>(j)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(j)])];
      return j;
    };
    bool any = false;
    for (const auto& [u, v] : t_.edges()) {
      if (u < nt_ || detail::distance(cat(u), cat(v)) > tiny) continue;
      root[static_cast<std::size_t>(find(v - nt_))] = find(u - nt_);
      any = true;
    }
    if (!any) return 0.0;

    double largest = 0.0;
    std::vector<int> members;
    std::vector<int> outside;
    for (int j = 0; j < ns; ++j) {
      if (find(j) != j) continue;
      members.clear();
      for (int m = 0; m < ns; ++m) {
        if (find(m) == j) members.push_back(nt_ + m);
      }
      if (members.size() < 2) continue;
      outside.clear();
      bool pinned = false;
      for (int v : members) {
        for (int w : t_.neighbors(v)) {
          if (!t_.is_terminal(w) && find(w - nt_) == j) continue;
          if (t_.is_terminal(w) && detail::distance(cat(v), cat(w)) <= tiny) pinned = true;
          outside.push_back(w);
        }
      }
      if (pinned) continue;
      std::vector<double> start(cat(members.front()).begin(), cat(members.front()).end());
      const std::vector<double> target = median(outside, start);
      if (outside_cost(outside, target) >= outside_cost(outside, start)) continue;
      largest = std::max(largest, detail::distance(start, target));
      for (int v : members) std::copy(target.begin(), target.end(), at(v).begin());
    }
    return largest;
  }

  double outside_cost(const std::vector<int>& nodes, std::span<const double> x) const {
    double total = 0.0;
    for (int w : nodes) total += detail::distance(x, cat(w));
    return total;
  }

  // Point minimizing the summed distance to `nodes`, from `x`. A data point
  // is returned when the unit vectors toward the others sum to at most its
  // multiplicity; otherwise the minimizer is off the data and the objective
  // is smooth there, so damped Newton steps are used.
  std::vector<double> median(const std::vector<int>& nodes, std::vector<double> x) const {
    const double tiny = 1e-15 * diameter_;
    const auto d = static_cast<Eigen::Index>(dim_);
    Eigen::VectorXd g(d);
    for (int k : nodes) {
      g.setZero();
      int on_top = 0;
      for (int w : nodes) {
        const double len = detail::distance(cat(k), cat(w));
        if (len <= tiny) {
          ++on_top;
          continue;
        }
        for (Eigen::Index c = 0; c < d; ++c) g[c] += (cat(k)[static_cast<std::size_t>(c)] - cat(w)[static_cast<std::size_t>(c)]) / len;
      }
      if (g.norm() <= on_top) return std::vector<double>(cat(k).begin(), cat(k).end());
    }

    Eigen::MatrixXd h(d, d);
    Eigen::VectorXd u(d);
    std::vector<double> trial(dim_);
    double value = outside_cost(nodes, x);
    for (int iter = 0; iter < 100; ++iter) {
      g.setZero();
      h.setZero();
      for (int w : nodes) {
        double len = 0.0;
        for (Eigen::Index c = 0; c < d; ++c) {
          u[c] = x[static_cast<std::size_t>(c)] - cat(w)[static_cast<std::size_t>(c)];
          len += u[c] * u[c];
        }
        len = std::sqrt(len);
        if (len <= tiny) continue;
        u /= len;
        g += u;
        h += (Eigen::MatrixXd::Identity(d, d) - u * u.transpose()) / len;
      }
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
      Eigen::VectorXd step = ldlt.info() == Eigen::Success ? Eigen::VectorXd(ldlt.solve(-g)) : Eigen::VectorXd(-g);
      if (!step.allFinite() || step.dot(g) >= 0.0) step = -g;
      double t = 1.0;
      bool improved = false;
      for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
        for (std::size_t c = 0; c < dim_; ++c) trial[c] = x[c] + t * step[static_cast<Eigen::Index>(c)];
        const double next = outside_cost(nodes, trial);
        if (next < value) {
          value = next;
          improved = true;
          break;
        }
      }
      if (!improved) break;
      x = trial;
      if (t * step.norm() <= 1e-15 * diameter_) break;
    }
    return x;
  }

  double lower_bound() const {
    const double tiny = 1e-14 * diameter_;
    auto length = [&](int u, int v) { return detail::distance(cat(u), cat(v)); };
    // Flow leaving terminal i: the unit vector of its edge, or for a terminal
    // with a Steiner point on top of it, the unit vectors of every edge that
    // leaves the cluster of coincident nodes around it.
    std::vector<double> y(static_cast<std::size_t>(nt_) * dim_, 0.0);
    std::vector<int> stack;
    std::vector<int> cluster_parent(static_cast<std::size_t>(n_), -2);
    for (int i = 0; i < nt_; ++i) {
      auto yi = std::span<double>(y).subspan(static_cast<std::size_t>(i) * dim_, dim_);
      stack.assign(1, i);
      cluster_parent[static_cast<std::size_t>(i)] = -1;
      std::vector<int> touched{i};
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : t_.neighbors(v)) {
          if (w == cluster_parent[static_cast<std::size_t>(v)]) continue;
          const double len = length(v, w);
          if (len <= tiny && !t_.is_terminal(w)) {
            cluster_parent[static_cast<std::size_t>(w)] = v;
            touched.push_back(w);
            stack.push_back(w);
            continue;
          }
          if (len <= tiny) continue;
          for (std::size_t c = 0; c < dim_; ++c) yi[c] += (cat(i)[c] - cat(w)[c]) / len;
        }
      }
      for (int v : touched) cluster_parent[static_cast<std::size_t>(v)] = -2;
    }
    // Make the terminal flows sum to zero.
    std::vector<double> residual(dim_, 0.0);
    for (int i = 0; i < nt_; ++i) {
      for (std::size_t c = 0; c < dim_; ++c) residual[c] -= y[static_cast<std::size_t>(i) * dim_ + c];
    }
    for (int i = 0; i < nt_; ++i) {
      for (std::size_t c = 0; c < dim_; ++c) y[static_cast<std::size_t>(i) * dim_ + c] += residual[c] / nt_;
    }
    // Edge flows are subtree sums; scale so that none exceeds unit length.
    std::vector<double> flow(static_cast<std::size_t>(n_) * dim_, 0.0);
    std::copy(y.begin(), y.end(), flow.begin());
    double largest = 0.0;
    for (auto it = bfs_order_.rbegin(); it != bfs_order_.rend(); ++it) {
      const int v = *it;
      const int p = parent_[static_cast<std::size_t>(v)];
      if (p < 0) continue;
      double norm = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) {
        const double f = flow[static_cast<std::size_t>(v) * dim_ + c];
        norm += f * f;
        flow[static_cast<std::size_t>(p) * dim_ + c] += f;
      }
      largest = std::max(largest, std::sqrt(norm));
    }
    double value = 0.0;
    for (int i = 0; i < nt_; ++i) {
      for (std::size_t c = 0; c < dim_; ++c) value += y[static_cast<std::size_t>(i) * dim_ + c] * cat(i)[c];
    }
    return value / std::max(1.0, largest);
  }

  // Minimizes sum w_e |e|^2 with w_e = 1/sqrt(|e|^2 + eps^2) at the current
  // positions; returns the largest move. The Steiner nodes form a forest, so
  // the system is solved by eliminating children into parents.
  double smoothed_step(double eps) {
    const int ns = n_steiner();
    diag_.assign(static_cast<std::size_t>(ns), 0.0);
    rhs_.assign(static_cast<std::size_t>(ns) * dim_, 0.0);
    const double eps2 = eps * eps;
    for (const auto& [u, v] : t_.edges()) {
      double len2 = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) {
        const double d = cat(u)[c] - cat(v)[c];
        len2 += d * d;
      }
      const double w = 1.0 / std::sqrt(len2 + eps2);
      weight_of_child_edge(u, v) = w;
      for (int end : {u, v}) {
        if (t_.is_terminal(end)) continue;
        const int other = end == u ? v : u;
        diag_[static_cast<std::size_t>(end - nt_)] += w;
        if (t_.is_terminal(other)) {
          for (std::size_t c = 0; c < dim_; ++c) rhs_[static_cast<std::size_t>(end - nt_) * dim_ + c] += w * cat(other)[c];
        }
      }
    }
    for (auto it = bfs_order_.rbegin(); it != bfs_order_.rend(); ++it) {
      const int v = *it;
      const int p = parent_[static_cast<std::size_t>(v)];
      if (t_.is_terminal(v) || p < 0 || t_.is_terminal(p)) continue;
      const double w = edge_weight_[static_cast<std::size_t>(v)];
      const double ratio = w / diag_[static_cast<std::size_t>(v - nt_)];
      diag_[static_cast<std::size_t>(p - nt_)] -= w * ratio;
      for (std::size_t c = 0; c < dim_; ++c) {
        rhs_[static_cast<std::size_t>(p - nt_) * dim_ + c] += ratio * rhs_[static_cast<std::size_t>(v - nt_) * dim_ + c];
      }
    }
    double largest = 0.0;
    for (int v : bfs_order_) {
      if (t_.is_terminal(v)) continue;
      const int p = parent_[static_cast<std::size_t>(v)];
      const bool attached = p >= 0 && !t_.is_terminal(p);
      const double w = attached ? edge_weight_[static_cast<std::size_t>(v)] : 0.0;
      auto s = at(v);
      double move = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) {
        double value = rhs_[static_cast<std::size_t>(v - nt_) * dim_ + c];
        if (attached) value += w * cat(p)[c];
        value /= diag_[static_cast<std::size_t>(v - nt_)];
        move += (value - s[c]) * (value - s[c]);
        s[c] = value;
      }
      largest = std::max(largest, std::sqrt(move));
    }
    return largest;
  }

 private:
  // Weight of the edge between v and its BFS parent, stored at v.
  double& weight_of_child_edge(int u, int v) {
    const int child = parent_[static_cast<std::size_t>(v)] == u ? v : u;
    return edge_weight_[static_cast<std::size_t>(child)];
  }

  const Topology& t_;
  int n_;
  int nt_;
  std::size_t dim_;
  std::vector<double> x_;
  std::vector<std::array<int, 3>> triples_;
  std::vector<int> parent_;
  std::vector<int> bfs_order_;
  double diameter_ = 1.0;
  std::vector<double> scratch_;
  std::vector<double> diag_;
  std::vector<double> rhs_;
  std::vector<double> edge_weight_;
};

struct SweepOutcome {
  double cost = 0.0;
  double residual = 0.0;
  bool settled = false;  // cost and position criteria both met
  int sweeps = 0;
};

// Fermat sweeps until the cost and position criteria hold, the sweep cap is
// reached, or progress stalls against the duality gap.
SweepOutcome run_sweeps(Workspace& ws, const SolveOptions& options, int budget) {
  SweepOutcome out;
  double cost = ws.cost();
  double window_start = cost;
  const double move_tol = options.position_tol * ws.diameter();
  for (int sweep = 1; sweep <= budget; ++sweep) {
    const double move = ws.sweep();
    const double next = ws.cost();
    out.residual = cost > 0.0 ? std::abs(cost - next) / next : 0.0;
    cost = next;
    out.sweeps = sweep;
    if (out.residual < options.tol && move <= move_tol) {
      out.settled = true;
      break;
    }
    if (sweep % 64 == 0) {
      // Nearly collapsed edges can make positions flicker while the cost
      // stays put.
      if (window_start - cost <= options.tol * cost) {
        out.settled = true;
        break;
      }
      const double gap = cost - ws.lower_bound();
      if (gap > options.gap_tol * cost && window_start - cost < 0.01 * gap) break;
      window_start = cost;
    }
  }
  out.cost = cost;
  return out;
}

void run_smoothed(Workspace& ws) {
  for (double eps = 1e-3; eps >= 1e-12; eps /= 10.0) {
    const double scaled = eps * ws.diameter();
    for (int iter = 0; iter < 500; ++iter) {
      if (ws.smoothed_step(scaled) <= 1e-3 * scaled) break;
    }
  }
}

SteinerTree to_tree(Workspace& ws, const std::vector<Point>& terminals, const Topology& t) {
  std::vector<Point> positions(terminals.begin(), terminals.end());
  positions.reserve(static_cast<std::size_t>(t.n_nodes()));
  for (int j = 0; j < t.n_steiner(); ++j) {
    const auto s = ws.at(t.n_terminals() + j);
    positions.emplace_back(std::vector<double>(s.begin(), s.end()));
  }
  return make_tree(t, std::move(positions));
}

void check_terminals(const std::vector<Point>& terminals, const Topology& t) {
  if (terminals.size() != static_cast<std::size_t>(t.n_terminals())) {
    throw SizeError("relatively_minimal: topology has " + std::to_string(t.n_terminals()) + " terminals, got " +
                    std::to_string(terminals.size()) + " points");
  }
  for (const auto& p : terminals) {
    if (p.dim() != terminals.front().dim()) throw DimensionError("relatively_minimal: terminal dimensions differ");
  }
}

}  // namespace

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("STEINER_WORKERS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SteinerTree relatively_minimal(const std::vector<Point>& terminals, const Topology& t, const SolveOptions& options,
                               const std::optional<std::vector<Point>>& initial) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("relatively_minimal: tol must be positive");
  check_terminals(terminals, t);
  Workspace ws(terminals, t);
  ws.initialize(initial);

  int budget = options.max_sweeps;
  SweepOutcome outcome = run_sweeps(ws, options, budget);
  budget -= outcome.sweeps;
  double lower = ws.lower_bound();
  for (int attempt = 0; attempt < 2 && budget > 0; ++attempt) {
    if (outcome.cost - lower <= options.gap_tol * outcome.cost) break;
    run_smoothed(ws);
    outcome = run_sweeps(ws, options, budget);
    budget -= outcome.sweeps;
    lower = ws.lower_bound();
  }

  SteinerTree tree = to_tree(ws, terminals, t);
  tree.residual = outcome.residual;
  tree.lower_bound = lower;
  tree.converged = outcome.settled && tree.cost - lower <= kGapCertificate * tree.cost;
  return tree;
}

SteinerTree relatively_minimal(const std::vector<Point>& terminals, const Topology& t, double tol) {
  SolveOptions options;
  options.tol = tol;
  return relatively_minimal(terminals, t, options);
}

double dual_lower_bound(const SteinerTree& tree) {
  std::vector<Point> terminals(tree.terminals().begin(), tree.terminals().end());
  Workspace ws(terminals, tree.topology);
  std::vector<Point> steiner(tree.positions.begin() + tree.topology.n_terminals(), tree.positions.end());
  ws.initialize(steiner);
  return ws.lower_bound();
}

SolveReport optimal_steiner_tree(const std::vector<Point>& terminals, const SolveOptions& options) {
  const int n = static_cast<int>(terminals.size());
  if (n < 3) throw SizeError("optimal_steiner_tree: need at least 3 terminals");
  const std::vector<Topology> topologies = enumerate_full_topologies(n, options.cap);

  std::vector<TopologyCost> costs(topologies.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < topologies.size(); i = next++) {
      const SteinerTree tree = relatively_minimal(terminals, topologies[i], options);
      costs[i] = TopologyCost{static_cast<int>(i), topologies[i].canonical_encoding(), tree.cost, tree.converged};
    }
  };
  const int workers = std::min<int>(resolve_workers(options.workers), static_cast<int>(topologies.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& c : costs) best_cost = std::min(best_cost, c.cost);
  int best_id = -1;
  std::vector<int> ties;
  for (const auto& c : costs) {
    if (c.cost <= best_cost + options.tie_tol) {
      ties.push_back(c.id);
      if (best_id < 0 || c.encoding < costs[static_cast<std::size_t>(best_id)].encoding) best_id = c.id;
    }
  }
  SolveReport report{relatively_minimal(terminals, topologies[static_cast<std::size_t>(best_id)], options), best_id,
                     std::move(costs), std::move(ties)};
  return report;
}

double mst_cost(const std::vector<Point>& points) {
  if (points.size() < 2) throw SizeError("mst_cost: need at least 2 points");
  const std::size_t n = points.size();
  std::vector<double> reach(n, std::numeric_limits<double>::infinity());
  std::vector<bool> in_tree(n, false);
  reach[0] = 0.0;
  double total = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && (pick == n || reach[v] < reach[pick])) pick = v;
    }
    in_tree[pick] = true;
    total += reach[pick];
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v]) reach[v] = std::min(reach[v], distance(points[pick], points[v]));
    }
  }
  return total;
}

double steiner_ratio(const std::vector<Point>& points, const SolveOptions& options) {
  return optimal_steiner_tree(points, options).best.cost / mst_cost(points);
}

std::vector<Point> simplex_points(int d) {
  if (d < 1) throw DimensionError("simplex_points: dimension must be at least 1");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) out.push_back(Point::basis(static_cast<std::size_t>(d), static_cast<std::size_t>(i)));
  return out;
}

}  // namespace steiner
