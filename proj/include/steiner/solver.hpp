#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steiner/geometry.hpp"
#include "steiner/topology.hpp"
#include "steiner/tree.hpp"

namespace steiner {

/// A settled solve is reported converged when its duality gap is at most this
/// fraction of the cost. The 1e-9 rad vertex snap of the Fermat step limits
/// how tightly nearly collapsed edges can be certified.
inline constexpr double kGapCertificate = 1e-7;

struct SolveOptions {
  /// Relative cost change per sweep below which the sweep loop stops.
  double tol = 1e-12;
  /// Steiner moves per sweep must also fall below this times the terminal
  /// diameter before the loop stops.
  double position_tol = 1e-12;
  int max_sweeps = 100000;
  /// Relative duality gap above which the smoothed fallback is used.
  double gap_tol = 1e-10;
  /// Topologies within this absolute cost of the best are ties.
  double tie_tol = 1e-9;
  int cap = kDefaultTopologyCap;
  /// 0: read STEINER_WORKERS, else hardware concurrency.
  int workers = 0;
};

/// Worker count after applying the STEINER_WORKERS override.
int resolve_workers(int requested);

/// Minimum-length tree for topology `t` with the terminals fixed.
///
/// Cyclic Fermat sweeps from the centroid (plus a 1e-6 jitter per node), or
/// from `initial` Steiner positions when given. After each sweep, groups of
/// coincident Steiner points are moved together to the geometric median of
/// their outside neighbours. A stalled sweep, detected by a duality gap above
/// options.gap_tol, is restarted on an edge-smoothed objective with
/// decreasing smoothing and then polished by sweeps.
/// Every Steiner node must have degree 3.
SteinerTree relatively_minimal(const std::vector<Point>& terminals, const Topology& t,
                               const SolveOptions& options = {},
                               const std::optional<std::vector<Point>>& initial = std::nullopt);
SteinerTree relatively_minimal(const std::vector<Point>& terminals, const Topology& t, double tol);

/// Dual lower bound on the relatively minimal cost of tree.topology, built
/// from the edge directions of `tree`.
double dual_lower_bound(const SteinerTree& tree);

struct TopologyCost {
  int id = 0;  // index into enumerate_full_topologies
  std::string encoding;
  double cost = 0.0;
  bool converged = false;
};

struct SolveReport {
  SteinerTree best;
  int best_id = 0;
  std::vector<TopologyCost> all_costs;
  std::vector<int> ties;
};

/// Exhaustive search over every full topology. Results do not depend on the
/// worker count.
SolveReport optimal_steiner_tree(const std::vector<Point>& terminals, const SolveOptions& options = {});

/// Euclidean minimum spanning tree cost (Prim).
double mst_cost(const std::vector<Point>& points);

double steiner_ratio(const std::vector<Point>& points, const SolveOptions& options = {});

/// Standard basis vectors e_1..e_d in R^d.
std::vector<Point> simplex_points(int d);

}  // namespace steiner
