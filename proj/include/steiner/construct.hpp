#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "steiner/tree.hpp"

namespace steiner {

class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// sqrt(3) / (sqrt(2) (2 sqrt(2) - 1)), the limiting simplex ratio of the
/// doubling recursion.
inline const double kRatioLimit = std::sqrt(3.0) / (std::numbers::sqrt2 * (2.0 * std::numbers::sqrt2 - 1.0));

/// A constructed tree with the quantities needed to judge it candidate-optimal.
struct CandidateTree {
  SteinerTree tree;
  /// Smallest angle between two edges at a common node, in degrees
  /// (180 when no node has two non-degenerate edges).
  double min_angle_deg = 180.0;
  bool steiner_degrees_ok = false;
  bool terminals_are_leaves = false;
  /// ||c_i - s'_i|| per old terminal for the last doubling step, empty otherwise.
  std::vector<double> fermat_margins;

  bool is_valid(double angle_tol_deg = 1e-7) const {
    return steiner_degrees_ok && terminals_are_leaves && min_angle_deg >= 120.0 - angle_tol_deg;
  }
};

/// Fills the validity record for `tree`.
CandidateTree make_candidate(SteinerTree tree, std::vector<double> fermat_margins = {});

/// Starting trees on the regular d-simplex: the star for d = 3, the closed
/// form for d = 4, and the exact optimum otherwise (d <= 9).
SteinerTree simplex_base_tree(int d);

/// One doubling step: split every Steiner point, keep the Steiner–Steiner
/// edges, and replace terminal e_i by a new Steiner point at the Fermat point
/// of e_{2i}, e_{2i+1} and the split neighbour of e_i.
///
/// New node order: terminals e_0..e_{2d-1}, the split Steiner points in their
/// old order, then one new Steiner point per old terminal.
CandidateTree double_tree(const SteinerTree& t);

/// k doubling steps; k = 0 returns the input with its validity record.
CandidateTree iterate_double(const SteinerTree& t, int k);

/// Closed-form candidate tree on the regular 2^k-simplex.
///
/// The topology joins the roots of two full binary trees labelled "0" and
/// "1"; the leaf labelled b is terminal int(b, 2). Steiner nodes are ordered
/// by label length, then lexicographically.
CandidateTree pow2_simplex_tree(int k);

struct RatioSequence {
  int d0 = 0;
  std::vector<double> values;
  double limit = kRatioLimit;
  /// Set when l0 <= limit, where monotone convergence is not guaranteed.
  bool warning = false;
};

/// l_0..l_K of the doubling recursion starting from ratio l0 on d terminals.
RatioSequence ratio_sequence(double l0, int d, int K);

/// Ratio of a tree on the regular simplex to its MST cost (n - 1) sqrt(2).
double simplex_ratio(const SteinerTree& tree);

}  // namespace steiner
