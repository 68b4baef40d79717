#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steiner/tree.hpp"

namespace steiner {

enum class CheckStatus { pass, fail, not_applicable };

const char* to_string(CheckStatus status);

/// The measurement behind a check outcome: where, what was measured, and the
/// bound it was compared with.
struct Witness {
  std::string location;
  double value = 0.0;
  double bound = 0.0;
};

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::not_applicable;
  /// For a failing check the worst violation; for a passing check the
  /// tightest case. Always present on failure.
  std::optional<Witness> witness;
  std::vector<std::string> notes;
};

struct VerifyOptions {
  double angle_tol_deg = 1e-7;
  double length_tol = 1e-9;
  double coplanarity_tol = 1e-8;
  double face_tol = 1e-7;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  VerifyOptions tolerances;

  /// No check failed.
  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

/// Every pair of non-degenerate edges at a node includes at least
/// 120 - tol_deg degrees. Edges shorter than length_tol are skipped.
CheckResult check_angles(const SteinerTree& t, double tol_deg = 1e-7, double length_tol = 1e-9);

/// Every Steiner node has degree 3 and its edge directions have
/// sigma_3 / sigma_1 <= coplanarity_tol.
CheckResult check_steiner_structure(const SteinerTree& t, double coplanarity_tol = 1e-8);

/// Every Steiner coordinate lies strictly inside the terminal range by more
/// than `margin`. Coordinates on which all terminals agree are skipped.
CheckResult check_coordinate_bounds(const SteinerTree& t, double margin = 1e-9);

/// Each Steiner–Steiner edge is at least (sqrt(6)/2 - 1) L0 - length_tol long,
/// L0 being the shortest other edge at its two endpoints. Needs dim >= 3.
CheckResult check_edge_bound(const SteinerTree& t, double length_tol = 1e-9);

/// Terminals that are extremal in every coordinate have degree 1.
CheckResult check_leaf_condition(const std::vector<Point>& points, const SteinerTree& t, double tol = 1e-9);
CheckResult check_leaf_condition(const SteinerTree& t, double tol = 1e-9);

/// On the regular simplex (basis-vector terminals) every terminal–Steiner
/// edge is longer than 1/sqrt(3) - length_tol.
CheckResult check_orphan_bound(const SteinerTree& t, double length_tol = 1e-9);

/// Diagnostic on the regular simplex: for a Steiner point next to e_i, rays
/// along its other two edges leave the simplex through the face x_i = 0.
CheckResult check_face_exit(const SteinerTree& t, double tol = 1e-7);

/// check_angles and check_steiner_structure.
VerificationReport check_candidate(const SteinerTree& t, const VerifyOptions& options = {});

/// Every check above, the face diagnostic included.
VerificationReport verify_tree(const SteinerTree& t, const VerifyOptions& options = {});

/// One line per check.
std::string to_text(const VerificationReport& report);

}  // namespace steiner
