#include "steiner/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace steiner {

namespace {

// Keeps the tightest measurement seen and whether any measurement violated
// its bound.
class Tracker {
 public:
  explicit Tracker(std::string name) { result_.name = std::move(name); }

  void add(std::string location, double value, double bound, double slack, bool violated) {
    ++count_;
    const bool replace = violated ? (!any_violation_ || slack < slack_) : (!any_violation_ && slack < slack_);
    if (violated) any_violation_ = true;
    if (replace) {
      slack_ = slack;
      result_.witness = Witness{std::move(location), value, bound};
    }
  }
  void note(std::string text) { result_.notes.push_back(std::move(text)); }

  CheckResult finish() {
    if (count_ == 0) {
      result_.status = CheckStatus::not_applicable;
      result_.witness.reset();
    } else {
      result_.status = any_violation_ ? CheckStatus::fail : CheckStatus::pass;
    }
    return std::move(result_);
  }

  CheckResult not_applicable(std::string why) {
    note(std::move(why));
    count_ = 0;
    return finish();
  }

 private:
  CheckResult result_;
  int count_ = 0;
  bool any_violation_ = false;
  double slack_ = std::numeric_limits<double>::infinity();
};

std::string edge_name(const Topology& t, int u, int v) { return t.node_name(u) + "-" + t.node_name(v); }

double coordinate_min(const SteinerTree& t, std::size_t i) {
  double lo = std::numeric_limits<double>::infinity();
  for (const Point& p : t.terminals()) lo = std::min(lo, p[i]);
  return lo;
}

double coordinate_max(const SteinerTree& t, std::size_t i) {
  double hi = -std::numeric_limits<double>::infinity();
  for (const Point& p : t.terminals()) hi = std::max(hi, p[i]);
  return hi;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::not_applicable:
      return "n/a";
  }
  return "?";
}

bool VerificationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

CheckResult check_angles(const SteinerTree& t, double tol_deg, double length_tol) {
  Tracker track("angles");
  const Topology& top = t.topology;
  int skipped = 0;
  for (int v = 0; v < top.n_nodes(); ++v) {
    const auto& nb = top.neighbors(v);
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        const Point u = t.position(nb[a]) - t.position(v);
        const Point w = t.position(nb[b]) - t.position(v);
        if (u.norm() < length_tol || w.norm() < length_tol) {
          ++skipped;
          continue;
        }
        const double angle = detail::angle_rad(u.coords(), w.coords()) * 180.0 / std::numbers::pi;
        track.add(top.node_name(nb[a]) + "-" + top.node_name(v) + "-" + top.node_name(nb[b]), angle, 120.0,
                  angle - (120.0 - tol_deg), angle < 120.0 - tol_deg);
      }
    }
  }
  if (skipped > 0) track.note(std::to_string(skipped) + " edge pair(s) with a zero-length edge skipped");
  return track.finish();
}

CheckResult check_steiner_structure(const SteinerTree& t, double coplanarity_tol) {
  Tracker track("steiner_structure");
  const Topology& top = t.topology;
  for (int j = 0; j < top.n_steiner(); ++j) {
    const int s = top.steiner_node(j);
    const int degree = top.degree(s);
    if (degree != 3) {
      track.add(top.node_name(s) + " degree", degree, 3.0, -std::abs(degree - 3.0), true);
      continue;
    }
    Eigen::MatrixXd directions(static_cast<Eigen::Index>(t.dim()), 3);
    int used = 0;
    for (int w : top.neighbors(s)) {
      const Point u = t.position(w) - t.position(s);
      const double len = u.norm();
      if (len == 0.0) continue;
      for (std::size_t c = 0; c < t.dim(); ++c) directions(static_cast<Eigen::Index>(c), used) = u[c] / len;
      ++used;
    }
    double ratio = 0.0;
    if (used == 3 && t.dim() >= 3) {
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(directions);
      const auto& sigma = svd.singularValues();
      ratio = sigma(2) / sigma(0);
    }
    track.add(top.node_name(s) + " coplanarity", ratio, coplanarity_tol, coplanarity_tol - ratio,
              ratio > coplanarity_tol);
  }
  return track.finish();
}

CheckResult check_coordinate_bounds(const SteinerTree& t, double margin) {
  Tracker track("coordinate_bounds");
  const Topology& top = t.topology;
  if (top.n_steiner() == 0) return track.not_applicable("no Steiner points");
  std::vector<std::size_t> skipped;
  for (std::size_t i = 0; i < t.dim(); ++i) {
    const double lo = coordinate_min(t, i);
    const double hi = coordinate_max(t, i);
    if (hi - lo <= margin) {
      skipped.push_back(i);
      continue;
    }
    for (int j = 0; j < top.n_steiner(); ++j) {
      const int s = top.steiner_node(j);
      const double x = t.position(s)[i];
      const double inside = std::min(x - lo, hi - x);
      track.add(top.node_name(s) + " coordinate " + std::to_string(i), inside, margin, inside - margin,
                !(inside > margin));
    }
  }
  if (!skipped.empty()) {
    std::string text = "coordinate(s) constant over the terminals skipped:";
    for (auto i : skipped) text += " " + std::to_string(i);
    track.note(text);
  }
  return track.finish();
}

CheckResult check_edge_bound(const SteinerTree& t, double length_tol) {
  Tracker track("edge_bound");
  if (t.dim() < 3) return track.not_applicable("dimension below 3");
  const Topology& top = t.topology;
  const double factor = std::sqrt(6.0) / 2.0 - 1.0;
  for (const auto& [u, v] : top.edges()) {
    if (top.is_terminal(u) || top.is_terminal(v)) continue;
    double l0 = std::numeric_limits<double>::infinity();
    for (int end : {u, v}) {
      const int other = end == u ? v : u;
      for (int w : top.neighbors(end)) {
        if (w != other) l0 = std::min(l0, t.edge_length({std::min(end, w), std::max(end, w)}));
      }
    }
    if (!std::isfinite(l0)) continue;
    const double length = t.edge_length({u, v});
    const double bound = factor * l0;
    track.add(edge_name(top, u, v), length, bound, length - (bound - length_tol), length < bound - length_tol);
  }
  return track.finish();
}

CheckResult check_leaf_condition(const std::vector<Point>& points, const SteinerTree& t, double tol) {
  Tracker track("leaf_condition");
  const Topology& top = t.topology;
  if (points.size() != static_cast<std::size_t>(top.n_terminals())) {
    throw SizeError("check_leaf_condition: point count does not match the terminal count");
  }
  const std::size_t dim = points.front().dim();
  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  for (const Point& p : points) {
    for (std::size_t c = 0; c < dim; ++c) {
      lo[c] = std::min(lo[c], p[c]);
      hi[c] = std::max(hi[c], p[c]);
    }
  }
  for (int i = 0; i < top.n_terminals(); ++i) {
    const Point& p = points[static_cast<std::size_t>(i)];
    bool extremal = true;
    for (std::size_t c = 0; c < dim && extremal; ++c) {
      extremal = std::abs(p[c] - lo[c]) <= tol || std::abs(p[c] - hi[c]) <= tol;
    }
    if (!extremal) continue;
    const int degree = top.degree(i);
    track.add(top.node_name(i) + " degree", degree, 1.0, 1.0 - degree, degree != 1);
  }
  return track.finish();
}

CheckResult check_leaf_condition(const SteinerTree& t, double tol) {
  return check_leaf_condition(std::vector<Point>(t.terminals().begin(), t.terminals().end()), t, tol);
}

CheckResult check_orphan_bound(const SteinerTree& t, double length_tol) {
  Tracker track("orphan_bound");
  if (!has_simplex_terminals(t)) return track.not_applicable("terminals are not the standard basis vectors");
  const Topology& top = t.topology;
  const double bound = 1.0 / std::sqrt(3.0);
  for (const auto& [u, v] : top.edges()) {
    if (top.is_terminal(u) == top.is_terminal(v)) continue;
    const double length = t.edge_length({u, v});
    track.add(edge_name(top, u, v), length, bound, length - (bound - length_tol), !(length > bound - length_tol));
  }
  return track.finish();
}

CheckResult check_face_exit(const SteinerTree& t, double tol) {
  Tracker track("face_exit");
  if (!has_simplex_terminals(t)) return track.not_applicable("terminals are not the standard basis vectors");
  const Topology& top = t.topology;
  const std::size_t dim = t.dim();
  for (int i = 0; i < top.n_terminals(); ++i) {
    for (int s : top.neighbors(i)) {
      if (top.is_terminal(s)) continue;
      for (int w : top.neighbors(s)) {
        if (w == i) continue;
        const Point& origin = t.position(s);
        const Point u = t.position(w) - origin;
        if (u.norm() == 0.0) {
          track.note("zero-length edge " + edge_name(top, s, w) + " skipped");
          continue;
        }
        double exit = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < dim; ++c) {
          if (u[c] < 0.0) exit = std::min(exit, -origin[c] / u[c]);
        }
        const std::string where = "ray " + top.node_name(s) + "->" + top.node_name(w) + " vs face " + std::to_string(i);
        if (!std::isfinite(exit)) {
          track.add(where, std::numeric_limits<double>::infinity(), 0.0, -std::numeric_limits<double>::infinity(),
                    true);
          continue;
        }
        const double xi = origin[static_cast<std::size_t>(i)] + exit * u[static_cast<std::size_t>(i)];
        track.add(where, xi, 0.0, tol - std::abs(xi), std::abs(xi) > tol);
      }
    }
  }
  return track.finish();
}

VerificationReport check_candidate(const SteinerTree& t, const VerifyOptions& options) {
  VerificationReport report;
  report.tolerances = options;
  report.checks.push_back(check_angles(t, options.angle_tol_deg, options.length_tol));
  report.checks.push_back(check_steiner_structure(t, options.coplanarity_tol));
  return report;
}

VerificationReport verify_tree(const SteinerTree& t, const VerifyOptions& options) {
  VerificationReport report = check_candidate(t, options);
  report.checks.push_back(check_coordinate_bounds(t, options.length_tol));
  report.checks.push_back(check_edge_bound(t, options.length_tol));
  report.checks.push_back(check_leaf_condition(t, options.length_tol));
  report.checks.push_back(check_orphan_bound(t, options.length_tol));
  report.checks.push_back(check_face_exit(t, options.face_tol));
  return report;
}

std::string to_text(const VerificationReport& report) {
  std::string out;
  for (const auto& c : report.checks) {
    char head[64];
    std::snprintf(head, sizeof head, "%-18s %-4s", c.name.c_str(), to_string(c.status));
    out += head;
    if (c.witness) {
      out += "  " + c.witness->location + ": " + format_number(c.witness->value) + " (bound " +
             format_number(c.witness->bound) + ")";
    }
    for (const auto& n : c.notes) out += "  [" + n + "]";
    while (out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

}  // namespace steiner
