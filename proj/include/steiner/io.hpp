#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "steiner/construct.hpp"
#include "steiner/embed.hpp"
#include "steiner/tree.hpp"
#include "steiner/verify.hpp"

namespace steiner {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using json = nlohmann::ordered_json;

/// {"dim": d, "points": [[...], ...]}
json point_set_to_json(const std::vector<Point>& points);
std::vector<Point> point_set_from_json(const json& doc);

/// dim, n_terminals, n_steiner, nodes [{name, position}], edges [[u, v]],
/// cost, converged, residual, collapsed.
json tree_to_json(const SteinerTree& tree);
SteinerTree tree_from_json(const json& doc);

json report_to_json(const VerificationReport& report);

/// Parses a whole stream as JSON; throws FormatError on syntax errors.
json read_json(std::istream& in);

/// "u v" per line, 0-indexed, '#' starts a comment. The vertex count is the
/// largest id plus one unless `n_vertices` is larger.
Graph read_edge_list(std::istream& in, int n_vertices = 0);

/// Columns k, d2k, ell_k, gap.
std::string ratio_csv(const RatioSequence& seq);

/// Nine significant digits.
std::string format_number(double x);

}  // namespace steiner
