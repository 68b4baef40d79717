#include "steiner/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <sstream>

namespace steiner {

namespace {

Point point_from_json(const json& value, std::size_t dim, const std::string& where) {
  if (!value.is_array()) throw FormatError(where + ": expected an array of numbers");
  std::vector<double> coords;
  coords.reserve(value.size());
  for (const auto& c : value) {
    if (!c.is_number()) throw FormatError(where + ": non-numeric coordinate");
    coords.push_back(c.get<double>());
  }
  if (dim != 0 && coords.size() != dim) {
    throw FormatError(where + ": expected " + std::to_string(dim) + " coordinates, got " +
                      std::to_string(coords.size()));
  }
  try {
    return Point(std::move(coords));
  } catch (const std::invalid_argument& e) {
    throw FormatError(where + ": " + e.what());
  }
}

json witness_to_json(const Witness& w) { return json{{"location", w.location}, {"value", w.value}, {"bound", w.bound}}; }

}  // namespace

json point_set_to_json(const std::vector<Point>& points) {
  json doc;
  doc["dim"] = points.empty() ? 0 : points.front().dim();
  doc["points"] = json::array();
  for (const auto& p : points) doc["points"].push_back(p.values());
  return doc;
}

std::vector<Point> point_set_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("points")) {
    throw FormatError("point set: expected an object with \"dim\" and \"points\"");
  }
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
    throw FormatError("point set: \"dim\" must be a positive integer");
  }
  const auto dim = doc["dim"].get<std::size_t>();
  if (!doc["points"].is_array()) throw FormatError("point set: \"points\" must be an array");
  std::vector<Point> out;
  for (std::size_t i = 0; i < doc["points"].size(); ++i) {
    out.push_back(point_from_json(doc["points"][i], dim, "point set: point " + std::to_string(i)));
  }
  return out;
}

json tree_to_json(const SteinerTree& tree) {
  const Topology& t = tree.topology;
  json doc;
  doc["dim"] = tree.dim();
  doc["n_terminals"] = t.n_terminals();
  doc["n_steiner"] = t.n_steiner();
  doc["nodes"] = json::array();
  for (int v = 0; v < t.n_nodes(); ++v) {
    doc["nodes"].push_back(json{{"name", t.node_name(v)}, {"position", tree.position(v).values()}});
  }
  doc["edges"] = json::array();
  for (const auto& [u, v] : t.edges()) doc["edges"].push_back(json::array({t.node_name(u), t.node_name(v)}));
  doc["cost"] = tree.cost;
  doc["converged"] = tree.converged;
  doc["residual"] = tree.residual;
  doc["collapsed"] = json::array();
  for (const auto& [u, v] : tree.collapsed) doc["collapsed"].push_back(json::array({t.node_name(u), t.node_name(v)}));
  return doc;
}

SteinerTree tree_from_json(const json& doc) {
  for (const char* key : {"n_terminals", "n_steiner", "nodes", "edges"}) {
    if (!doc.is_object() || !doc.contains(key)) throw FormatError(std::string("tree: missing \"") + key + "\"");
  }
  for (const char* key : {"n_terminals", "n_steiner"}) {
    if (!doc[key].is_number_integer() || doc[key].get<long long>() < 0) {
      throw FormatError(std::string("tree: \"") + key + "\" must be a non-negative integer");
    }
  }
  if (!doc["nodes"].is_array() || !doc["edges"].is_array()) {
    throw FormatError("tree: \"nodes\" and \"edges\" must be arrays");
  }
  const int n_terminals = doc["n_terminals"].get<int>();
  const int n_steiner = doc["n_steiner"].get<int>();
  std::vector<std::pair<std::string, std::string>> named;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
      throw FormatError("tree: each edge must be a pair of node names");
    }
    named.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  std::ostringstream text;
  text << "n_terminals " << n_terminals << "\nn_steiner " << n_steiner << '\n';
  for (const auto& [a, b] : named) text << a << ' ' << b << '\n';
  std::istringstream in(text.str());
  Topology topology = [&] {
    try {
      return topology_from_text(in);
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("tree: ") + e.what());
    }
  }();

  std::map<int, Point> by_index;
  if (doc.contains("dim") && !doc["dim"].is_number_unsigned()) {
    throw FormatError("tree: \"dim\" must be a positive integer");
  }
  std::size_t dim = doc.contains("dim") ? doc["dim"].get<std::size_t>() : 0;
  for (const auto& node : doc["nodes"]) {
    if (!node.contains("name") || !node.contains("position")) {
      throw FormatError("tree: each node needs \"name\" and \"position\"");
    }
    if (!node["name"].is_string()) throw FormatError("tree: node names must be strings");
    const std::string name = node["name"].get<std::string>();
    int index = 0;
    try {
      index = topology.node_index(name);
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("tree: ") + e.what());
    }
    Point p = point_from_json(node["position"], dim, "tree: node " + name);
    dim = p.dim();
    if (!by_index.emplace(index, std::move(p)).second) throw FormatError("tree: node " + name + " listed twice");
  }
  if (static_cast<int>(by_index.size()) != topology.n_nodes()) {
    throw FormatError("tree: expected positions for " + std::to_string(topology.n_nodes()) + " nodes");
  }
  std::vector<Point> positions;
  for (auto& [index, p] : by_index) positions.push_back(std::move(p));
  SteinerTree tree = make_tree(std::move(topology), std::move(positions));
  if (doc.contains("converged")) tree.converged = doc["converged"].get<bool>();
  if (doc.contains("residual")) tree.residual = doc["residual"].get<double>();
  return tree;
}

json report_to_json(const VerificationReport& report) {
  json doc;
  doc["passed"] = report.passed();
  doc["tolerances"] = json{{"angle_deg", report.tolerances.angle_tol_deg},
                           {"length", report.tolerances.length_tol},
                           {"coplanarity", report.tolerances.coplanarity_tol},
                           {"face", report.tolerances.face_tol}};
  doc["checks"] = json::array();
  for (const auto& c : report.checks) {
    json entry{{"name", c.name}, {"status", to_string(c.status)}};
    entry["witness"] = c.witness ? witness_to_json(*c.witness) : json(nullptr);
    entry["notes"] = c.notes;
    doc["checks"].push_back(std::move(entry));
  }
  return doc;
}

json read_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

Graph read_edge_list(std::istream& in, int n_vertices) {
  std::vector<Edge> edges;
  int largest = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long u = 0;
    long long v = 0;
    if (!(fields >> u)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw FormatError("edge list line " + std::to_string(line_no) + ": expected two vertex ids");
    }
    std::string rest;
    if (!(fields >> v) || (fields >> rest)) {
      throw FormatError("edge list line " + std::to_string(line_no) + ": expected two vertex ids");
    }
    if (u < 0 || v < 0 || u > 1'000'000 || v > 1'000'000) {
      throw FormatError("edge list line " + std::to_string(line_no) + ": vertex id out of range");
    }
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    largest = std::max<int>(largest, static_cast<int>(std::max(u, v)));
  }
  try {
    return Graph(std::max(n_vertices, largest + 1), std::move(edges));
  } catch (const GraphError& e) {
    throw FormatError(std::string("edge list: ") + e.what());
  }
}

std::string ratio_csv(const RatioSequence& seq) {
  std::string out = "k,d2k,ell_k,gap\n";
  long long d2k = seq.d0;
  for (std::size_t k = 0; k < seq.values.size(); ++k) {
    out += std::to_string(k) + "," + std::to_string(d2k) + "," + format_number(seq.values[k]) + "," +
           format_number(seq.values[k] - seq.limit) + "\n";
    d2k *= 2;
  }
  return out;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace steiner
