// Command-line front end: solve, construct, ratio, embed, verify, topology.
//
// Exit codes: 0 success, 1 validation failure, 2 usage or input error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "steiner/construct.hpp"
#include "steiner/embed.hpp"
#include "steiner/io.hpp"
#include "steiner/solver.hpp"
#include "steiner/topology.hpp"
#include "steiner/verify.hpp"

using namespace steiner;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kUsage = 2;

// Raised for conditions that should exit with kValidation.
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return in;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string describe_tree(const SteinerTree& tree) {
  std::ostringstream out;
  const Topology& t = tree.topology;
  out << "terminals " << t.n_terminals() << ", steiner " << t.n_steiner() << ", dim " << tree.dim() << '\n';
  out << "cost " << format_number(tree.cost) << "  converged " << (tree.converged ? "yes" : "no") << "  residual "
      << format_number(tree.residual) << '\n';
  for (int j = 0; j < t.n_steiner(); ++j) {
    const int s = t.steiner_node(j);
    out << t.node_name(s) << " (";
    for (std::size_t c = 0; c < tree.dim(); ++c) out << (c ? ", " : "") << format_number(tree.position(s)[c]);
    out << ")\n";
  }
  out << "edges";
  for (const auto& [u, v] : t.edges()) out << ' ' << t.node_name(u) << '-' << t.node_name(v);
  out << '\n';
  if (!tree.collapsed.empty()) out << "collapsed edges: " << tree.collapsed.size() << '\n';
  return out.str();
}

struct Common {
  bool as_json = false;
  std::string output;
  int workers = 0;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_flag("--json", common.as_json, "Print JSON instead of text");
  cmd->add_option("-o,--output", common.output, "Write JSON to this file");
}

void emit(const Common& common, const json& doc, const std::string& text) {
  if (!common.output.empty()) {
    write_output(common.output, dump(doc));
    std::cout << text;
  } else if (common.as_json) {
    std::cout << dump(doc);
  } else {
    std::cout << text;
  }
}

// solve ---------------------------------------------------------------------

struct SolveArgs {
  std::string points_file;
  std::string topology_file;
  bool exact = false;
  double tol = 1e-12;
  int cap = kDefaultTopologyCap;
};

int run_solve(const SolveArgs& args, const Common& common) {
  auto in = open_input(args.points_file);
  const std::vector<Point> points = point_set_from_json(read_json(in));
  if (points.size() < 2) throw FormatError("solve: need at least 2 points");
  SolveOptions options;
  options.tol = args.tol;
  options.cap = args.cap;
  options.workers = common.workers;

  json doc;
  std::ostringstream text;
  std::optional<SteinerTree> tree;
  if (!args.topology_file.empty()) {
    auto tin = open_input(args.topology_file);
    tree = relatively_minimal(points, topology_from_text(tin), options);
  } else {
    if (static_cast<int>(points.size()) > args.cap) {
      throw SizeError("solve: " + std::to_string(points.size()) + " terminals exceed the exact-search cap of " +
                      std::to_string(args.cap));
    }
    const SolveReport report = optimal_steiner_tree(points, options);
    tree = report.best;
    doc["topologies"] = report.all_costs.size();
    doc["ties"] = report.ties.size();
    const int n = static_cast<int>(points.size());
    const bool conj = isomorphic(report.best.topology, conjectured_topology(n));
    doc["matches_conjectured_topology"] = conj;
    text << "exact search over " << report.all_costs.size() << " topologies, " << report.ties.size()
         << " tied at the optimum\n";
    text << "best topology " << (conj ? "is" : "is not") << " isomorphic to the conjectured topology\n";
  }
  const double mst = mst_cost(points);
  const VerificationReport verification = verify_tree(*tree);
  doc["tree"] = tree_to_json(*tree);
  doc["mst_cost"] = mst;
  doc["ratio"] = tree->cost / mst;
  doc["verification"] = report_to_json(verification);
  text << describe_tree(*tree);
  text << "mst " << format_number(mst) << "  ratio " << format_number(tree->cost / mst) << '\n';
  text << to_text(verification);
  emit(common, doc, text.str());
  return verification.passed() ? kOk : kValidation;
}

// construct -----------------------------------------------------------------

struct ConstructArgs {
  int base = 0;
  std::string base_file;
  int doublings = -1;
  int pow2 = -1;
};

int run_construct(const ConstructArgs& args, const Common& common) {
  CandidateTree candidate = [&] {
    if (args.pow2 >= 0) {
      if (args.base != 0 || !args.base_file.empty() || args.doublings >= 0) {
        throw CLI::ValidationError("construct: --pow2 cannot be combined with a base tree or --doublings");
      }
      return pow2_simplex_tree(args.pow2);
    }
    if ((args.base != 0) == !args.base_file.empty()) {
      throw CLI::ValidationError("construct: give exactly one of --base, --base-file, or use --pow2");
    }
    SteinerTree base = [&] {
      if (args.base != 0) return simplex_base_tree(args.base);
      auto in = open_input(args.base_file);
      const json doc = read_json(in);
      return tree_from_json(doc.contains("tree") ? doc["tree"] : doc);
    }();
    CandidateTree current = make_candidate(std::move(base));
    for (int step = 1; step <= args.doublings; ++step) {
      try {
        current = double_tree(current.tree);
      } catch (const ConstructionError& e) {
        throw ValidationFailure("doubling step " + std::to_string(step) + ": " + e.what());
      }
    }
    return current;
  }();

  const VerificationReport verification = check_candidate(candidate.tree);
  json doc;
  doc["tree"] = tree_to_json(candidate.tree);
  const bool simplex = has_simplex_terminals(candidate.tree);
  if (simplex) doc["ratio"] = simplex_ratio(candidate.tree);
  doc["min_angle_deg"] = candidate.min_angle_deg;
  doc["fermat_margins"] = candidate.fermat_margins;
  doc["verification"] = report_to_json(verification);

  std::ostringstream text;
  text << describe_tree(candidate.tree);
  if (simplex) text << "ratio " << format_number(simplex_ratio(candidate.tree)) << '\n';
  text << "min angle " << format_number(candidate.min_angle_deg) << " deg\n";
  text << to_text(verification);
  emit(common, doc, text.str());
  return verification.passed() && candidate.is_valid() ? kOk : kValidation;
}

// ratio ---------------------------------------------------------------------

struct RatioArgs {
  int d = 0;
  int k = 0;
  std::optional<double> l0;
};

int run_ratio(const RatioArgs& args, const Common& common) {
  if (args.d < 3) throw CLI::ValidationError("ratio: --d must be at least 3");
  double l0 = 0.0;
  if (args.l0) {
    l0 = *args.l0;
  } else if (args.d <= kDefaultTopologyCap) {
    l0 = simplex_ratio(simplex_base_tree(args.d));
  } else {
    throw CLI::ValidationError("ratio: --l0 is required for d above " + std::to_string(kDefaultTopologyCap));
  }
  const RatioSequence seq = ratio_sequence(l0, args.d, args.k);
  if (seq.warning) {
    std::cerr << "warning: l0 = " << format_number(l0) << " is not above the limit " << format_number(seq.limit)
              << "; monotone convergence is not guaranteed\n";
  }
  if (common.as_json || !common.output.empty()) {
    json doc{{"d0", seq.d0}, {"values", seq.values}, {"limit", seq.limit}, {"warning", seq.warning}};
    emit(common, doc, ratio_csv(seq));
  } else {
    std::cout << ratio_csv(seq);
  }
  return kOk;
}

// embed ---------------------------------------------------------------------

struct EmbedArgs {
  std::string graph_file;
  std::string scale = "raw";
  bool reduce = false;
  int scan = 0;
  bool solve_pruned = false;
};

json graph_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back(json::array({u, v}));
  return json{{"n_vertices", g.n_vertices()}, {"edges", edges}};
}

int run_scan(const EmbedArgs& args, const Common& common) {
  ScanOptions options;
  options.solve_pruned = args.solve_pruned;
  options.solve.workers = common.workers;
  const ScanReport report = star_scan(args.scan, options);

  std::ostringstream csv;
  csv << "graph,n_vertices,edges,is_star,pruned_by,diameter,cost,mst,ratio\n";
  json entries = json::array();
  for (const auto& e : report.entries) {
    std::string edges;
    for (const auto& [u, v] : e.graph.edges()) edges += (edges.empty() ? "" : " ") + std::to_string(u) + "-" + std::to_string(v);
    const std::string pruned =
        e.pruned_by ? std::to_string(e.pruned_by->first) + "/" + std::to_string(e.pruned_by->second) : "";
    csv << e.canonical << ',' << e.graph.n_vertices() << ',' << edges << ',' << (e.is_star ? 1 : 0) << ',' << pruned
        << ',' << e.diameter << ',' << (e.solved ? format_number(e.cost) : "") << ','
        << (e.solved ? format_number(e.mst) : "") << ',' << (e.solved ? format_number(e.cost / e.mst) : "") << '\n';
    json entry{{"graph", graph_json(e.graph)}, {"canonical", e.canonical}, {"is_star", e.is_star},
               {"diameter", e.diameter}, {"solved", e.solved}};
    entry["pruned_by"] = e.pruned_by ? json::array({e.pruned_by->first, e.pruned_by->second}) : json(nullptr);
    entry["cost"] = e.solved ? json(e.cost) : json(nullptr);
    entry["mst"] = e.solved ? json(e.mst) : json(nullptr);
    entries.push_back(std::move(entry));
  }
  csv << "# star cost " << format_number(report.star_cost) << ", star minimal: " << (report.star_minimal ? "yes" : "no")
      << ", ties:";
  for (int t : report.ties) csv << ' ' << report.entries[static_cast<std::size_t>(t)].canonical;
  csv << '\n';
  json doc{{"m", report.m}, {"star_cost", report.star_cost}, {"star_minimal", report.star_minimal},
           {"ties", report.ties}, {"entries", entries}};
  emit(common, doc, csv.str());
  return report.star_minimal ? kOk : kValidation;
}

int run_embed(const EmbedArgs& args, const Common& common) {
  if (args.scan > 0) return run_scan(args, common);
  if (args.graph_file.empty()) throw CLI::ValidationError("embed: a graph file is required unless --scan is given");
  auto in = open_input(args.graph_file);
  const Graph g = read_edge_list(in);
  if (args.reduce) {
    ReductionInstance instance = [&] {
      try {
        return make_reduction_instance(g);
      } catch (const GraphError& e) {
        throw ValidationFailure(e.what());
      }
    }();
    json doc = point_set_to_json(instance.config.points);
    doc["metadata"] = json{{"kind", "reduction"},
                           {"m", instance.m},
                           {"scale", instance.config.scale},
                           {"triangle_free", instance.triangle_free},
                           {"source", graph_json(g)}};
    emit(common, doc, dump(doc));
    return kOk;
  }
  double scale = 1.0;
  if (args.scale == "unit") {
    scale = kUnitScale;
  } else if (args.scale != "raw") {
    throw CLI::ValidationError("embed: --scale must be unit or raw");
  }
  const EmbeddedConfig config = embed_graph(g, scale);
  json doc = point_set_to_json(config.points);
  doc["metadata"] = json{{"kind", "embedding"}, {"scale", config.scale}, {"source", graph_json(g)}};
  emit(common, doc, dump(doc));
  return kOk;
}

// verify --------------------------------------------------------------------

struct VerifyArgs {
  std::string tree_file;
  VerifyOptions options;
};

int run_verify(const VerifyArgs& args, const Common& common) {
  auto in = open_input(args.tree_file);
  const json doc_in = read_json(in);
  const SteinerTree tree = tree_from_json(doc_in.contains("tree") ? doc_in["tree"] : doc_in);
  const VerificationReport report = verify_tree(tree, args.options);
  emit(common, report_to_json(report), to_text(report));
  return report.passed() ? kOk : kValidation;
}

// topology ------------------------------------------------------------------

std::string binary_tree_text(const BinaryTree& t, int node) {
  const auto& n = t.nodes[static_cast<std::size_t>(node)];
  if (n.is_leaf()) return "*";
  return "(" + binary_tree_text(t, n.left) + " " + binary_tree_text(t, n.right) + ")";
}

struct TopologyArgs {
  int leaves = 0;
  int d = 0;
  int n = 0;
  bool count_only = false;
  std::string file;
};

int run_good_tree(const TopologyArgs& args) {
  const GoodTree g = good_tree(args.leaves);
  std::cout << "leaves " << g.tree.leaf_count() << "\nheight " << g.height << "\n"
            << binary_tree_text(g.tree, g.tree.root()) << '\n';
  return kOk;
}

int run_conjectured(const TopologyArgs& args) {
  const Topology t = conjectured_topology(args.d);
  std::cout << to_text(t);
  return kOk;
}

int run_enumerate(const TopologyArgs& args) {
  const auto all = enumerate_full_topologies(args.n);
  if (args.count_only) {
    std::cout << all.size() << '\n';
    return kOk;
  }
  for (std::size_t i = 0; i < all.size(); ++i) std::cout << "# topology " << i << '\n' << to_text(all[i]);
  return kOk;
}

int run_wiener(const TopologyArgs& args) {
  const Topology t = [&] {
    if (args.d > 0) return conjectured_topology(args.d);
    if (args.file.empty()) throw CLI::ValidationError("wiener: give a topology file or --conjectured d");
    auto in = open_input(args.file);
    return topology_from_text(in);
  }();
  std::cout << "wiener " << terminal_wiener(t) << '\n';
  if (t.is_full()) std::cout << "semi_regular " << (is_semi_regular(t) ? "yes" : "no") << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euclidean Steiner trees on regular simplices"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--workers", common.workers, "Worker threads (default: STEINER_WORKERS or all cores)");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve a point set exactly or for a fixed topology");
  solve->add_option("points", solve_args.points_file, "Point-set JSON")->required();
  solve->add_option("--topology", solve_args.topology_file, "Topology text file (skip exact search)");
  solve->add_flag("--exact", solve_args.exact, "Exhaustive search over full topologies (default)");
  solve->add_option("--tol", solve_args.tol, "Relative cost tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--cap", solve_args.cap, "Largest terminal count for exact search");
  add_common(solve, common);

  ConstructArgs construct_args;
  auto* construct = app.add_subcommand("construct", "Build candidate trees by doubling or closed form");
  construct->add_option("--base", construct_args.base, "Base simplex size d");
  construct->add_option("--base-file", construct_args.base_file, "Base tree JSON on basis-vector terminals");
  construct->add_option("--doublings", construct_args.doublings, "Number of doubling steps")->check(CLI::NonNegativeNumber);
  construct->add_option("--pow2", construct_args.pow2, "Closed-form tree on 2^k terminals")->check(CLI::Range(2, 20));
  add_common(construct, common);

  RatioArgs ratio_args;
  auto* ratio = app.add_subcommand("ratio", "Ratio sequence of repeated doubling (CSV)");
  ratio->add_option("--d", ratio_args.d, "Starting simplex size")->required();
  ratio->add_option("--k", ratio_args.k, "Number of doublings")->required()->check(CLI::NonNegativeNumber);
  ratio->add_option("--l0", ratio_args.l0, "Starting ratio (default: solved base ratio)");
  add_common(ratio, common);

  EmbedArgs embed_args;
  auto* embed = app.add_subcommand("embed", "Embed graphs, build reduction instances, or scan m-edge graphs");
  embed->add_option("graph", embed_args.graph_file, "Edge-list file");
  embed->add_option("--scale", embed_args.scale, "unit (1/sqrt 2) or raw (1)");
  auto* reduce_flag = embed->add_flag("--reduce", embed_args.reduce, "Build the reduction instance");
  embed->add_option("--scan", embed_args.scan, "Compare all graphs with this many edges")->excludes(reduce_flag);
  embed->add_flag("--solve-pruned", embed_args.solve_pruned, "Also solve graphs pruned by the contraction lemma");
  add_common(embed, common);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run the structural checks on a tree file");
  verify->add_option("tree", verify_args.tree_file, "Tree JSON")->required();
  verify->add_option("--angle-tol", verify_args.options.angle_tol_deg, "Angle tolerance in degrees");
  verify->add_option("--length-tol", verify_args.options.length_tol, "Length tolerance");
  verify->add_option("--coplanarity-tol", verify_args.options.coplanarity_tol, "sigma3/sigma1 tolerance");
  add_common(verify, common);

  TopologyArgs topo_args;
  auto* topology = app.add_subcommand("topology", "Good trees, conjectured topologies, enumeration, Wiener index");
  topology->require_subcommand(1);
  auto* good = topology->add_subcommand("good-tree", "Good binary tree with L leaves");
  good->add_option("leaves", topo_args.leaves, "Leaf count")->required();
  auto* conj = topology->add_subcommand("conjectured", "Conjectured optimal topology on d terminals");
  conj->add_option("d", topo_args.d, "Terminal count")->required();
  auto* enumerate = topology->add_subcommand("enumerate", "All full topologies on n terminals");
  enumerate->add_option("n", topo_args.n, "Terminal count")->required();
  enumerate->add_flag("--count", topo_args.count_only, "Print only the number of topologies");
  auto* wiener = topology->add_subcommand("wiener", "Terminal Wiener index and semi-regularity");
  wiener->add_option("file", topo_args.file, "Topology text file");
  wiener->add_option("--conjectured", topo_args.d, "Use the conjectured topology on d terminals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*solve) return run_solve(solve_args, common);
    if (*construct) return run_construct(construct_args, common);
    if (*ratio) return run_ratio(ratio_args, common);
    if (*embed) return run_embed(embed_args, common);
    if (*verify) return run_verify(verify_args, common);
    if (*good) return run_good_tree(topo_args);
    if (*conj) return run_conjectured(topo_args);
    if (*enumerate) return run_enumerate(topo_args);
    if (*wiener) return run_wiener(topo_args);
  } catch (const ValidationFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ConstructionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
