// cmcirc: circuit polynomials of the 2D Cayley-Menger ideal from
// combinatorial resultant trees, plus the supporting combinatorics.
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cmcircuits/cayley.hpp"
#include "cmcircuits/combres.hpp"
#include "cmcircuits/config.hpp"
#include "cmcircuits/errors.hpp"
#include "cmcircuits/io.hpp"
#include "cmcircuits/pipeline.hpp"
#include "cmcircuits/sparsity.hpp"

using namespace cmc;
using nlohmann::json;

namespace {

struct GlobalOpts {
  RunConfig config;
  bool json_output = false;
  std::string gen_mode = "k4";
  std::string plan_mode = "greedy";
  std::string engine = "bareiss";
};

void finalize(GlobalOpts& g) {
  if (g.config.cache_dir.empty()) {
    if (const char* env = std::getenv("CMCIRC_CACHE")) g.config.cache_dir = env;
  }
  g.config.plan_mode = g.plan_mode == "min-elim-degree" ? PlanMode::kMinElimDegree : PlanMode::kGreedy;
  g.config.resultant_engine =
      g.engine == "minors" ? ResultantEngine::kMinorExpansion : ResultantEngine::kBareiss;
}

GeneratorSet generator_set(const GlobalOpts& g, const GeneratorCatalog& catalog) {
  if (g.gen_mode == "k4") return GeneratorSet::k4_only();
  if (g.gen_mode == "k4k5") return GeneratorSet::k4_k5();
  // catalog: one representative per isomorphism class
  std::vector<Graph> members;
  for (const SupportClass& sc : classify_supports(catalog)) members.push_back(sc.representative);
  return GeneratorSet::from_graphs(std::move(members));
}

int catalog_n_for(const GlobalOpts& g, const Graph& target) {
  if (g.gen_mode == "k4") return 4;
  if (g.gen_mode == "k4k5") return 5;
  return std::min(7, std::max(4, target.vertex_count()));
}

json graph_json(const Graph& g) { return json::parse(graph_to_json(g)); }

json interval_json(const RootInterval& iv) {
  json j;
  j["lo"] = iv.lo.get_str();
  j["hi"] = iv.hi.get_str();
  j["exact"] = iv.exact;
  return j;
}

int cmd_sparsity(const GlobalOpts& g, const std::string& file) {
  Graph graph = read_graph_file(file);
  int r = rank(graph);
  bool rigid = is_rigid(graph);
  bool independent = r == graph.edge_count();
  bool circuit = is_circuit(graph);
  json out;
  out["vertices"] = graph.vertex_count();
  out["edges"] = graph.edge_count();
  out["rank"] = r;
  out["rigid"] = rigid;
  out["independent"] = independent;
  out["laman"] = is_laman(graph);
  out["circuit"] = circuit;
  if (rigid && !independent) {
    EdgeClassification cls = classify_edges(graph);
    json ed = json::object();
    for (const auto& [e, red] : cls.redundant) ed[to_string(e)] = red ? "redundant" : "critical";
    out["edge_classification"] = std::move(ed);
  }
  json comps = json::array();
  for (const Graph& c : rigid_components(graph)) comps.push_back(graph_json(c));
  out["rigid_components"] = std::move(comps);
  if (g.json_output) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "vertices: " << graph.vertex_count() << "  edges: " << graph.edge_count() << "\n"
              << "rank: " << r << "\n"
              << "rigid: " << (rigid ? "yes" : "no") << "  independent: "
              << (independent ? "yes" : "no") << "  laman: " << (is_laman(graph) ? "yes" : "no")
              << "  circuit: " << (circuit ? "yes" : "no") << "\n";
    if (out.contains("edge_classification"))
      for (auto& [k, v] : out["edge_classification"].items())
        std::cout << "  edge " << k << ": " << v.get<std::string>() << "\n";
    std::cout << "rigid components: " << out["rigid_components"].size() << "\n";
    for (auto& c : out["rigid_components"]) std::cout << "  " << c.dump() << "\n";
  }
  return 0;
}

int cmd_plan(const GlobalOpts& g, const std::string& file, const std::string& out_file) {
  Graph graph = read_graph_file(file);
  TreePtr tree;
  if (g.gen_mode == "k4") {
    tree = build_circuit_tree(graph);
  } else {
    GeneratorCatalog catalog = enumerate_generators(catalog_n_for(g, graph), g.config.threads);
    tree = build_extended_tree(graph, generator_set(g, catalog), g.config.plan_mode);
  }
  std::string text = tree_to_json(tree);
  if (!out_file.empty())
    write_text_file(out_file, text);
  else
    std::cout << text << "\n";
  return 0;
}

int cmd_generators(const GlobalOpts& g, int n, bool classify, const std::string& out_file) {
  GeneratorCatalog catalog = enumerate_generators(n, g.config.threads);
  json out;
  out["n"] = n;
  out["distinct_polynomials"] = catalog.distinct_polynomials;
  out["distinct_supports"] = catalog.distinct_supports;
  if (classify) {
    json cls = json::array();
    for (const SupportClass& sc : classify_supports(catalog)) {
      json cj;
      cj["label"] = sc.label;
      cj["representative"] = graph_json(sc.representative);
      cj["members"] = sc.members;
      cls.push_back(std::move(cj));
    }
    out["classes"] = std::move(cls);
  }
  if (!out_file.empty()) {
    // catalog persisted as JSON lines
    std::ostringstream lines;
    for (const CatalogEntry& e : catalog.entries) {
      json ej;
      ej["class"] = e.class_label;
      ej["support"] = graph_json(e.support);
      ej["polynomial"] = to_string(e.polynomial);
      PolyMetrics m = poly_metrics(e.polynomial);
      ej["metrics"] = {{"total_degree", m.total_degree},
                       {"term_count", m.term_count},
                       {"homogeneous", m.homogeneous}};
      lines << ej.dump() << "\n";
    }
    write_text_file(out_file, lines.str());
  }
  std::cout << (g.json_output ? out.dump(2)
                              : "n=" + std::to_string(n) + " distinct polynomials: " +
                                    std::to_string(catalog.distinct_polynomials) +
                                    ", distinct supports: " +
                                    std::to_string(catalog.distinct_supports) +
                                    (classify ? ", classes: " + std::to_string(out["classes"].size())
                                              : ""))
            << "\n";
  return 0;
}

int cmd_circuit_poly(const GlobalOpts& g, const std::string& file, const std::string& tree_file,
                     const std::string& out_file) {
  Graph graph = read_graph_file(file);
  TreePtr tree;
  GeneratorCatalog catalog = enumerate_generators(catalog_n_for(g, graph), g.config.threads);
  if (!tree_file.empty()) {
    tree = tree_from_json_text(read_text_file(tree_file));
  } else if (g.gen_mode == "k4") {
    tree = build_circuit_tree(graph);
  } else {
    tree = build_extended_tree(graph, generator_set(g, catalog), g.config.plan_mode);
  }
  std::optional<PolyCache> cache;
  if (!g.config.cache_dir.empty()) cache.emplace(g.config.cache_dir);
  CircuitPolynomialRecord rec =
      run_tree(tree, catalog, g.config, cache ? &*cache : nullptr);
  VerificationReport rep = verify_circuit_polynomial(rec, g.config.membership_samples, g.config);
  std::string poly_text = to_string(rec.polynomial);
  if (!out_file.empty()) write_text_file(out_file, poly_text + "\n");
  json out;
  out["circuit"] = graph_json(rec.circuit);
  out["class"] = rec.class_label;
  out["term_count"] = rec.metrics.term_count;
  out["total_degree"] = rec.metrics.total_degree;
  out["homogeneous"] = rec.metrics.homogeneous;
  out["verification"] = {{"support_equal", rep.support_equal},
                         {"homogeneous", rep.homogeneous},
                         {"membership", rep.membership}};
  if (out_file.empty()) out["polynomial"] = poly_text;
  if (g.json_output) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "circuit polynomial for class " << rec.class_label << "\n"
              << "terms: " << rec.metrics.term_count << "  degree: " << rec.metrics.total_degree
              << "\n"
              << rep.text;
    if (out_file.empty()) std::cout << poly_text << "\n";
  }
  return rep.all_passed() ? 0 : 2;
}

int cmd_solve(const GlobalOpts& g, const std::string& file, const std::string& weights_file,
              const std::string& unknown_text) {
  Graph graph = read_graph_file(file);
  std::map<Edge, Rat> weights = read_weights_file(weights_file);
  auto comma = unknown_text.find(',');
  if (comma == std::string::npos)
    throw precondition_error("--unknown expects \"u,v\"");
  Edge unknown(std::stoi(unknown_text.substr(0, comma)),
               std::stoi(unknown_text.substr(comma + 1)));
  GeneratorCatalog catalog = enumerate_generators(4, g.config.threads);
  std::optional<PolyCache> cache;
  if (!g.config.cache_dir.empty()) cache.emplace(g.config.cache_dir);
  SolveResult res =
      solve_unknown_distance(graph, weights, unknown, catalog, g.config, cache ? &*cache : nullptr);
  json out;
  out["circuit"] = graph_json(res.circuit);
  json vals = json::array();
  for (const auto& iv : res.values) vals.push_back(interval_json(iv));
  out["values"] = std::move(vals);
  json negs = json::array();
  for (const auto& iv : res.negative) negs.push_back(interval_json(iv));
  out["negative_roots"] = std::move(negs);
  if (g.json_output) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "candidate squared distances for " << to_string(unknown) << ":\n";
    for (const auto& iv : res.values)
      std::cout << "  " << (iv.exact ? "= " + iv.lo.get_str()
                                     : "(" + iv.lo.get_str() + ", " + iv.hi.get_str() + ")")
                << "\n";
    if (!res.negative.empty())
      std::cout << "negative roots filtered: " << res.negative.size() << "\n";
  }
  return 0;
}

int cmd_verify(const GlobalOpts& g, const std::string& poly_file, const std::string& graph_file,
               int samples) {
  Poly p = parse_poly(read_text_file(poly_file));
  Graph circuit = read_graph_file(graph_file);
  CircuitPolynomialRecord rec;
  rec.circuit = circuit;
  rec.class_label = canonical_label(circuit);
  rec.polynomial = canonicalize(p).poly;
  rec.metrics = poly_metrics(rec.polynomial);
  VerificationReport rep =
      verify_circuit_polynomial(rec, samples > 0 ? samples : g.config.membership_samples, g.config);
  if (g.json_output) {
    json out;
    out["support_equal"] = rep.support_equal;
    out["homogeneous"] = rep.homogeneous;
    out["membership"] = rep.membership;
    out["passed"] = rep.all_passed();
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << rep.text;
  }
  return rep.all_passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circuit polynomials of the 2D Cayley-Menger ideal"};
  app.require_subcommand(1);
  GlobalOpts g;

  app.add_option("--seed", g.config.seed, "random seed for all sampling");
  app.add_option("--samples", g.config.membership_samples, "membership samples (default 16)");
  app.add_option("--bound", g.config.coordinate_bound, "coordinate bound (default 1000)");
  app.add_option("--threads", g.config.threads, "worker threads");
  app.add_option("--cache", g.config.cache_dir, "polynomial cache directory (or $CMCIRC_CACHE)");
  app.add_option("--max-terms", g.config.factor_budget.max_terms, "factorization term budget");
  app.add_option("--max-degree", g.config.factor_budget.max_degree,
                 "factorization per-variable degree budget");
  app.add_option("--plan", g.plan_mode, "planner mode: greedy|min-elim-degree")
      ->check(CLI::IsMember({"greedy", "min-elim-degree"}));
  app.add_option("--gen", g.gen_mode, "generator set: k4|k4k5|catalog")
      ->check(CLI::IsMember({"k4", "k4k5", "catalog"}));
  app.add_option("--engine", g.engine, "resultant engine: bareiss|minors")
      ->check(CLI::IsMember({"bareiss", "minors"}));
  app.add_flag("--json", g.json_output, "machine-readable output");

  std::string file, tree_file, out_file, weights_file, unknown_text;
  int gen_n = 5;
  bool classify = false;
  bool allow_large = false;
  int verify_samples = 0;

  auto* sp = app.add_subcommand("sparsity", "rank, rigidity and circuit analysis of a graph");
  sp->add_option("graph", file, "graph file")->required();

  auto* plan = app.add_subcommand("plan", "emit a combinatorial resultant tree as JSON");
  plan->add_option("graph", file, "circuit graph file")->required();
  plan->add_option("--out", out_file, "write the tree JSON here");

  auto* gen = app.add_subcommand("generators", "enumerate 5x5 Cayley minors");
  gen->add_option("n", gen_n, "number of points (4..10)")->required();
  gen->add_flag("--classify", classify, "report isomorphism classes");
  gen->add_option("--out", out_file, "write the catalog as JSON lines");
  gen->add_flag("--allow-large", allow_large, "allow n > 7 (hours at n = 10)");

  auto* cp = app.add_subcommand("circuit-poly", "compute a circuit polynomial");
  cp->add_option("graph", file, "circuit graph file")->required();
  cp->add_option("--tree", tree_file, "use this resultant tree JSON instead of planning");
  cp->add_flag("--auto", "plan the tree automatically (default)");
  cp->add_option("--out", out_file, "write the polynomial text here");

  auto* solve = app.add_subcommand("solve", "single unknown distance");
  solve->add_option("graph", file, "rigid graph file")->required();
  solve->add_option("--weights", weights_file, "edge weights file (\"u v value\")")->required();
  solve->add_option("--unknown", unknown_text, "non-edge pair \"u,v\"")->required();

  auto* verify = app.add_subcommand("verify", "verify a circuit polynomial file");
  verify->add_option("poly", file, "polynomial file")->required();
  verify->add_option("--circuit", tree_file, "circuit graph file")->required();
  verify->add_option("--samples", verify_samples, "membership samples");

  CLI11_PARSE(app, argc, argv);
  finalize(g);

  try {
    if (sp->parsed()) return cmd_sparsity(g, file);
    if (plan->parsed()) return cmd_plan(g, file, out_file);
    if (gen->parsed()) {
      if (gen_n > 7 && !allow_large) {
        std::cerr << "n > 7 is gated behind --allow-large (the n = 10 sweep takes hours)\n";
        return 2;
      }
      return cmd_generators(g, gen_n, classify, out_file);
    }
    if (cp->parsed()) return cmd_circuit_poly(g, file, tree_file, out_file);
    if (solve->parsed()) return cmd_solve(g, file, weights_file, unknown_text);
    if (verify->parsed()) return cmd_verify(g, file, tree_file, verify_samples);
  } catch (const no_qualifying_factor_error& e) {
    std::cerr << "open-problem surface: " << e.what() << "\n";
    return 4;
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const checksum_error& e) {
    std::cerr << "checksum error: " << e.what() << "\n";
    return 3;
  } catch (const precondition_error& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
