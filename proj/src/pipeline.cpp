#include "cmcircuits/pipeline.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cmcircuits/errors.hpp"
#include "cmcircuits/io.hpp"
#include "cmcircuits/sparsity.hpp"

namespace cmc {

using nlohmann::json;

namespace {

bool support_subset(const Poly& p, const Graph& target) {
  for (const Edge& e : p.vars())
    if (!target.has_edge(e)) return false;
  return true;
}

bool support_equals(const Poly& p, const Graph& target) {
  return p.vars() == target.edges();
}

struct RankedFactor {
  Poly poly;
  int next_elim_degree = 0;
  int total_degree = 0;
  long terms = 0;
  std::string text;
};

bool ranked_less(const RankedFactor& a, const RankedFactor& b) {
  if (a.next_elim_degree != b.next_elim_degree) return a.next_elim_degree < b.next_elim_degree;
  if (a.total_degree != b.total_degree) return a.total_degree < b.total_degree;
  if (a.terms != b.terms) return a.terms < b.terms;
  return a.text < b.text;
}

RankedFactor make_ranked(Poly p, const std::optional<Edge>& next_elim) {
  RankedFactor rf;
  rf.next_elim_degree = next_elim ? p.degree_in(*next_elim) : 0;
  rf.total_degree = p.total_degree();
  rf.terms = p.term_count();
  rf.text = to_string(p);
  rf.poly = std::move(p);
  return rf;
}

}  // namespace

NodeResult node_step(const Poly& v, const Poly& w, const Edge& elim, const Graph& target,
                     const std::optional<Edge>& next_elim, const RunConfig& config) {
  if (v.degree_in(elim) < 1 || w.degree_in(elim) < 1)
    throw precondition_error("elimination variable missing from a child polynomial");
  Poly r = resultant(v, w, elim, config.resultant_engine);
  if (r.is_zero())
    throw precondition_error(
        "resultant vanished: the children share a factor in the elimination variable");
  if (v.is_homogeneous() && w.is_homogeneous() && !r.is_homogeneous())
    throw precondition_error("internal: resultant of homogeneous inputs is not homogeneous");

  FactorResult fr = factor(r, config.factor_budget);

  NodeResult result;
  result.graph = target;
  std::vector<RankedFactor> qualifying;
  unsigned long mseed = config.seed ^ 0x9e3779b97f4a7c15ull;
  for (const auto& [f, mult] : fr.factors) {
    if (f.is_constant() || f.total_degree() < 1) continue;
    DiscardedFactor d;
    d.support = f.support_graph();
    d.support_ok = support_subset(f, target);
    if (d.support_ok) {
      MembershipReport rep =
          is_in_ideal(f, config.membership_samples, config.coordinate_bound, mseed);
      d.membership_ok = rep.in_ideal;
    }
    if (d.support_ok && d.membership_ok)
      qualifying.push_back(make_ranked(canonicalize(f).poly, next_elim));
    else
      result.discarded.push_back(std::move(d));
  }

  if (qualifying.size() == 1) {
    result.polynomial = std::move(qualifying.front().poly);
    result.from_irreducible = true;
  } else if (qualifying.size() > 1) {
    std::sort(qualifying.begin(), qualifying.end(), ranked_less);
    result.polynomial = std::move(qualifying.front().poly);
    result.from_irreducible = true;
  } else {
    // no irreducible factor qualifies: look for a reducible divisor of r
    // (products of the irreducible factors) with the same qualification
    std::vector<RankedFactor> reducible;
    const auto& fs = fr.factors;
    int k = static_cast<int>(fs.size());
    long combos = 1;
    for (const auto& [f, mult] : fs) {
      combos *= (mult + 1);
      if (combos > 4096) throw budget_error("too many factor combinations to search");
    }
    for (long mask = 1; mask < combos; ++mask) {
      long m = mask;
      Poly prod = Poly::constant(1);
      int pieces = 0;
      for (int i = 0; i < k; ++i) {
        int e = static_cast<int>(m % (fs[i].second + 1));
        m /= (fs[i].second + 1);
        if (e > 0) {
          prod *= fs[i].first.pow(e);
          pieces += e;
        }
      }
      if (pieces < 2) continue;  // single irreducibles were already rejected
      if (!support_subset(prod, target)) continue;
      MembershipReport rep =
          is_in_ideal(prod, config.membership_samples, config.coordinate_bound, mseed);
      if (!rep.in_ideal) continue;
      reducible.push_back(make_ranked(canonicalize(prod).poly, next_elim));
    }
    if (reducible.empty())
      throw no_qualifying_factor_error(
          "no factor of the resultant is supported on the target graph and in the ideal");
    std::sort(reducible.begin(), reducible.end(), ranked_less);
    result.polynomial = std::move(reducible.front().poly);
    result.from_irreducible = false;
  }

  if (result.polynomial.degree_in(elim) != 0)
    throw precondition_error("internal: selected factor kept the elimination variable");

  json prov;
  prov["elim"] = {elim.u, elim.v};
  prov["irreducible"] = result.from_irreducible;
  prov["factor_count"] = fr.factors.size();
  json disc = json::array();
  for (const auto& d : result.discarded) {
    json dj;
    dj["support"] = json::parse(graph_to_json(d.support));
    dj["support_ok"] = d.support_ok;
    dj["membership_ok"] = d.membership_ok;
    disc.push_back(std::move(dj));
  }
  prov["discarded"] = std::move(disc);
  result.provenance = prov.dump();
  return result;
}

namespace {

struct TreeRunner {
  const GeneratorCatalog& catalog;
  const RunConfig& config;
  PolyCache* cache;
  json provenance = json::array();

  Poly compute(const TreePtr& node, const std::optional<Edge>& parent_elim) {
    // cache only holds true circuit polynomials
    bool cacheable = cache && is_circuit(node->graph);
    CanonicalForm cf;
    if (cacheable) {
      cf = canonical_form(node->graph);
      if (auto cached = cache->load(cf.label)) {
        std::map<int, int> back;
        for (const auto& [orig, canon] : cf.relabel) back[canon] = orig;
        json pj;
        pj["node"] = json::parse(graph_to_json(node->graph));
        pj["cache_hit"] = cf.label;
        provenance.push_back(std::move(pj));
        return cached->relabeled(back);
      }
    }
    Poly result;
    bool irreducible_selected = true;
    if (node->is_leaf()) {
      result = select_leaf_generator(catalog, node->graph, parent_elim);
      json pj;
      pj["node"] = json::parse(graph_to_json(node->graph));
      pj["leaf_generator"] = to_string(result).substr(0, 64);
      provenance.push_back(std::move(pj));
    } else {
      Poly left = compute(node->left, node->elim);
      Poly right = compute(node->right, node->elim);
      NodeResult nr = node_step(left, right, *node->elim, node->graph, parent_elim, config);
      irreducible_selected = nr.from_irreducible;
      provenance.push_back(json::parse(nr.provenance));
      result = std::move(nr.polynomial);
    }
    if (cacheable && irreducible_selected && support_equals(result, node->graph)) {
      Poly canonical_poly = result.relabeled(cf.relabel);
      cache->store(cf.label, canonical_poly, "{}");
    }
    return result;
  }
};

}  // namespace

CircuitPolynomialRecord run_tree(const TreePtr& tree, const GeneratorCatalog& catalog,
                                 const RunConfig& config, PolyCache* cache) {
  if (!tree) throw precondition_error("run_tree expects a tree");
  // structural sanity of internal nodes (full validation is the planner's
  // and validate_tree's job)
  for (const TreePtr& n : tree_nodes(tree)) {
    if (n->is_leaf()) continue;
    Graph expect = comb_res(n->left->graph, n->right->graph, *n->elim);
    if (!(expect == n->graph))
      throw precondition_error("tree node is not the combinatorial resultant of its children");
  }
  TreeRunner runner{catalog, config, cache};
  Poly poly = runner.compute(tree, std::nullopt);
  if (!support_equals(poly, Graph::from_edges(tree->graph.edges())))
    throw no_qualifying_factor_error("root polynomial support does not equal the root circuit");
  CircuitPolynomialRecord rec;
  rec.circuit = tree->graph;
  rec.class_label = canonical_label(tree->graph);
  rec.polynomial = canonicalize(poly).poly;
  rec.metrics = poly_metrics(rec.polynomial);
  rec.tree_json = tree_to_json(tree);
  rec.provenance = runner.provenance.dump();
  return rec;
}

VerificationReport verify_circuit_polynomial(const CircuitPolynomialRecord& record, int samples,
                                             const RunConfig& config, bool recheck_irreducible) {
  VerificationReport rep;
  rep.support_equal = support_equals(record.polynomial, Graph::from_edges(record.circuit.edges()));
  rep.homogeneous = record.polynomial.is_homogeneous();
  MembershipReport mem =
      is_in_ideal(record.polynomial, samples, config.coordinate_bound, config.seed ^ 0xabcdefull);
  rep.membership = mem.in_ideal;
  if (recheck_irreducible) {
    rep.irreducible_checked = true;
    FactorResult fr = factor(record.polynomial, config.factor_budget);
    rep.irreducible = fr.factors.size() == 1 && fr.factors[0].second == 1;
  }
  std::ostringstream out;
  out << "support-equality: " << (rep.support_equal ? "pass" : "FAIL") << "\n"
      << "homogeneous: " << (rep.homogeneous ? "pass" : "FAIL") << "\n"
      << "membership (" << samples << " samples, error bound " << mem.error_bound
      << "): " << (rep.membership ? "pass" : "FAIL") << "\n";
  if (rep.irreducible_checked)
    out << "irreducible: " << (rep.irreducible ? "pass" : "FAIL") << "\n";
  rep.text = out.str();
  return rep;
}

SolveResult solve_unknown_distance(const Graph& g, const std::map<Edge, Rat>& weights,
                                   const Edge& unknown, const GeneratorCatalog& catalog,
                                   const RunConfig& config, PolyCache* cache) {
  if (g.has_edge(unknown)) throw precondition_error("the unknown pair must be a non-edge");
  if (!g.has_vertex(unknown.u) || !g.has_vertex(unknown.v))
    throw precondition_error("the unknown pair must connect vertices of the graph");
  for (const Edge& e : g.edges()) {
    auto it = weights.find(e);
    if (it == weights.end())
      throw precondition_error("missing weight for edge " + to_string(e));
    if (it->second <= 0) throw precondition_error("weights must be positive");
  }
  if (!is_rigid(g))
    throw precondition_error("flexible graph: the unknown distance has a continuous solution set");

  // spanning Laman basis from the pebble game
  PebbleGame game(g.vertices());
  std::vector<Edge> basis;
  for (const Edge& e : g.edges())
    if (game.try_insert(e)) basis.push_back(e);
  Graph basis_graph = Graph::from_edges(std::move(basis), g.vertices());
  Graph with_unknown = basis_graph.with_edge(unknown);
  Graph circuit = fundamental_circuit(with_unknown);

  TreePtr tree = build_circuit_tree(circuit);
  CircuitPolynomialRecord rec = run_tree(tree, catalog, config, cache);

  Poly univariate = rec.polynomial.substitute_all_but(unknown, weights);
  if (univariate.is_zero())
    throw precondition_error("degenerate weights: the specialized polynomial vanished");

  SolveResult out;
  out.circuit = circuit;
  std::map<Edge, Rat> at_zero{{unknown, Rat(0)}};
  for (const RootInterval& iv : isolate_real_roots(univariate)) {
    if (iv.exact) {
      (iv.lo >= 0 ? out.values : out.negative).push_back(iv);
      continue;
    }
    if (iv.lo >= 0) {
      out.values.push_back(iv);
    } else if (iv.hi <= 0) {
      out.negative.push_back(iv);
    } else {
      // bracket straddles zero: zero is not a root (it would have been an
      // exact rational root), so the endpoint signs decide the side
      Rat at_lo = univariate.evaluate({{unknown, iv.lo}});
      Rat at_mid = univariate.evaluate(at_zero);
      RootInterval refined = iv;
      if (mpq_sgn(at_lo.get_mpq_t()) != mpq_sgn(at_mid.get_mpq_t())) {
        refined.hi = 0;
        out.negative.push_back(refined);
      } else {
        refined.lo = 0;
        out.values.push_back(refined);
      }
    }
  }
  return out;
}

}  // namespace cmc
