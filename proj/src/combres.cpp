#include "cmcircuits/combres.hpp"

#include <algorithm>
#include <set>

#include "cmcircuits/errors.hpp"
#include "cmcircuits/sparsity.hpp"

namespace cmc {

Graph comb_res(const Graph& g1, const Graph& g2, const Edge& e) {
  if (g1 == g2) throw precondition_error("comb_res needs two distinct graphs");
  if (!g1.has_edge(e) || !g2.has_edge(e))
    throw precondition_error("elimination edge " + to_string(e) + " not common to both graphs");
  Graph u = graph_union(g1, g2);
  return u.without_edge(e);
}

bool is_properly_intersecting(const Graph& c1, const Graph& c2) {
  if (!is_circuit(c1) || !is_circuit(c2))
    throw precondition_error("is_properly_intersecting expects two circuits");
  SetStats s = set_stats(c1, c2);
  if (!is_laman(s.common)) return false;
  // When the common vertex set is strict in both circuits, neither circuit
  // may span extra edges on it; a violation would contradict minimality.
  if (s.n_cap < c1.vertex_count() && s.n_cap < c2.vertex_count()) {
    for (const Edge& e : c1.edges())
      if (s.common.has_vertex(e.u) && s.common.has_vertex(e.v) && !s.common.has_edge(e))
        throw precondition_error("circuit spans an extra edge on the common vertices");
    for (const Edge& e : c2.edges())
      if (s.common.has_vertex(e.u) && s.common.has_vertex(e.v) && !s.common.has_edge(e))
        throw precondition_error("circuit spans an extra edge on the common vertices");
  }
  return true;
}

namespace {

// Connected components of g restricted to `keep` (vertex labels).
std::vector<std::vector<int>> components_within(const Graph& g, const std::set<int>& keep) {
  std::vector<std::vector<int>> comps;
  std::set<int> unseen = keep;
  while (!unseen.empty()) {
    int start = *unseen.begin();
    std::vector<int> stack{start}, comp;
    unseen.erase(start);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int w : g.neighbors(v))
        if (unseen.count(w)) {
          unseen.erase(w);
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end());
  return comps;
}

bool is_connected_graph(const Graph& g) {
  if (g.vertex_count() == 0) return true;
  std::set<int> all(g.vertices().begin(), g.vertices().end());
  return components_within(g, all).size() == 1;
}

}  // namespace

bool is_three_connected(const Graph& g) {
  if (g.vertex_count() < 4) return false;
  if (!is_connected_graph(g)) return false;
  const auto& vs = g.vertices();
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) {
      std::set<int> keep(vs.begin(), vs.end());
      keep.erase(vs[i]);
      keep.erase(vs[j]);
      if (components_within(g, keep).size() > 1) return false;
    }
  return true;
}

std::optional<TwoSeparation> two_separation(const Graph& c) {
  if (!is_circuit(c)) throw precondition_error("two_separation expects a circuit");
  const auto& vs = c.vertices();
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) {
      int u = vs[i], v = vs[j];
      std::set<int> keep(vs.begin(), vs.end());
      keep.erase(u);
      keep.erase(v);
      auto comps = components_within(c, keep);
      if (comps.size() < 2) continue;
      Edge uv(u, v);
      // Group the components into two sides; both sides plus uv must be
      // circuits.  The first grouping with that property wins.
      int k = static_cast<int>(comps.size());
      for (unsigned mask = 1; mask < (1u << (k - 1)); ++mask) {
        std::vector<int> side1{u, v}, side2{u, v};
        for (int t = 0; t < k; ++t) {
          bool in1 = t == 0 ? true : (mask & (1u << (t - 1)));
          auto& side = in1 ? side1 : side2;
          side.insert(side.end(), comps[t].begin(), comps[t].end());
        }
        if (side2.size() == 2) continue;
        Graph c1 = c.induced(side1).with_edge(uv);
        Graph c2 = c.induced(side2).with_edge(uv);
        if (is_circuit(c1) && is_circuit(c2)) return TwoSeparation{c1, c2, uv};
      }
    }
  return std::nullopt;
}

Decomposition decompose_circuit(const Graph& c) {
  if (!is_circuit(c)) throw precondition_error("decompose_circuit expects a circuit");
  if (c.vertex_count() == 4)
    throw precondition_error("K4 is the base case and has no decomposition");
  if (c.vertex_count() < 5 || !is_three_connected(c))
    throw precondition_error("decompose_circuit expects a 3-connected circuit on >= 5 vertices");
  for (int a : c.vertices()) {
    if (c.degree(a) != 3) continue;
    auto inv = inverse_henneberg2(c, a);
    if (!inv) continue;
    std::vector<int> nb = c.neighbors(a);
    for (int b : c.vertices()) {
      if (b == a || c.degree(b) != 3) continue;
      if (std::find(nb.begin(), nb.end(), b) != nb.end()) continue;
      // D = (c - b) + e is Laman-plus-one; its unique circuit contains a.
      Graph d = c.without_vertex(b).with_edge(inv->added);
      Graph bcirc = fundamental_circuit(d);
      Decomposition dec{inv->circuit, bcirc, inv->added};
      if (comb_res(dec.a, dec.b, dec.elim) == Graph::from_edges(c.edges())) return dec;
      // The recomposition identity is guaranteed for valid inputs; reaching
      // here means the candidate pair was degenerate, so keep searching.
    }
  }
  throw precondition_error("no eligible degree-3 vertex pair admits a decomposition");
}

TreePtr make_leaf(Graph g) {
  auto node = std::make_shared<TreeNode>();
  node->graph = std::move(g);
  return node;
}

TreePtr make_node(Graph g, TreePtr left, TreePtr right, Edge elim) {
  auto node = std::make_shared<TreeNode>();
  node->graph = std::move(g);
  node->left = std::move(left);
  node->right = std::move(right);
  node->elim = elim;
  return node;
}

int tree_depth(const TreePtr& t) {
  if (!t || t->is_leaf()) return 0;
  return 1 + std::max(tree_depth(t->left), tree_depth(t->right));
}

static void collect_post_order(const TreePtr& t, std::vector<TreePtr>& out) {
  if (!t) return;
  collect_post_order(t->left, out);
  collect_post_order(t->right, out);
  out.push_back(t);
}

std::vector<TreePtr> tree_nodes(const TreePtr& t) {
  std::vector<TreePtr> out;
  collect_post_order(t, out);
  return out;
}

namespace {

Graph complete_graph(const std::vector<int>& vs) {
  std::vector<Edge> es;
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) es.emplace_back(vs[i], vs[j]);
  return Graph::from_edges(std::move(es));
}

}  // namespace

GeneratorSet GeneratorSet::k4_only() { return from_graphs({complete_graph({1, 2, 3, 4})}); }

GeneratorSet GeneratorSet::k4_k5() {
  return from_graphs({complete_graph({1, 2, 3, 4}), complete_graph({1, 2, 3, 4, 5})});
}

GeneratorSet GeneratorSet::from_graphs(std::vector<Graph> members) {
  GeneratorSet gen;
  bool has_k4 = false;
  Graph k4 = complete_graph({1, 2, 3, 4});
  for (const Graph& g : members) {
    if (is_independent(g))
      throw precondition_error("generator sets may contain only dependent graphs");
    if (is_isomorphic(g, k4)) has_k4 = true;
  }
  if (!has_k4) {
    members.push_back(k4);
  }
  // largest first: more edges, then more vertices
  std::stable_sort(members.begin(), members.end(), [](const Graph& a, const Graph& b) {
    if (a.edge_count() != b.edge_count()) return a.edge_count() > b.edge_count();
    return a.vertex_count() > b.vertex_count();
  });
  gen.members_ = std::move(members);
  return gen;
}

int GeneratorSet::match(const Graph& g) const {
  for (size_t i = 0; i < members_.size(); ++i)
    if (is_isomorphic(members_[i], g)) return static_cast<int>(i);
  return -1;
}

TreePtr build_circuit_tree(const Graph& circuit) {
  if (!is_circuit(circuit)) throw precondition_error("build_circuit_tree expects a circuit");
  Graph c = Graph::from_edges(circuit.edges());
  if (c.vertex_count() == 4) return make_leaf(c);
  if (auto split = two_separation(c))
    return make_node(c, build_circuit_tree(split->c1), build_circuit_tree(split->c2), split->uv);
  Decomposition dec = decompose_circuit(c);
  return make_node(c, build_circuit_tree(dec.a), build_circuit_tree(dec.b), dec.elim);
}

namespace {

// Plan for expressing a circuit as a complete generator on a vertex subset
// followed by a chain of K4 resultants that eliminate the generator's excess
// edges while pulling in the remaining circuit edges.
struct CompletionPlan {
  std::vector<int> subset;      // vertices of the complete generator
  std::vector<Edge> excess;     // edges of K(subset) missing from the circuit
  std::vector<Graph> cliques;   // K4 used to eliminate excess[i]
};

// Search for K4 graphs q_i containing excess[i] such that q_i avoids the
// already-eliminated excess edges and the union covers all circuit edges
// outside the complete generator.
bool find_cliques(const Graph& c, const std::set<Edge>& gen_edges,
                  const std::vector<Edge>& order, size_t pos, std::set<Edge> allowed_excess,
                  std::set<Edge>& covered, const std::set<Edge>& must_cover,
                  std::vector<Graph>& out) {
  if (pos == order.size()) {
    for (const Edge& e : must_cover)
      if (!covered.count(e)) return false;
    return true;
  }
  Edge f = order[pos];
  allowed_excess.erase(f);
  // candidate K4s: {f.u, f.v, x, y} whose six edges all lie in the circuit,
  // in the not-yet-eliminated excess, or equal f
  std::vector<int> others;
  for (int v : c.vertices())
    if (v != f.u && v != f.v) others.push_back(v);
  for (size_t i = 0; i < others.size(); ++i)
    for (size_t j = i + 1; j < others.size(); ++j) {
      std::vector<int> quad{f.u, f.v, others[i], others[j]};
      Graph q = complete_graph(quad);
      bool ok = true;
      for (const Edge& e : q.edges()) {
        if (e == f) continue;
        if (c.has_edge(e)) continue;
        if (allowed_excess.count(e)) continue;
        ok = false;
        break;
      }
      if (!ok) continue;
      std::vector<Edge> newly;
      for (const Edge& e : q.edges())
        if (must_cover.count(e) && !covered.count(e)) {
          covered.insert(e);
          newly.push_back(e);
        }
      out.push_back(q);
      if (find_cliques(c, gen_edges, order, pos + 1, allowed_excess, covered, must_cover, out))
        return true;
      out.pop_back();
      for (const Edge& e : newly) covered.erase(e);
    }
  return false;
}

std::optional<CompletionPlan> plan_completion(const Graph& c, int gen_size, PlanMode mode) {
  const auto& vs = c.vertices();
  if (c.vertex_count() < gen_size) return std::nullopt;
  std::vector<CompletionPlan> found;
  std::vector<int> pick(gen_size);
  std::vector<int> idx(gen_size);
  for (int i = 0; i < gen_size; ++i) idx[i] = i;
  while (true) {
    for (int i = 0; i < gen_size; ++i) pick[i] = vs[idx[i]];
    Graph kg = complete_graph(pick);
    std::vector<Edge> excess;
    for (const Edge& e : kg.edges())
      if (!c.has_edge(e)) excess.push_back(e);
    // need at least one excess edge (a circuit cannot contain the whole
    // complete generator) and a covering chain
    if (!excess.empty() && static_cast<int>(excess.size()) <= 6) {
      std::set<Edge> gen_edges(kg.edges().begin(), kg.edges().end());
      std::set<Edge> must_cover;
      for (const Edge& e : c.edges())
        if (!gen_edges.count(e)) must_cover.insert(e);
      std::vector<Edge> order = excess;
      std::sort(order.begin(), order.end());
      do {
        std::set<Edge> covered;
        std::set<Edge> allowed(excess.begin(), excess.end());
        std::vector<Graph> cliques;
        if (find_cliques(c, gen_edges, order, 0, allowed, covered, must_cover, cliques)) {
          CompletionPlan plan{pick, order, cliques};
          if (mode == PlanMode::kGreedy) return plan;
          found.push_back(std::move(plan));
          break;  // one plan per excess order is enough for ranking
        }
      } while (std::next_permutation(order.begin(), order.end()));
    }
    // advance the combination
    int i = gen_size - 1;
    while (i >= 0 && idx[i] == c.vertex_count() - gen_size + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < gen_size; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (found.empty()) return std::nullopt;
  // fewest resultant steps first, then lexicographic subset
  std::sort(found.begin(), found.end(), [](const CompletionPlan& a, const CompletionPlan& b) {
    if (a.excess.size() != b.excess.size()) return a.excess.size() < b.excess.size();
    return a.subset < b.subset;
  });
  return found.front();
}

TreePtr build_extended_rec(const Graph& c, const GeneratorSet& gen, PlanMode mode) {
  int match = gen.match(c);
  if (match >= 0) return make_leaf(Graph::from_edges(c.edges()));
  // try a complete-generator completion chain, largest generators first
  std::vector<int> sizes;
  for (const Graph& g : gen.members()) {
    int n = g.vertex_count();
    if (n >= 5 && g.edge_count() == n * (n - 1) / 2 && c.vertex_count() > n)
      sizes.push_back(n);
  }
  std::sort(sizes.rbegin(), sizes.rend());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (int gsz : sizes) {
    auto plan = plan_completion(Graph::from_edges(c.edges()), gsz, mode);
    if (!plan) continue;
    TreePtr acc = make_leaf(complete_graph(plan->subset));
    Graph current = acc->graph;
    for (size_t i = 0; i < plan->excess.size(); ++i) {
      Graph next = comb_res(current, plan->cliques[i], plan->excess[i]);
      acc = make_node(next, acc, make_leaf(plan->cliques[i]), plan->excess[i]);
      current = next;
    }
    if (current == Graph::from_edges(c.edges())) return acc;
  }
  // otherwise expand one level as a circuit tree and recurse
  if (!is_circuit(c)) throw precondition_error("extended tree node is not a circuit");
  Graph cc = Graph::from_edges(c.edges());
  if (cc.vertex_count() == 4) return make_leaf(cc);
  if (auto split = two_separation(cc))
    return make_node(cc, build_extended_rec(split->c1, gen, mode),
                     build_extended_rec(split->c2, gen, mode), split->uv);
  Decomposition dec = decompose_circuit(cc);
  return make_node(cc, build_extended_rec(dec.a, gen, mode),
                   build_extended_rec(dec.b, gen, mode), dec.elim);
}

}  // namespace

TreePtr build_extended_tree(const Graph& circuit, const GeneratorSet& gen, PlanMode mode) {
  if (!is_circuit(circuit)) throw precondition_error("build_extended_tree expects a circuit");
  return build_extended_rec(Graph::from_edges(circuit.edges()), gen, mode);
}

bool validate_tree(const TreePtr& t, const GeneratorSet& gen, std::string* diagnostic) {
  auto fail = [&](const std::string& where, const std::string& why) {
    if (diagnostic) *diagnostic = where + ": " + why;
    return false;
  };
  std::vector<std::pair<TreePtr, std::string>> stack{{t, "root"}};
  while (!stack.empty()) {
    auto [node, path] = stack.back();
    stack.pop_back();
    if (!node) return fail(path, "missing node");
    if (node->graph.edge_count() == 0) return fail(path, "empty graph");
    if (is_independent(node->graph)) return fail(path, "node graph is independent");
    if (node->is_leaf()) {
      if (gen.match(node->graph) < 0) return fail(path, "leaf not in the generator set");
      continue;
    }
    if (!node->right || !node->elim) return fail(path, "malformed internal node");
    const Edge& e = *node->elim;
    if (!node->left->graph.has_edge(e) || !node->right->graph.has_edge(e))
      return fail(path, "elimination edge not common to the children");
    Graph expect = comb_res(node->left->graph, node->right->graph, e);
    if (!(expect == node->graph)) return fail(path, "node graph is not the combinatorial resultant");
    if (node->graph.has_edge(e)) return fail(path, "elimination edge still present");
    stack.push_back({node->left, path + ".L"});
    stack.push_back({node->right, path + ".R"});
  }
  return true;
}

}  // namespace cmc
