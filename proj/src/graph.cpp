#include "cmcircuits/graph.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cmcircuits/errors.hpp"

namespace cmc {

Edge::Edge(int a, int b) {
  if (a == b) throw precondition_error("loop edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
  if (a <= 0 || b <= 0) throw precondition_error("vertex labels must be positive");
  u = std::min(a, b);
  v = std::max(a, b);
}

std::string to_string(const Edge& e) {
  return std::to_string(e.u) + "-" + std::to_string(e.v);
}

static std::vector<int> span_of(const std::vector<Edge>& edges) {
  std::set<int> vs;
  for (const Edge& e : edges) {
    vs.insert(e.u);
    vs.insert(e.v);
  }
  return {vs.begin(), vs.end()};
}

Graph Graph::from_pairs(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) edges.emplace_back(a, b);
  return from_edges(std::move(edges));
}

Graph Graph::from_edges(std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Graph g;
  g.vertices_ = span_of(edges);
  g.edges_ = std::move(edges);
  return g;
}

Graph Graph::from_edges(std::vector<Edge> edges, std::vector<int> vertices) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  for (const Edge& e : edges) {
    if (!std::binary_search(vertices.begin(), vertices.end(), e.u) ||
        !std::binary_search(vertices.begin(), vertices.end(), e.v))
      throw precondition_error("edge endpoint " + to_string(e) + " not in vertex set");
  }
  for (int v : vertices)
    if (v <= 0) throw precondition_error("vertex labels must be positive");
  Graph g;
  g.vertices_ = std::move(vertices);
  g.edges_ = std::move(edges);
  return g;
}

bool Graph::has_vertex(int v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Graph::has_edge(const Edge& e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

int Graph::degree(int v) const {
  int d = 0;
  for (const Edge& e : edges_)
    if (e.u == v || e.v == v) ++d;
  return d;
}

std::vector<int> Graph::neighbors(int v) const {
  std::vector<int> out;
  for (const Edge& e : edges_) {
    if (e.u == v) out.push_back(e.v);
    if (e.v == v) out.push_back(e.u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Graph Graph::with_edge(const Edge& e) const {
  std::vector<Edge> es = edges_;
  es.push_back(e);
  std::vector<int> vs = vertices_;
  vs.push_back(e.u);
  vs.push_back(e.v);
  return from_edges(std::move(es), std::move(vs));
}

Graph Graph::without_edge(const Edge& e) const {
  std::vector<Edge> es;
  es.reserve(edges_.size());
  for (const Edge& x : edges_)
    if (!(x == e)) es.push_back(x);
  return from_edges(std::move(es), vertices_);
}

Graph Graph::without_vertex(int v) const {
  std::vector<Edge> es;
  for (const Edge& x : edges_)
    if (x.u != v && x.v != v) es.push_back(x);
  std::vector<int> vs;
  for (int w : vertices_)
    if (w != v) vs.push_back(w);
  return from_edges(std::move(es), std::move(vs));
}

Graph Graph::induced(const std::vector<int>& vs) const {
  std::set<int> keep(vs.begin(), vs.end());
  std::vector<Edge> es;
  for (const Edge& x : edges_)
    if (keep.count(x.u) && keep.count(x.v)) es.push_back(x);
  return from_edges(std::move(es), {keep.begin(), keep.end()});
}

bool Graph::spans_vertices() const {
  std::set<int> spanned;
  for (const Edge& e : edges_) {
    spanned.insert(e.u);
    spanned.insert(e.v);
  }
  return spanned.size() == vertices_.size();
}

SetStats set_stats(const Graph& g1, const Graph& g2) {
  SetStats s;
  std::vector<int> vu, vc;
  std::set_union(g1.vertices().begin(), g1.vertices().end(), g2.vertices().begin(),
                 g2.vertices().end(), std::back_inserter(vu));
  std::set_intersection(g1.vertices().begin(), g1.vertices().end(), g2.vertices().begin(),
                        g2.vertices().end(), std::back_inserter(vc));
  std::vector<Edge> eu, ec;
  std::set_union(g1.edges().begin(), g1.edges().end(), g2.edges().begin(), g2.edges().end(),
                 std::back_inserter(eu));
  std::set_intersection(g1.edges().begin(), g1.edges().end(), g2.edges().begin(),
                        g2.edges().end(), std::back_inserter(ec));
  s.n_union = static_cast<int>(vu.size());
  s.n_cap = static_cast<int>(vc.size());
  s.m_union = static_cast<int>(eu.size());
  s.m_cap = static_cast<int>(ec.size());
  s.common = Graph::from_edges(std::move(ec), std::move(vc));
  return s;
}

Graph graph_union(const Graph& g1, const Graph& g2) {
  std::vector<int> vu;
  std::set_union(g1.vertices().begin(), g1.vertices().end(), g2.vertices().begin(),
                 g2.vertices().end(), std::back_inserter(vu));
  std::vector<Edge> eu;
  std::set_union(g1.edges().begin(), g1.edges().end(), g2.edges().begin(), g2.edges().end(),
                 std::back_inserter(eu));
  return Graph::from_edges(std::move(eu), std::move(vu));
}

namespace {

// Compact 0-based view used by the isomorphism and canonical-label searches.
struct Indexed {
  int n = 0;
  std::vector<int> labels;                  // index -> original label
  std::vector<std::vector<char>> adj;       // adjacency matrix
  std::vector<int> deg;

  explicit Indexed(const Graph& g) {
    labels = g.vertices();
    n = static_cast<int>(labels.size());
    adj.assign(n, std::vector<char>(n, 0));
    deg.assign(n, 0);
    auto idx = [&](int label) {
      return static_cast<int>(std::lower_bound(labels.begin(), labels.end(), label) - labels.begin());
    };
    for (const Edge& e : g.edges()) {
      int a = idx(e.u), b = idx(e.v);
      adj[a][b] = adj[b][a] = 1;
      ++deg[a];
      ++deg[b];
    }
  }

  std::vector<int> neighbor_degrees(int v) const {
    std::vector<int> nd;
    for (int w = 0; w < n; ++w)
      if (adj[v][w]) nd.push_back(deg[w]);
    std::sort(nd.begin(), nd.end());
    return nd;
  }
};

bool iso_search(const Indexed& a, const Indexed& b, std::vector<int>& map,
                std::vector<char>& used, int next,
                const std::vector<std::vector<int>>& nda,
                const std::vector<std::vector<int>>& ndb,
                const std::function<bool(const std::vector<int>&)>* report) {
  if (next == a.n) {
    if (report) return !(*report)(map);  // true = stop
    return true;
  }
  for (int cand = 0; cand < b.n; ++cand) {
    if (used[cand] || a.deg[next] != b.deg[cand] || nda[next] != ndb[cand]) continue;
    bool ok = true;
    for (int prev = 0; prev < next && ok; ++prev)
      if (a.adj[next][prev] != b.adj[cand][map[prev]]) ok = false;
    if (!ok) continue;
    map[next] = cand;
    used[cand] = 1;
    if (iso_search(a, b, map, used, next + 1, nda, ndb, report)) return true;
    used[cand] = 0;
  }
  return false;
}

bool run_iso(const Graph& g1, const Graph& g2,
             const std::function<bool(const std::vector<int>&)>* report) {
  if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count()) return false;
  Indexed a(g1), b(g2);
  std::vector<int> da = a.deg, db = b.deg;
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  if (da != db) return false;
  std::vector<std::vector<int>> nda(a.n), ndb(b.n);
  for (int i = 0; i < a.n; ++i) nda[i] = a.neighbor_degrees(i);
  for (int i = 0; i < b.n; ++i) ndb[i] = b.neighbor_degrees(i);
  std::vector<int> map(a.n, -1);
  std::vector<char> used(b.n, 0);
  return iso_search(a, b, map, used, 0, nda, ndb, report);
}

}  // namespace

bool is_isomorphic(const Graph& g1, const Graph& g2) { return run_iso(g1, g2, nullptr); }

void for_each_isomorphism(const Graph& g1, const Graph& g2,
                          const std::function<bool(const std::vector<int>&)>& fn) {
  run_iso(g1, g2, &fn);
}

namespace {

// One round of color refinement: vertices keep equal colors only while they
// agree on (color, multiset of neighbor colors).  Returns true on change.
bool refine(const Indexed& g, std::vector<int>& color) {
  std::vector<std::pair<std::vector<int>, int>> sig(g.n);
  for (int v = 0; v < g.n; ++v) {
    std::vector<int> s;
    s.push_back(color[v]);
    std::vector<int> nb;
    for (int w = 0; w < g.n; ++w)
      if (g.adj[v][w]) nb.push_back(color[w]);
    std::sort(nb.begin(), nb.end());
    s.insert(s.end(), nb.begin(), nb.end());
    sig[v] = {std::move(s), v};
  }
  std::vector<std::pair<std::vector<int>, int>> sorted = sig;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> next(g.n);
  int c = -1;
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i].first != sorted[i - 1].first) ++c;
    next[sorted[i].second] = c;
  }
  bool changed = next != color;
  color = std::move(next);
  return changed;
}

void refine_to_fixpoint(const Indexed& g, std::vector<int>& color) {
  while (refine(g, color)) {
  }
}

std::string encode_under(const Indexed& g, const std::vector<int>& color) {
  // color is discrete here: color[v] is the canonical position of v
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < g.n; ++u)
    for (int v = u + 1; v < g.n; ++v)
      if (g.adj[u][v]) {
        int a = color[u], b = color[v];
        if (a > b) std::swap(a, b);
        edges.emplace_back(a, b);
      }
  std::sort(edges.begin(), edges.end());
  std::string out;
  out += "n" + std::to_string(g.n) + ";";
  for (auto& [a, b] : edges) out += std::to_string(a) + "-" + std::to_string(b) + ";";
  return out;
}

void canon_search(const Indexed& g, std::vector<int> color, std::optional<std::string>& best,
                  std::vector<int>* best_perm) {
  refine_to_fixpoint(g, color);
  // find the first color class with more than one member
  int ncolors = 0;
  for (int v = 0; v < g.n; ++v) ncolors = std::max(ncolors, color[v] + 1);
  std::vector<std::vector<int>> cell(ncolors);
  for (int v = 0; v < g.n; ++v) cell[color[v]].push_back(v);
  int target = -1;
  for (int c = 0; c < ncolors; ++c)
    if (cell[c].size() > 1) {
      target = c;
      break;
    }
  if (target < 0) {
    std::string enc = encode_under(g, color);
    if (!best || enc < *best) {
      best = std::move(enc);
      if (best_perm) *best_perm = color;
    }
    return;
  }
  for (int v : cell[target]) {
    // individualize v: it precedes the rest of its cell
    std::vector<int> c2(g.n);
    for (int w = 0; w < g.n; ++w) {
      c2[w] = 2 * color[w];
      if (color[w] == target && w != v) c2[w] += 1;
    }
    canon_search(g, std::move(c2), best, best_perm);
  }
}

}  // namespace

std::string canonical_label(const Graph& g) {
  Indexed ig(g);
  std::optional<std::string> best;
  canon_search(ig, std::vector<int>(ig.n, 0), best, nullptr);
  if (!best) return "n0;";
  return *best;
}

CanonicalForm canonical_form(const Graph& g) {
  Indexed ig(g);
  std::optional<std::string> best;
  std::vector<int> perm;
  canon_search(ig, std::vector<int>(ig.n, 0), best, &perm);
  CanonicalForm cf;
  cf.label = best ? *best : "n0;";
  for (int i = 0; i < ig.n; ++i) cf.relabel[ig.labels[i]] = perm.empty() ? i + 1 : perm[i] + 1;
  return cf;
}

}  // namespace cmc
