#include "cmcircuits/sparsity.hpp"

#include <algorithm>
#include <set>

#include "cmcircuits/errors.hpp"

namespace cmc {

PebbleGame::PebbleGame(std::vector<int> vertex_labels, int ell) : ell_(ell) {
  if (ell != 2 && ell != 3) throw precondition_error("only the (2,2) and (2,3) games are supported");
  std::sort(vertex_labels.begin(), vertex_labels.end());
  vertex_labels.erase(std::unique(vertex_labels.begin(), vertex_labels.end()), vertex_labels.end());
  if (static_cast<int>(vertex_labels.size()) > kMaxVertices)
    throw precondition_error("graph exceeds the supported vertex cap");
  labels_ = std::move(vertex_labels);
  pebbles_.assign(labels_.size(), 2);
  out_.assign(labels_.size(), {});
}

int PebbleGame::index_of(int label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label)
    throw precondition_error("vertex " + std::to_string(label) + " not in pebble game");
  return static_cast<int>(it - labels_.begin());
}

// DFS for a free pebble reachable from `target` along directed edges,
// ignoring pebbles sitting on the two edge endpoints.  On success the path
// is reversed and one pebble moves to `target`.
bool PebbleGame::collect_one(int target, int fa, int fb) {
  const int n = static_cast<int>(labels_.size());
  std::vector<int> parent(n, -2);
  std::vector<int> stack{target};
  parent[target] = -1;
  int found = -1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v != fa && v != fb && pebbles_[v] > 0) {
      found = v;
      break;
    }
    for (int w : out_[v])
      if (parent[w] == -2) {
        parent[w] = v;
        stack.push_back(w);
      }
  }
  if (found < 0) return false;
  // reverse the path found -> ... -> target
  int v = found;
  while (parent[v] != -1) {
    int p = parent[v];
    // p -> v becomes v -> p
    auto& po = out_[p];
    po.erase(std::find(po.begin(), po.end(), v));
    out_[v].push_back(p);
    v = p;
  }
  --pebbles_[found];
  ++pebbles_[target];
  return true;
}

bool PebbleGame::try_insert(const Edge& e) {
  int u = index_of(e.u), v = index_of(e.v);
  while (pebbles_[u] + pebbles_[v] < ell_ + 1) {
    if (pebbles_[u] < 2 && collect_one(u, u, v)) continue;
    if (pebbles_[v] < 2 && collect_one(v, u, v)) continue;
    break;
  }
  if (pebbles_[u] + pebbles_[v] >= ell_ + 1) {
    // accept: orient away from the endpoint that pays the pebble
    int tail = pebbles_[u] > 0 ? u : v;
    int head = tail == u ? v : u;
    --pebbles_[tail];
    out_[tail].push_back(head);
    accepted_.push_back(e);
    last_region_.clear();
    return true;
  }
  // rejected: record the reachable region from both endpoints
  const int n = static_cast<int>(labels_.size());
  std::vector<char> seen(n, 0);
  std::vector<int> stack{u, v};
  seen[u] = seen[v] = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int w : out_[x])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  last_region_.clear();
  for (int i = 0; i < n; ++i)
    if (seen[i]) last_region_.push_back(labels_[i]);
  return false;
}

std::vector<int> PebbleGame::last_rejection_region() const { return last_region_; }

int rank(const Graph& g) {
  if (g.vertex_count() > kMaxVertices)
    throw precondition_error("graph exceeds the supported vertex cap");
  if (g.edge_count() == 0) return 0;
  PebbleGame game(g.vertices());
  int r = 0;
  for (const Edge& e : g.edges())
    if (game.try_insert(e)) ++r;
  return r;
}

bool is_independent(const Graph& g) { return rank(g) == g.edge_count(); }

bool is_rigid(const Graph& g) {
  if (g.vertex_count() < 2) return true;
  return rank(g) == 2 * g.vertex_count() - 3;
}

bool is_laman(const Graph& g) {
  return g.edge_count() == 2 * g.vertex_count() - 3 && is_independent(g);
}

bool is_circuit(const Graph& g) {
  if (g.edge_count() == 0) return false;
  Graph h = Graph::from_edges(g.edges());  // work on the span
  int m = h.edge_count();
  if (m != 2 * h.vertex_count() - 2) return false;  // count identity of circuits
  if (rank(h) == m) return false;                   // independent
  for (const Edge& e : h.edges()) {
    Graph he = h.without_edge(e);
    if (rank(he) != m - 1) return false;  // some deletion still dependent
  }
  return true;
}

Graph fundamental_circuit(const Graph& g) {
  int n = g.vertex_count(), m = g.edge_count();
  if (m != 2 * n - 2)
    throw precondition_error("fundamental_circuit expects a Laman-plus-one graph");
  PebbleGame game(g.vertices());
  std::optional<Edge> rejected;
  std::vector<int> region;
  for (const Edge& e : g.edges()) {
    if (!game.try_insert(e)) {
      if (rejected) throw precondition_error("fundamental_circuit expects rank 2n-3");
      rejected = e;
      region = game.last_rejection_region();
    }
  }
  if (!rejected) throw precondition_error("fundamental_circuit expects a dependent graph");
  std::set<int> rset(region.begin(), region.end());
  std::vector<Edge> circ{*rejected};
  for (const Edge& e : g.edges())
    if (!(e == *rejected) && rset.count(e.u) && rset.count(e.v)) circ.push_back(e);
  return Graph::from_edges(std::move(circ));
}

EdgeClassification classify_edges(const Graph& g) {
  if (!is_rigid(g) || is_independent(g))
    throw precondition_error("classify_edges expects a rigid dependent graph");
  EdgeClassification cls;
  int full = 2 * g.vertex_count() - 3;
  for (const Edge& e : g.edges())
    cls.redundant[e] = rank(g.without_edge(e)) == full;
  return cls;
}

std::vector<Graph> rigid_components(const Graph& g) {
  const auto& vs = g.vertices();
  int n = g.vertex_count();
  if (n > kMaxVertices) throw precondition_error("graph exceeds the supported vertex cap");
  if (g.edge_count() == 0) return {};
  // Enumerate rigid vertex subsets; keep the inclusion-maximal ones.  At this
  // scale (n <= 12) the full subset sweep is exact and instant.
  std::vector<std::vector<int>> rigid_sets;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) < 2) continue;
    std::vector<int> sub;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sub.push_back(vs[i]);
    Graph ind = g.induced(sub);
    if (ind.edge_count() == 0) continue;
    if (rank(ind) == 2 * static_cast<int>(sub.size()) - 3) rigid_sets.push_back(sub);
  }
  std::vector<std::vector<int>> maximal;
  for (const auto& s : rigid_sets) {
    bool contained = false;
    for (const auto& t : rigid_sets) {
      if (t.size() <= s.size()) continue;
      if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
        contained = true;
        break;
      }
    }
    if (!contained) maximal.push_back(s);
  }
  std::sort(maximal.begin(), maximal.end());
  maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());
  std::vector<Graph> comps;
  for (const auto& s : maximal) {
    Graph c = g.induced(s);
    if (c.edge_count() > 0) comps.push_back(std::move(c));
  }
  return comps;
}

std::optional<InverseH2> inverse_henneberg2(const Graph& c, int a) {
  if (c.degree(a) != 3)
    throw precondition_error("inverse Henneberg II needs a degree-3 vertex");
  std::vector<int> nb = c.neighbors(a);
  std::vector<Edge> candidates;
  for (size_t i = 0; i < nb.size(); ++i)
    for (size_t j = i + 1; j < nb.size(); ++j) {
      Edge f(nb[i], nb[j]);
      if (!c.has_edge(f)) candidates.push_back(f);
    }
  std::sort(candidates.begin(), candidates.end());
  for (const Edge& f : candidates) {
    Graph cand = c.without_vertex(a).with_edge(f);
    if (is_circuit(cand)) return InverseH2{cand, f};
  }
  return std::nullopt;
}

}  // namespace cmc
