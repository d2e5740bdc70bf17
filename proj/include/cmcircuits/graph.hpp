#ifndef CMCIRCUITS_GRAPH_HPP
#define CMCIRCUITS_GRAPH_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cmc {

// Undirected edge with endpoints stored in increasing order.  Vertex labels
// are arbitrary positive integers; loops are rejected at construction.
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b);

  auto operator<=>(const Edge&) const = default;
};

std::string to_string(const Edge& e);

// Labeled graph: ordered vertex set plus a sorted, duplicate-free edge set.
// Values are immutable after construction; every mutator returns a new graph.
// The default factories take the vertex set to be the span of the edges;
// isolated vertices exist only when passed explicitly.
class Graph {
 public:
  Graph() = default;

  // Builds from raw pairs: deduplicates, orders endpoints, rejects loops.
  static Graph from_pairs(const std::vector<std::pair<int, int>>& pairs);
  static Graph from_edges(std::vector<Edge> edges);
  static Graph from_edges(std::vector<Edge> edges, std::vector<int> vertices);

  const std::vector<int>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  bool has_vertex(int v) const;
  bool has_edge(const Edge& e) const;
  int degree(int v) const;
  std::vector<int> neighbors(int v) const;

  Graph with_edge(const Edge& e) const;       // endpoints join the vertex set
  Graph without_edge(const Edge& e) const;    // vertex set unchanged
  Graph without_vertex(int v) const;          // drops v and its edges
  Graph induced(const std::vector<int>& vs) const;

  // True when every vertex is an endpoint of some edge.
  bool spans_vertices() const;

  bool operator==(const Graph&) const = default;

 private:
  std::vector<int> vertices_;
  std::vector<Edge> edges_;
};

// Union/intersection statistics of two graphs, including their common
// subgraph on the shared vertices and shared edges.
struct SetStats {
  int n_union = 0;
  int n_cap = 0;
  int m_union = 0;
  int m_cap = 0;
  Graph common;
};

SetStats set_stats(const Graph& g1, const Graph& g2);
Graph graph_union(const Graph& g1, const Graph& g2);

// Edge-preserving vertex bijection test, by backtracking with degree and
// neighbor-degree pruning.  Intended for graphs of at most a dozen vertices.
bool is_isomorphic(const Graph& g1, const Graph& g2);

// Invokes fn for each isomorphism g1 -> g2 (as a vertex map in g1's vertex
// order).  fn returns false to stop the enumeration.
void for_each_isomorphism(const Graph& g1, const Graph& g2,
                          const std::function<bool(const std::vector<int>&)>& fn);

// Canonical byte string: equal iff the graphs are isomorphic.  Computed by
// minimizing the relabeled edge-set encoding over an individualization-
// refinement search tree.
std::string canonical_label(const Graph& g);

// Canonical label plus a witness relabeling onto vertices 1..n.  Relabeling
// two isomorphic graphs this way yields the identical graph.
struct CanonicalForm {
  std::string label;
  std::map<int, int> relabel;  // original vertex -> canonical vertex (1-based)
};
CanonicalForm canonical_form(const Graph& g);

}  // namespace cmc

#endif
