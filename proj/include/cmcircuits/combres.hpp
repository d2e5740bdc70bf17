#ifndef CMCIRCUITS_COMBRES_HPP
#define CMCIRCUITS_COMBRES_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmcircuits/graph.hpp"

namespace cmc {

// Combinatorial resultant: the union of two graphs with one shared edge
// removed.  The 2-sum is the special case of a single shared edge.
Graph comb_res(const Graph& g1, const Graph& g2, const Edge& e);

// Two circuits intersect properly when their common subgraph is Laman;
// equivalently their combinatorial resultant has 2n-2 edges.
bool is_properly_intersecting(const Graph& c1, const Graph& c2);

// Inverse of comb_res for a 3-connected circuit with >= 5 vertices: returns
// circuits (a, b) and the eliminated edge with c == comb_res(a, b, e).
// a comes from an inverse Henneberg II at the lowest eligible degree-3
// vertex; b is the unique circuit of (c minus the lowest non-adjacent
// degree-3 vertex) plus e.
struct Decomposition {
  Graph a;
  Graph b;
  Edge elim;
};
Decomposition decompose_circuit(const Graph& c);

// 2-split: for a circuit with a separating vertex pair {u,v}, the two
// circuits obtained by splitting there and adding uv to each side.  nullopt
// for 3-connected circuits.  Pairs are scanned in lexicographic order.
struct TwoSeparation {
  Graph c1;
  Graph c2;
  Edge uv;
};
std::optional<TwoSeparation> two_separation(const Graph& c);

// True vertex 3-connectivity (n >= 4 and no separating pair).
bool is_three_connected(const Graph& g);

struct TreeNode;
using TreePtr = std::shared_ptr<const TreeNode>;

// Node of a combinatorial resultant tree.  Leaves carry generator graphs;
// internal nodes carry graph == comb_res(left->graph, right->graph, elim).
struct TreeNode {
  Graph graph;
  TreePtr left;
  TreePtr right;
  std::optional<Edge> elim;

  bool is_leaf() const { return left == nullptr; }
};

TreePtr make_leaf(Graph g);
TreePtr make_node(Graph g, TreePtr left, TreePtr right, Edge elim);
int tree_depth(const TreePtr& t);
std::vector<TreePtr> tree_nodes(const TreePtr& t);  // post-order

// Dependent graphs allowed at the leaves; always contains K4.
class GeneratorSet {
 public:
  static GeneratorSet k4_only();
  static GeneratorSet k4_k5();
  static GeneratorSet from_graphs(std::vector<Graph> members);

  const std::vector<Graph>& members() const { return members_; }
  // Index of a member isomorphic to g, preferring more edges then more
  // vertices ("largest first"); -1 when none matches.
  int match(const Graph& g) const;

 private:
  std::vector<Graph> members_;
};

enum class PlanMode { kGreedy, kMinElimDegree };

// Tree whose nodes are all circuits and whose leaves are all K4, built by
// repeated 2-splits and inverse Henneberg II decompositions.
TreePtr build_circuit_tree(const Graph& circuit);

// Generalized tree: nodes isomorphic to a generator become leaves, and a
// complete generator on five or more vertices may seed a chain of internal
// nodes that shed excess edges one K4-resultant at a time (keeping the
// vertex set).  Falls back to the circuit tree when no such plan exists.
TreePtr build_extended_tree(const Graph& circuit, const GeneratorSet& gen,
                            PlanMode mode = PlanMode::kGreedy);

// Checks leaf membership in gen (up to isomorphism), the comb_res identity
// and elimination-edge membership at internal nodes, and dependence of every
// node graph.  On failure returns false and fills *diagnostic.
bool validate_tree(const TreePtr& t, const GeneratorSet& gen, std::string* diagnostic = nullptr);

}  // namespace cmc

#endif
