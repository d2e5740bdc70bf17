#ifndef CMCIRCUITS_SPARSITY_HPP
#define CMCIRCUITS_SPARSITY_HPP

#include <map>
#include <optional>
#include <vector>

#include "cmcircuits/graph.hpp"

namespace cmc {

// Hard cap on supported vertex counts; everything here is desk scale.
inline constexpr int kMaxVertices = 12;

// The (2,l) pebble game of Lee and Streinu.  l = 3 gives the 2D rigidity
// matroid; l = 2 is the variant whose independent sets have 2n-2 edges.
// Mutable scratch structure: public operations construct one internally.
class PebbleGame {
 public:
  explicit PebbleGame(std::vector<int> vertex_labels, int ell = 3);

  // Attempts to insert edge e.  Returns true when accepted (independent of
  // the edges accepted so far).
  bool try_insert(const Edge& e);

  int accepted_count() const { return static_cast<int>(accepted_.size()); }
  const std::vector<Edge>& accepted() const { return accepted_; }

  // After a failed try_insert(e): vertex labels of the region blocking
  // pebble collection (the reachable set from both endpoints).  The
  // fundamental circuit of e is e plus the accepted edges inside it.
  std::vector<int> last_rejection_region() const;

 private:
  int index_of(int label) const;
  bool collect_one(int target, int forbidden_a, int forbidden_b);

  int ell_;
  std::vector<int> labels_;
  std::vector<int> pebbles_;
  std::vector<std::vector<int>> out_;  // directed accepted edges
  std::vector<Edge> accepted_;
  std::vector<int> last_region_;
};

struct EdgeClassification {
  std::map<Edge, bool> redundant;  // true = redundant, false = critical
};

// Rank of G in the (2,3)-sparsity matroid (size of a maximal sparse subset).
int rank(const Graph& g);

bool is_independent(const Graph& g);
// Rigid relative to G's own vertex set: rank == 2|V| - 3.
bool is_rigid(const Graph& g);
bool is_laman(const Graph& g);

// Minimal dependent edge set.  Isolated vertices are ignored: this is a
// property of the edge set and its span.
bool is_circuit(const Graph& g);

// G must be Laman-plus-one (|E| = 2|V|-2, rank = 2|V|-3); returns its unique
// circuit, found from the pebble-game rejection region.
Graph fundamental_circuit(const Graph& g);

// G must be rigid and dependent; labels every edge redundant or critical.
EdgeClassification classify_edges(const Graph& g);

// Partition of E(G) into maximal rigid subgraphs.
std::vector<Graph> rigid_components(const Graph& g);

// Inverse Henneberg II on a degree-3 vertex of circuit c: removes the vertex
// and adds one missing edge among its neighbors so that the result is again
// a circuit.  Lexicographically smallest working edge wins; nullopt when no
// choice works.
struct InverseH2 {
  Graph circuit;
  Edge added;
};
std::optional<InverseH2> inverse_henneberg2(const Graph& c, int a);

}  // namespace cmc

#endif
