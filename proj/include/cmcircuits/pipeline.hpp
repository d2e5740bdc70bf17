#ifndef CMCIRCUITS_PIPELINE_HPP
#define CMCIRCUITS_PIPELINE_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cmcircuits/cayley.hpp"
#include "cmcircuits/combres.hpp"
#include "cmcircuits/config.hpp"
#include "cmcircuits/graph.hpp"
#include "cmcircuits/poly.hpp"

namespace cmc {

// On-disk store of circuit polynomials keyed by the canonical label of the
// circuit.  Entries hold the polynomial relabeled onto canonical vertices,
// gzip-compressed with a checksum, plus provenance.
class PolyCache {
 public:
  explicit PolyCache(std::string dir);

  std::optional<Poly> load(const std::string& label) const;  // throws checksum_error
  void store(const std::string& label, const Poly& poly,
             const std::string& provenance = "{}") const;

  std::string entry_path(const std::string& label) const;

 private:
  std::string dir_;
  mutable std::mutex mu_;
};

struct DiscardedFactor {
  Graph support;
  bool support_ok = false;
  bool membership_ok = false;
};

struct NodeResult {
  Graph graph;
  Poly polynomial;  // canonical; elimination variable eliminated
  bool from_irreducible = true;
  std::string provenance;  // human-readable JSON
  std::vector<DiscardedFactor> discarded;
};

// One internal step of the elimination: resultant of the child polynomials,
// factorization over the rationals, and factor selection against the target
// support with probabilistic ideal membership.
NodeResult node_step(const Poly& v, const Poly& w, const Edge& elim, const Graph& target,
                     const std::optional<Edge>& next_elim, const RunConfig& config);

struct CircuitPolynomialRecord {
  Graph circuit;
  std::string class_label;
  Poly polynomial;  // canonical, support equals the circuit exactly
  PolyMetrics metrics;
  std::string tree_json;
  std::string provenance;
};

// Post-order execution of a combinatorial resultant tree: leaves resolve to
// catalog generators, internal nodes run node_step, circuit-labeled subtrees
// are cached and reused across runs.
CircuitPolynomialRecord run_tree(const TreePtr& tree, const GeneratorCatalog& catalog,
                                 const RunConfig& config, PolyCache* cache = nullptr);

struct VerificationReport {
  bool support_equal = false;
  bool homogeneous = false;
  bool membership = false;
  bool irreducible_checked = false;
  bool irreducible = false;
  bool all_passed() const {
    return support_equal && homogeneous && membership && (!irreducible_checked || irreducible);
  }
  std::string text;
};

VerificationReport verify_circuit_polynomial(const CircuitPolynomialRecord& record, int samples,
                                             const RunConfig& config,
                                             bool recheck_irreducible = false);

struct SolveResult {
  Graph circuit;
  std::vector<RootInterval> values;    // nonnegative candidate squared distances
  std::vector<RootInterval> negative;  // real roots filtered out as negative
};

// Single unknown distance: specializes the circuit polynomial of the
// fundamental circuit of (Laman basis + uv) and isolates the real roots.
SolveResult solve_unknown_distance(const Graph& g, const std::map<Edge, Rat>& weights,
                                   const Edge& unknown, const GeneratorCatalog& catalog,
                                   const RunConfig& config, PolyCache* cache = nullptr);

}  // namespace cmc

#endif
